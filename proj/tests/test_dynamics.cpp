#include <cmath>

#include "doctest.h"
#include "madelung_lab/dynamics.hpp"
#include "madelung_lab/energy.hpp"
#include "madelung_lab/metrics.hpp"
#include "madelung_lab/random_fields.hpp"
#include "madelung_lab/spectral.hpp"
#include "test_support.hpp"

using namespace mlab;
using test_support::max_abs_diff;

namespace {

ComplexField smooth_field(const Grid1D& g, std::uint64_t i = 0) {
  auto rng = stream_rng(31, i);
  return random_vacuum_free(g, rng, 0.15, 0.4);
}

double l2_diff(const ComplexField& a, const ComplexField& b) { return l2_norm(a - b); }

double state_diff(const HydroState& a, const HydroState& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    m = std::max({m, std::abs(a.rho()[j] - b.rho()[j]), std::abs(a.v()[j] - b.v()[j])});
  }
  return m;
}

SimConfig hgp_config(double dt, double t_end) {
  SimConfig c;
  c.scheme = Scheme::rk4_hgp;
  c.dt = dt;
  c.t_end = t_end;
  c.snapshot_stride = 1u << 30;
  return c;
}

}  // namespace

TEST_CASE("constants are fixed points of the GP step") {
  const Grid1D g(40.0, 256);
  for (Complex c : {Complex(1.0, 0.0), std::polar(1.0, 2.3)}) {
    ComplexField q = ComplexField::constant(g, c);
    for (int n = 0; n < 10; ++n) q = step_gp_strang(q, 1e-2);
    // Exact up to FFT round trip of a constant.
    CHECK(max_abs_diff(q.samples(), ComplexField::constant(g, c).samples()) < 1e-15);
  }
}

TEST_CASE("substeps") {
  const Grid1D g(40.0, 512);
  const ComplexField q = smooth_field(g);
  ComplexField nl = q;
  gp_nonlinear_substep(nl, 0.37);
  for (std::size_t j = 0; j < g.size(); ++j) REQUIRE(std::abs(std::abs(nl[j]) - std::abs(q[j])) < 4e-16);

  ComplexField lin = q;
  gp_linear_substep(lin, 0.37);
  CHECK(gp_diagnostics(lin, 0.0).mass_like ==
        doctest::Approx(gp_diagnostics(q, 0.0).mass_like).epsilon(1e-12));
  gp_linear_substep(lin, -0.37);
  CHECK(max_abs_diff(lin.samples(), q.samples()) < 1e-13);
}

TEST_CASE("GP evolution of the ground state and of q_delta") {
  const Grid1D g(60.0, 1024);
  SimConfig c;
  c.dt = 1e-2;
  c.t_end = 1.0;
  c.snapshot_stride = 10;
  const GpTrajectory flat = evolve_gp(ComplexField::constant(g, 1.0), c);
  CHECK(flat.steps == 100);
  CHECK(flat.times.size() == 11);
  CHECK(flat.times.back() == 1.0);
  for (const auto& d : flat.diagnostics) REQUIRE(d.energy < 1e-28);

  c.dt = 1e-3;
  c.snapshot_stride = 50;
  const GpTrajectory tr = evolve_gp(minimizer_q_delta(0.5, g), c);
  std::vector<double> energies, mins;
  for (std::size_t i = 0; i < tr.diagnostics.size(); ++i) {
    if (i > 0) REQUIRE(tr.times[i] > tr.times[i - 1]);
    energies.push_back(tr.diagnostics[i].energy);
    mins.push_back(tr.diagnostics[i].min_value);
  }
  CHECK(tr.diagnostics.size() == tr.states.size());
  const VacuumCertificate cert = vacuum_certificate(energies, mins, energies.front() + 0.01);
  CHECK(cert.passed);
  CHECK_THROWS_AS(evolve_gp(minimizer_q_delta(0.5, g), SimConfig{-1.0}), ParameterError);
}

TEST_CASE("Strang splitting is second order on smooth data") {
  const Grid1D g(40.0, 256);
  const ComplexField q0 = smooth_field(g);
  SimConfig c;
  c.t_end = 0.5;
  c.snapshot_stride = 1u << 30;
  std::vector<ComplexField> finals;
  std::vector<double> drifts;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    c.dt = dt;
    const GpTrajectory tr = evolve_gp(q0, c);
    finals.push_back(tr.states.back());
    drifts.push_back(std::abs(tr.diagnostics.back().energy - tr.diagnostics.front().energy));
  }
  const double ratio = l2_diff(finals[0], finals[1]) / l2_diff(finals[1], finals[2]);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
  CHECK(drifts[0] / drifts[1] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("dropping the trailing half step breaks second order") {
  const Grid1D g(40.0, 256);
  const ComplexField q0 = smooth_field(g);
  SimConfig c;
  c.t_end = 0.5;
  c.dt = 2e-3;
  c.snapshot_stride = 1u << 30;
  const GpTrajectory good = evolve_gp(q0, c);
  c.fault = Fault::drop_half_step;
  const GpTrajectory bad = evolve_gp(q0, c);
  const auto drift = [](const GpTrajectory& t) {
    return std::abs(t.diagnostics.back().energy - t.diagnostics.front().energy);
  };
  CHECK(drift(bad) > 100.0 * drift(good));
  CHECK(parse_fault("drop-half-step") == Fault::drop_half_step);
  CHECK_THROWS_AS(parse_fault("bogus"), ParameterError);
}

TEST_CASE("hGP right-hand side") {
  const Grid1D g(40.0, 256);
  const HydroRate zero = rhs_hgp(HydroState::ground(g));
  for (std::size_t j = 0; j < g.size(); ++j) {
    REQUIRE(std::abs(zero.drho[j]) < 1e-14);
    REQUIRE(std::abs(zero.dv[j]) < 1e-14);
  }

  // Even density at rest: rho stays put and v_t is odd.
  RealVector rho(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) rho[j] = 1.0 - 0.3 * std::exp(-g.x(j) * g.x(j));
  const HydroRate r = rhs_hgp(HydroState(g, rho, RealVector(g.size(), 0.0)));
  for (std::size_t j = 1; j < g.size(); ++j) {
    REQUIRE(r.drho[j] == 0.0);
    REQUIRE(std::abs(r.dv[j] + r.dv[g.size() - j]) < 1e-12);
  }

  RealVector low(g.size(), 1.0);
  low[17] = 1e-7;
  try {
    rhs_hgp(HydroState(g, low, RealVector(g.size(), 0.0)));
    FAIL("expected a vacuum breach");
  } catch (const VacuumError& e) {
    CHECK(e.location() == doctest::Approx(g.x(17)));
  }
}

TEST_CASE("hGP right-hand side matches the time derivative along GP") {
  const Grid1D g(40.0, 256);
  const ComplexField q = smooth_field(g, 1);
  const double tau = 1e-3;
  auto advance = [](ComplexField f, double span) {
    const int sub = 20;
    for (int n = 0; n < sub; ++n) f = step_gp_strang(f, span / sub);
    return f;
  };
  const HydroState plus = madelung_forward(advance(q, tau));
  const HydroState minus = madelung_forward(advance(q, -tau));
  const HydroRate r = rhs_hgp(madelung_forward(q));
  double err = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double fd_rho = (plus.rho()[j] - minus.rho()[j]) / (2.0 * tau);
    const double fd_v = (plus.v()[j] - minus.v()[j]) / (2.0 * tau);
    err = std::max({err, std::abs(fd_rho - r.drho[j]), std::abs(fd_v - r.dv[j])});
    scale = std::max({scale, std::abs(r.drho[j]), std::abs(r.dv[j])});
  }
  CHECK(err < 1e-4 * scale);
}

TEST_CASE("hGP evolution") {
  const Grid1D g(40.0, 256);
  const double limit = hgp_dt_limit(g);
  CHECK(limit == doctest::Approx(0.5 / bogoliubov_max(g)));
  CHECK_THROWS_AS(evolve_hgp(HydroState::ground(g), hgp_config(2.0 * limit, 0.1)), StabilityError);
  CHECK_THROWS_AS(evolve_hgp(HydroState::ground(g), SimConfig{}), ParameterError);

  const HgpTrajectory flat = evolve_hgp(HydroState::ground(g), hgp_config(limit, 0.05));
  CHECK(state_diff(flat.states.back(), HydroState::ground(g)) < 1e-14);

  const HydroState s0 = madelung_forward(smooth_field(g, 2));
  const HgpTrajectory tr = evolve_hgp(s0, hgp_config(limit, 1.0));
  const Diagnostics& d0 = tr.diagnostics.front();
  const Diagnostics& d1 = tr.diagnostics.back();
  CHECK(std::abs(d1.mass_like - d0.mass_like) < 1e-8);
  CHECK(std::abs(d1.energy - d0.energy) < 1e-6 * d0.energy);

  // Fourth order in time.
  std::vector<HydroState> finals;
  for (double dt : {limit, 0.5 * limit, 0.25 * limit}) {
    finals.push_back(evolve_hgp(s0, hgp_config(dt, 0.1)).states.back());
  }
  const double ratio = state_diff(finals[0], finals[1]) / state_diff(finals[1], finals[2]);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("conjugation on smooth data") {
  const Grid1D g(40.0, 512);
  SimConfig gp;
  gp.t_end = 0.2;
  gp.dt = 1e-4;
  SimConfig hgp = hgp_config(hgp_dt_limit(g), 0.2);
  const ConjugationReport flat =
      conjugation_check(HydroState::ground(g), gp, hgp, SobolevIndex(1.0), 4);
  CHECK(flat.times.size() == 5);
  CHECK(flat.final_discrepancy < 1e-13);

  const HydroState s0 = madelung_forward(smooth_field(g, 3));
  const ConjugationReport r = conjugation_check(s0, gp, hgp, SobolevIndex(1.0), 4);
  REQUIRE(r.times.size() == 5);
  CHECK(r.times.back() == doctest::Approx(0.2));
  CHECK(r.discrepancy.front() < 1e-10);
  CHECK(r.final_discrepancy < 1e-6);
  gp.dt = 5e-5;
  const ConjugationReport finer = conjugation_check(s0, gp, hgp, SobolevIndex(1.0), 4);
  CHECK(finer.final_discrepancy < 0.5 * r.final_discrepancy);
}
