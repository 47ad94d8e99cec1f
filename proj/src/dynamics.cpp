#include "madelung_lab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "madelung_lab/energy.hpp"
#include "madelung_lab/fft.hpp"
#include "madelung_lab/metrics.hpp"
#include "madelung_lab/spectral.hpp"
#include "madelung_lab/summation.hpp"

namespace mlab {

std::string to_string(Scheme s) { return s == Scheme::strang_gp ? "strang_gp" : "rk4_hgp"; }

std::string to_string(Fault f) { return f == Fault::none ? "none" : "drop-half-step"; }

Scheme parse_scheme(const std::string& text) {
  if (text == "strang_gp") return Scheme::strang_gp;
  if (text == "rk4_hgp") return Scheme::rk4_hgp;
  throw ParameterError("unknown scheme '" + text + "'");
}

Fault parse_fault(const std::string& text) {
  if (text == "none") return Fault::none;
  if (text == "drop-half-step") return Fault::drop_half_step;
  throw ParameterError("unknown fault '" + text + "'");
}

std::size_t step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be >= 0");
  // Tolerate t_end / dt landing a few ulps above an integer.
  return static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
}

namespace {

void validate(const SimConfig& c) {
  step_count(c.t_end, c.dt);
  if (c.snapshot_stride == 0) throw ParameterError("snapshot_stride must be >= 1");
  if (!(c.rho_floor > 0.0)) throw ParameterError("rho_floor must be positive");
  if (!(c.cfl > 0.0)) throw ParameterError("cfl must be positive");
}

template <class State, class Step, class Diag>
Trajectory<State> integrate(const State& s0, const SimConfig& config, Step&& step, Diag&& diag) {
  validate(config);
  Trajectory<State> tr{s0.grid(), config, 0, 0.0, {}, {}, {}};
  tr.steps = step_count(config.t_end, config.dt);
  tr.dt = tr.steps ? config.t_end / static_cast<double>(tr.steps) : 0.0;
  State cur = s0;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.diagnostics.push_back(diag(cur, t));
    tr.states.push_back(cur);
  };
  record(0.0);
  for (std::size_t n = 1; n <= tr.steps; ++n) {
    const double t0 = static_cast<double>(n - 1) * tr.dt;
    cur = step(cur, tr.dt, t0);
    if (n % config.snapshot_stride == 0 || n == tr.steps) {
      record(n == tr.steps ? config.t_end : static_cast<double>(n) * tr.dt);
    }
  }
  return tr;
}

}  // namespace

// GP ---------------------------------------------------------------------

void gp_nonlinear_substep(ComplexField& q, double tau) {
  for (auto& z : q.samples()) z *= std::polar(1.0, -2.0 * tau * (std::norm(z) - 1.0));
}

void gp_linear_substep(ComplexField& q, double tau) {
  const Grid1D& g = q.grid();
  auto& data = q.samples();
  fft::forward(data);
  const double inv_n = 1.0 / static_cast<double>(g.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double xi = g.xi(k);
    data[k] *= std::polar(inv_n, -xi * xi * tau);
  }
  fft::backward(data);
}

ComplexField step_gp_strang(const ComplexField& q, double dt, double t, Fault fault) {
  ComplexField out = q;
  gp_nonlinear_substep(out, 0.5 * dt);
  gp_linear_substep(out, dt);
  if (fault != Fault::drop_half_step) gp_nonlinear_substep(out, 0.5 * dt);
  if (!out.all_finite()) throw BlowUpError("GP step produced a non-finite value", t + dt);
  return out;
}

Diagnostics gp_diagnostics(const ComplexField& q, double t) {
  Diagnostics d;
  d.t = t;
  d.energy = energy_es(q, SobolevIndex(1.0)).total;
  d.min_value = vacuum_scan(q).min_modulus;
  CompensatedSum mass;
  for (const auto& z : q.samples()) mass.add(std::norm(z) - 1.0);
  d.mass_like = q.grid().spacing() * mass.value();
  return d;
}

GpTrajectory evolve_gp(const ComplexField& q0, const SimConfig& config) {
  q0.require_finite("evolve_gp");
  if (config.scheme != Scheme::strang_gp) throw ParameterError("evolve_gp needs scheme strang_gp");
  return integrate(q0, config,
                   [&](const ComplexField& q, double dt, double t) {
                     return step_gp_strang(q, dt, t, config.fault);
                   },
                   [](const ComplexField& q, double t) { return gp_diagnostics(q, t); });
}

// hGP --------------------------------------------------------------------

namespace {

RealVector product(const Grid1D& g, const RealVector& a, const RealVector& b, bool dealias) {
  if (dealias) return dealiased_product(g, a, b);
  RealVector out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

}  // namespace

HydroRate rhs_hgp(const HydroState& state, double rho_floor, bool dealias) {
  const Grid1D& g = state.grid();
  const RealVector& rho = state.rho();
  const RealVector& v = state.v();
  const auto it = std::min_element(rho.begin(), rho.end());
  if (*it <= rho_floor) {
    const auto j = static_cast<std::size_t>(it - rho.begin());
    throw VacuumError("vacuum breach: rho = " + std::to_string(*it) + " at x = " +
                          std::to_string(g.x(j)) + " is not above the floor " +
                          std::to_string(rho_floor),
                      g.x(j), *it);
  }
  const RealVector drho = spectral_derivative(g, rho, 1);
  RealVector u(g.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = 0.5 * drho[j] / rho[j];
  const RealVector du = spectral_derivative(g, u, 1);
  const RealVector uu = product(g, u, u, dealias);
  const RealVector rv = product(g, rho, v, dealias);
  const RealVector vv = product(g, v, v, dealias);

  RealVector pressure(g.size()), advect(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    pressure[j] = du[j] + uu[j];
    advect[j] = -vv[j] - 2.0 * rho[j] + pressure[j];
  }
  HydroRate r;
  r.drho = spectral_derivative(g, rv, 1);
  for (double& x : r.drho) x *= -2.0;
  r.dv = spectral_derivative(g, advect, 1);
  return r;
}

double bogoliubov_max(const Grid1D& grid) {
  const double xi = grid.xi_max();
  return xi * std::sqrt(xi * xi + 4.0);
}

double hgp_dt_limit(const Grid1D& grid, double cfl) { return cfl / bogoliubov_max(grid); }

HydroState step_hgp_rk4(const HydroState& state, double dt, const SimConfig& config, double t) {
  const Grid1D& g = state.grid();
  const std::size_t n = state.size();
  auto shifted = [&](const HydroRate& k, double c) {
    RealVector rho(n), v(n);
    for (std::size_t j = 0; j < n; ++j) {
      rho[j] = state.rho()[j] + c * k.drho[j];
      v[j] = state.v()[j] + c * k.dv[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(rho[j]) || !std::isfinite(v[j])) {
        throw BlowUpError("hGP stage produced a non-finite value", t + dt);
      }
    }
    return std::pair<RealVector, RealVector>(std::move(rho), std::move(v));
  };
  auto rate = [&](std::pair<RealVector, RealVector>&& rv) {
    const auto& rho = rv.first;
    const auto it = std::min_element(rho.begin(), rho.end());
    if (*it <= config.rho_floor) {
      const auto j = static_cast<std::size_t>(it - rho.begin());
      throw VacuumError("vacuum breach during hGP step at t = " + std::to_string(t), g.x(j), *it);
    }
    return rhs_hgp(HydroState(g, std::move(rv.first), std::move(rv.second)), config.rho_floor,
                   config.dealias);
  };
  const HydroRate k1 = rhs_hgp(state, config.rho_floor, config.dealias);
  const HydroRate k2 = rate(shifted(k1, 0.5 * dt));
  const HydroRate k3 = rate(shifted(k2, 0.5 * dt));
  const HydroRate k4 = rate(shifted(k3, dt));
  RealVector rho(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    rho[j] = state.rho()[j] +
             dt / 6.0 * (k1.drho[j] + 2.0 * k2.drho[j] + 2.0 * k3.drho[j] + k4.drho[j]);
    v[j] = state.v()[j] + dt / 6.0 * (k1.dv[j] + 2.0 * k2.dv[j] + 2.0 * k3.dv[j] + k4.dv[j]);
    if (!std::isfinite(rho[j]) || !std::isfinite(v[j])) {
      throw BlowUpError("hGP step produced a non-finite value", t + dt);
    }
  }
  const auto it = std::min_element(rho.begin(), rho.end());
  if (*it <= config.rho_floor) {
    const auto j = static_cast<std::size_t>(it - rho.begin());
    throw VacuumError("vacuum breach at t = " + std::to_string(t + dt), g.x(j), *it);
  }
  return HydroState(g, std::move(rho), std::move(v));
}

Diagnostics hgp_diagnostics(const HydroState& state, double t) {
  Diagnostics d;
  d.t = t;
  d.energy = energy_hydro(state).total;
  d.min_value = state.min_density();
  CompensatedSum mass;
  for (double r : state.rho()) mass.add(r - 1.0);
  d.mass_like = state.grid().spacing() * mass.value();
  return d;
}

HgpTrajectory evolve_hgp(const HydroState& state0, const SimConfig& config) {
  if (config.scheme != Scheme::rk4_hgp) throw ParameterError("evolve_hgp needs scheme rk4_hgp");
  validate(config);
  const double limit = hgp_dt_limit(state0.grid(), config.cfl);
  if (config.dt > limit) {
    throw StabilityError("hGP dt = " + std::to_string(config.dt) + " exceeds the limit " +
                         std::to_string(limit) + " = cfl / max xi sqrt(xi^2 + 4)");
  }
  if (state0.min_density() <= config.rho_floor) {
    rhs_hgp(state0, config.rho_floor, config.dealias);  // throws with location
  }
  return integrate(state0, config,
                   [&](const HydroState& s, double dt, double t) {
                     return step_hgp_rk4(s, dt, config, t);
                   },
                   [](const HydroState& s, double t) { return hgp_diagnostics(s, t); });
}

// Conjugation --------------------------------------------------------------

ConjugationReport conjugation_check(const HydroState& state0, const SimConfig& gp,
                                    const SimConfig& hgp, SobolevIndex s,
                                    std::size_t compare_points) {
  if (compare_points == 0) throw ParameterError("compare_points must be >= 1");
  if (std::abs(gp.t_end - hgp.t_end) > 1e-14 * std::max(1.0, gp.t_end)) {
    throw ParameterError("conjugation_check: GP and hGP end times differ");
  }
  auto aligned = [&](SimConfig c) {
    std::size_t n = step_count(c.t_end, c.dt);
    n = std::max<std::size_t>(1, (n + compare_points - 1) / compare_points) * compare_points;
    c.dt = c.t_end / static_cast<double>(n);
    c.snapshot_stride = n / compare_points;
    return c;
  };
  SimConfig gc = aligned(gp);
  SimConfig hc = aligned(hgp);
  gc.scheme = Scheme::strang_gp;
  hc.scheme = Scheme::rk4_hgp;

  const GpTrajectory gt = evolve_gp(madelung_inverse(state0), gc);
  const HgpTrajectory ht = evolve_hgp(state0, hc);
  ConjugationReport r;
  r.s = s.value();
  r.t_end = gp.t_end;
  r.n_points = state0.size();
  r.length = state0.grid().length();
  r.gp_dt = gt.dt;
  r.hgp_dt = ht.dt;
  const std::size_t count = std::min(gt.states.size(), ht.states.size());
  for (std::size_t i = 0; i < count; ++i) {
    r.times.push_back(ht.times[i]);
    r.discrepancy.push_back(
        metric_theta(madelung_forward(gt.states[i], hc.rho_floor), ht.states[i], s));
  }
  r.final_discrepancy = r.discrepancy.empty() ? 0.0 : r.discrepancy.back();
  return r;
}

}  // namespace mlab
