#include "madelung_lab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "madelung_lab/spectral.hpp"
#include "madelung_lab/summation.hpp"

namespace mlab {

EnergyReport energy_es(const ComplexField& q, SobolevIndex s) {
  s.require_above(0.5, "energy_es");
  q.require_finite("energy_es");
  const SobolevIndex lower = s.shifted(-1.0);
  const ComplexField dq = spectral_derivative(q, 1);
  ComplexField defect(q.grid());
  for (std::size_t j = 0; j < q.size(); ++j) defect[j] = std::norm(q[j]) - 1.0;
  const double grad = h_s_norm(dq, lower);
  const double amp = h_s_norm(defect, lower);
  EnergyReport r;
  r.s = s.value();
  r.gradient_part = 0.5 * grad * grad;
  r.amplitude_part = 0.5 * amp * amp;
  r.total = r.gradient_part + r.amplitude_part;
  r.length = q.grid().length();
  r.n_points = q.size();
  return r;
}

EnergyReport energy_emu(const ComplexField& q, double mu) {
  if (!(mu > 0.5 && mu < 1.0)) {
    throw DomainError("energy_emu: mu must lie in (1/2, 1), got " + std::to_string(mu));
  }
  return energy_es(q, SobolevIndex(mu));
}

EnergyReport energy_hydro(const HydroState& state) {
  const Grid1D& g = state.grid();
  const RealVector drho = spectral_derivative(g, state.rho(), 1);
  CompensatedSum quantum, kinetic, potential;
  for (std::size_t j = 0; j < state.size(); ++j) {
    const double rho = state.rho()[j];
    quantum.add(drho[j] * drho[j] / (4.0 * rho));
    kinetic.add(rho * state.v()[j] * state.v()[j]);
    potential.add((rho - 1.0) * (rho - 1.0));
  }
  const double h = g.spacing();
  EnergyReport r;
  r.s = 1.0;
  // rho'^2/(4 rho) + rho v^2 = |q'|^2 for q = sqrt(rho) e^{i phi}.
  r.gradient_part = 0.5 * h * (quantum.value() + kinetic.value());
  r.amplitude_part = 0.5 * h * potential.value();
  r.total = r.gradient_part + r.amplitude_part;
  r.length = g.length();
  r.n_points = g.size();
  return r;
}

EnergyReport gl_energy_from_profile(const ComplexField& q, const ComplexField& dq) {
  require_same_grid(q.grid(), dq.grid(), "gl_energy_from_profile");
  const Grid1D& g = q.grid();
  if (g.size() < 4) throw InvalidGridError("Simpson rule needs at least 4 points");
  CompensatedSum grad, amp;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double w = (j % 2 == 0) ? 2.0 : 4.0;
    const double defect = std::norm(q[j]) - 1.0;
    grad.add(w * std::norm(dq[j]));
    amp.add(w * defect * defect);
  }
  const double h3 = g.spacing() / 3.0;
  EnergyReport r;
  r.s = 1.0;
  r.gradient_part = 0.5 * h3 * grad.value();
  r.amplitude_part = 0.5 * h3 * amp.value();
  r.total = r.gradient_part + r.amplitude_part;
  r.length = g.length();
  r.n_points = g.size();
  return r;
}

EnergyReport gl_energy_on_segment(const std::function<Complex(double)>& q,
                                  const std::function<Complex(double)>& dq, double a, double b,
                                  std::size_t intervals) {
  if (!(b > a) || intervals < 1) throw DomainError("gl_energy_on_segment: empty segment");
  const double h = (b - a) / static_cast<double>(intervals);
  CompensatedSum grad, amp;
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double x = a + static_cast<double>(j) * h;
    const double w = (j == 0 || j == intervals) ? 0.5 : 1.0;
    const Complex qv = q(x);
    const double defect = std::norm(qv) - 1.0;
    grad.add(w * std::norm(dq(x)));
    amp.add(w * defect * defect);
  }
  EnergyReport r;
  r.s = 1.0;
  r.gradient_part = 0.5 * h * grad.value();
  r.amplitude_part = 0.5 * h * amp.value();
  r.total = r.gradient_part + r.amplitude_part;
  r.length = b - a;
  r.n_points = intervals + 1;
  return r;
}

double b_tilde(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("b_tilde: delta must lie in [0, 1], got " + std::to_string(delta));
  }
  if (delta == 0.0) return kCriticalEnergy;
  const double d = 1.0 - delta;
  return (2.0 / 3.0) * d * d * (2.0 + delta);
}

double delta_tilde(double b) {
  if (!(b >= 0.0 && b <= kCriticalEnergy)) {
    throw DomainError("delta_tilde: b must lie in [0, 4/3], got " + std::to_string(b));
  }
  if (b == 0.0) return 1.0;
  if (b == kCriticalEnergy) return 0.0;
  // b_tilde strictly decreasing: b_tilde(lo) >= b >= b_tilde(hi).
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (b_tilde(mid) > b) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(b_tilde(lo) - b) <= std::abs(b_tilde(hi) - b) ? lo : hi;
}

namespace {

double require_open_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("q_delta: delta must lie in (0, 1), got " + std::to_string(delta));
  }
  return std::atanh(delta);
}

}  // namespace

ComplexField minimizer_q_delta(double delta, const Grid1D& grid) {
  const double a = require_open_delta(delta);
  return ComplexField::from_function(grid,
                                     [a](double x) { return std::tanh(std::abs(x) + a); });
}

ComplexField minimizer_q_delta_derivative(double delta, const Grid1D& grid) {
  const double a = require_open_delta(delta);
  return ComplexField::from_function(grid, [a](double x) {
    const double c = 1.0 / std::cosh(std::abs(x) + a);
    // Right-sided at the kink: |q'|^2 is continuous there, which is what
    // the quadrature needs.
    const double sign = x >= 0.0 ? 1.0 : -1.0;
    return Complex(sign * c * c, 0.0);
  });
}

VacuumCertificate vacuum_certificate(std::span<const double> energies,
                                     std::span<const double> min_moduli, double b) {
  if (energies.empty() || min_moduli.empty()) {
    throw ParameterError("vacuum_certificate: empty trajectory");
  }
  if (!(b > energies.front() && b < kCriticalEnergy)) {
    throw DomainError("vacuum_certificate: need E(q0) = " + std::to_string(energies.front()) +
                      " < b = " + std::to_string(b) + " < 4/3");
  }
  VacuumCertificate c;
  c.energy_bound = b;
  c.threshold = delta_tilde(b);
  c.observed_min = *std::min_element(min_moduli.begin(), min_moduli.end());
  c.passed = c.observed_min > c.threshold;
  return c;
}

}  // namespace mlab
