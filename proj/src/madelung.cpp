#include "madelung_lab/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "madelung_lab/spectral.hpp"
#include "madelung_lab/summation.hpp"

namespace mlab {

HydroState::HydroState(const Grid1D& grid, RealVector rho, RealVector v)
    : grid_(grid), rho_(std::move(rho)), v_(std::move(v)) {
  if (rho_.size() != grid_.size() || v_.size() != grid_.size()) {
    throw InvalidGridError("hydro state arrays must match the grid size");
  }
  for (std::size_t j = 0; j < rho_.size(); ++j) {
    if (!std::isfinite(rho_[j]) || !std::isfinite(v_[j])) {
      throw NumericError("hydro state has a non-finite sample at index " + std::to_string(j));
    }
    if (!(rho_[j] > 0.0)) {
      throw VacuumError("density is not positive", grid_.x(j), rho_[j]);
    }
  }
}

HydroState HydroState::ground(const Grid1D& grid) {
  return HydroState(grid, RealVector(grid.size(), 1.0), RealVector(grid.size(), 0.0));
}

RealVector HydroState::amplitude() const {
  RealVector a(rho_.size());
  std::transform(rho_.begin(), rho_.end(), a.begin(), [](double r) { return std::sqrt(r); });
  return a;
}

double HydroState::min_density() const { return *std::min_element(rho_.begin(), rho_.end()); }

double HydroState::mean_velocity() const {
  return compensated_sum(v_) / static_cast<double>(v_.size());
}

VacuumScan vacuum_scan(std::span<const Complex> samples, std::span<const double> xs) {
  VacuumScan best{std::numeric_limits<double>::infinity(), 0.0, 0};
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double m = std::abs(samples[j]);
    if (m < best.min_modulus) best = {m, xs[j], j};
  }
  return best;
}

VacuumScan vacuum_scan(const ComplexField& q) {
  const RealVector xs = q.grid().coordinates();
  return vacuum_scan(q.samples(), xs);
}

HydroState madelung_forward(const ComplexField& q, double floor) {
  q.require_finite("madelung_forward");
  const VacuumScan scan = vacuum_scan(q);
  if (scan.min_modulus <= floor) {
    throw VacuumError("vacuum: min |q| = " + std::to_string(scan.min_modulus) + " at x = " +
                          std::to_string(scan.location) + " is not above the floor " +
                          std::to_string(floor),
                      scan.location, scan.min_modulus);
  }
  // Components differentiated separately so that real q gives v = 0 exactly.
  const RealVector re = real_part(q);
  const RealVector im = imag_part(q);
  const RealVector dre = spectral_derivative(q.grid(), re, 1);
  const RealVector dim = spectral_derivative(q.grid(), im, 1);
  RealVector rho(q.size()), v(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    rho[j] = std::norm(q[j]);
    // Im(q' / q) = Im(q' conj(q)) / |q|^2
    v[j] = (re[j] * dim[j] - im[j] * dre[j]) / rho[j];
  }
  return HydroState(q.grid(), std::move(rho), std::move(v));
}

PhaseLift phase_lift(const Grid1D& grid, const RealVector& v) {
  if (v.size() != grid.size()) throw InvalidGridError("phase_lift: length mismatch");
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("phase_lift: non-finite velocity");
  }
  double mean = 0.0;
  RealVector phi = spectral_antiderivative(grid, v, &mean);
  for (std::size_t j = 0; j < phi.size(); ++j) phi[j] += mean * grid.x(j);
  return PhaseLift{std::move(phi), mean};
}

ComplexField madelung_inverse(const HydroState& state, double tolerance) {
  const Grid1D& g = state.grid();
  const PhaseLift lift = phase_lift(g, state.v());
  if (std::abs(lift.mean_velocity) * g.length() > tolerance) {
    throw PeriodicityError("mean velocity " + std::to_string(lift.mean_velocity) +
                           " winds the phase; the reconstructed q would not be periodic");
  }
  ComplexVector s(state.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    s[j] = std::polar(std::sqrt(state.rho()[j]), lift.phi[j]);
  }
  return ComplexField(g, std::move(s));
}

}  // namespace mlab
