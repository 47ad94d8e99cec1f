#pragma once

#include <cstddef>
#include <span>

#include "madelung_lab/grid.hpp"

namespace mlab {

/// Density and velocity samples (rho, v). Construction checks rho > 0 and
/// finiteness; the phase-compatibility condition is only needed for
/// inversion and is checked there.
class HydroState {
 public:
  HydroState(const Grid1D& grid, RealVector rho, RealVector v);

  /// The ground state (1, 0).
  static HydroState ground(const Grid1D& grid);

  const Grid1D& grid() const { return grid_; }
  const RealVector& rho() const { return rho_; }
  const RealVector& v() const { return v_; }
  std::size_t size() const { return rho_.size(); }

  /// sqrt(rho), computed on demand.
  RealVector amplitude() const;
  double min_density() const;
  double mean_velocity() const;

 private:
  Grid1D grid_;
  RealVector rho_;
  RealVector v_;
};

inline constexpr double kDefaultModulusFloor = 1e-6;
/// Inversion requires |mean(v)| * L below this.
inline constexpr double kPhaseCompatibilityTolerance = 1e-6;

/// (|q|^2, Im[q' / q]) with q' the spectral derivative.
/// Throws VacuumError if min |q| <= floor.
HydroState madelung_forward(const ComplexField& q, double floor = kDefaultModulusFloor);

/// sqrt(rho) exp(i phi) with phi the lift of v vanishing at x = 0.
/// Throws PeriodicityError if |mean(v)| L exceeds `tolerance`.
ComplexField madelung_inverse(const HydroState& state,
                              double tolerance = kPhaseCompatibilityTolerance);

struct VacuumScan {
  double min_modulus;
  double location;
  std::size_t index;
};

VacuumScan vacuum_scan(const ComplexField& q);
/// Same on arbitrary (non-periodic) samples at positions xs.
VacuumScan vacuum_scan(std::span<const Complex> samples, std::span<const double> xs);

/// phi with phi' = v and phi(0) = 0. The periodic part is the spectral
/// antiderivative of v - mean(v); the mean contributes mean(v) * x on the
/// unwrapped coordinate x in [-L/2, L/2).
struct PhaseLift {
  RealVector phi;
  double mean_velocity;
};

PhaseLift phase_lift(const Grid1D& grid, const RealVector& v);

}  // namespace mlab
