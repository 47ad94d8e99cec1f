#pragma once

#include <functional>
#include <span>

#include "madelung_lab/grid.hpp"
#include "madelung_lab/madelung.hpp"

namespace mlab {

inline constexpr double kCriticalEnergy = 4.0 / 3.0;

struct EnergyReport {
  double s = 1.0;
  double total = 0.0;
  double gradient_part = 0.0;   // 1/2 ||q'||^2_{H^{s-1}}
  double amplitude_part = 0.0;  // 1/2 || |q|^2 - 1 ||^2_{H^{s-1}}
  double length = 0.0;
  std::size_t n_points = 0;
};

/// E^s(q) = 1/2 ||q'||^2_{H^{s-1}} + 1/2 || |q|^2 - 1 ||^2_{H^{s-1}}, s > 1/2,
/// with q' spectral and |q|^2 - 1 formed pointwise. For s = 1 this is the
/// Ginzburg-Landau energy on the periodic grid.
EnergyReport energy_es(const ComplexField& q, SobolevIndex s);

/// The same functional at index mu in (1/2, 1).
EnergyReport energy_emu(const ComplexField& q, double mu);

/// 1/2 int (rho')^2 / (4 rho) + rho v^2 + (rho - 1)^2 dx, trapezoid on the
/// periodic grid with rho' spectral.
EnergyReport energy_hydro(const HydroState& state);

/// Ginzburg-Landau energy from samples of q and of its exact derivative on
/// the periodic grid, composite Simpson rule (panels [x_{2i}, x_{2i+2}]).
/// Fourth order for piecewise-smooth data whose kinks sit on even nodes,
/// which covers q_delta (kink at x = 0, node N/2).
EnergyReport gl_energy_from_profile(const ComplexField& q, const ComplexField& dq);

/// Ginzburg-Landau energy of a function given analytically on the segment
/// [a, b], trapezoid rule on `intervals` cells. Non-periodic, so it also
/// handles profiles such as tanh that connect -1 to +1.
EnergyReport gl_energy_on_segment(const std::function<Complex(double)>& q,
                                  const std::function<Complex(double)>& dq, double a, double b,
                                  std::size_t intervals);

/// b~(delta) = 4/3 - 2 delta + 2/3 delta^3, evaluated as 2/3 (1 - delta)^2 (2 + delta)
/// so it keeps full relative accuracy near delta = 1.
double b_tilde(double delta);
/// Inverse of b_tilde on [0, 4/3] by bisection to the last representable bit.
double delta_tilde(double b);

/// tanh(|x| + atanh(delta)) on the grid; delta in (0, 1).
ComplexField minimizer_q_delta(double delta, const Grid1D& grid);
/// Its derivative sign(x) sech^2(|x| + atanh(delta)), right-sided at x = 0.
ComplexField minimizer_q_delta_derivative(double delta, const Grid1D& grid);

struct VacuumCertificate {
  double energy_bound = 0.0;
  double threshold = 0.0;     // delta~(b)
  double observed_min = 0.0;  // min over samples of min |q(t)|
  bool passed = false;
};

/// energies[0] is E(q_0); requires E(q_0) < b < 4/3.
VacuumCertificate vacuum_certificate(std::span<const double> energies,
                                     std::span<const double> min_moduli, double b);

}  // namespace mlab
