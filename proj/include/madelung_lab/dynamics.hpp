#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "madelung_lab/grid.hpp"
#include "madelung_lab/madelung.hpp"

namespace mlab {

enum class Scheme { strang_gp, rk4_hgp };

/// Deliberate defects used as negative controls by the harness.
enum class Fault {
  none,
  drop_half_step,  // GP: omit the trailing nonlinear half step
};

std::string to_string(Scheme s);
std::string to_string(Fault f);
Scheme parse_scheme(const std::string& text);
Fault parse_fault(const std::string& text);

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::strang_gp;
  std::size_t snapshot_stride = 1;  // steps between snapshots
  double rho_floor = 1e-6;
  bool dealias = true;              // hGP pointwise products
  double cfl = 0.5;                 // hGP: dt <= cfl / max omega(xi)
  Fault fault = Fault::none;
};

struct Diagnostics {
  double t = 0.0;
  double energy = 0.0;
  double min_value = 0.0;  // min |q| (GP) or min rho (hGP)
  double mass_like = 0.0;  // int (|q|^2 - 1) or int (rho - 1)
};

/// Snapshots at t = 0, every snapshot_stride steps, and at t_end.
template <class State>
struct Trajectory {
  Grid1D grid;
  SimConfig config;
  std::size_t steps = 0;
  double dt = 0.0;  // step actually used: t_end / steps
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Diagnostics> diagnostics;
};

using GpTrajectory = Trajectory<ComplexField>;
using HgpTrajectory = Trajectory<HydroState>;

/// Number of steps covering t_end with steps no longer than dt.
std::size_t step_count(double t_end, double dt);

// GP ---------------------------------------------------------------------

/// q <- q exp(-2i tau (|q|^2 - 1)); exact flow of the nonlinear part.
void gp_nonlinear_substep(ComplexField& q, double tau);
/// q^_k <- exp(-i xi_k^2 tau) q^_k; exact flow of the linear part.
void gp_linear_substep(ComplexField& q, double tau);

/// One Strang step N(dt/2) L(dt) N(dt/2). Throws BlowUpError (time t) if the
/// result is not finite.
ComplexField step_gp_strang(const ComplexField& q, double dt, double t = 0.0,
                            Fault fault = Fault::none);

Diagnostics gp_diagnostics(const ComplexField& q, double t);

GpTrajectory evolve_gp(const ComplexField& q0, const SimConfig& config);

// hGP --------------------------------------------------------------------

struct HydroRate {
  RealVector drho;
  RealVector dv;
};

/// Right-hand side with spectral derivatives:
///   rho_t = -2 (rho v)_x
///   v_t = -(v^2)_x - 2 rho_x + (u_x + u^2)_x,  u = rho_x / (2 rho).
/// Throws VacuumError if min rho <= rho_floor.
HydroRate rhs_hgp(const HydroState& state, double rho_floor = 1e-6, bool dealias = true);

/// max over grid frequencies of xi sqrt(xi^2 + 4).
double bogoliubov_max(const Grid1D& grid);
/// cfl / bogoliubov_max(grid).
double hgp_dt_limit(const Grid1D& grid, double cfl = 0.5);

HydroState step_hgp_rk4(const HydroState& state, double dt, const SimConfig& config,
                        double t = 0.0);

Diagnostics hgp_diagnostics(const HydroState& state, double t);

/// Throws StabilityError if config.dt exceeds hgp_dt_limit.
HgpTrajectory evolve_hgp(const HydroState& state0, const SimConfig& config);

// Conjugation --------------------------------------------------------------

struct ConjugationReport {
  double s = 1.0;
  double t_end = 0.0;
  std::size_t n_points = 0;
  double length = 0.0;
  double gp_dt = 0.0;
  double hgp_dt = 0.0;
  std::vector<double> times;
  std::vector<double> discrepancy;  // theta^s(M(GP route), hGP route)
  double final_discrepancy = 0.0;
};

/// Runs GP from M^{-1}(state0) and hGP from state0 to t_end and compares
/// them in theta^s at `compare_points` equally spaced times (plus t = 0).
/// Step counts are rounded up to multiples of compare_points so both routes
/// are sampled at identical times.
ConjugationReport conjugation_check(const HydroState& state0, const SimConfig& gp,
                                    const SimConfig& hgp, SobolevIndex s,
                                    std::size_t compare_points = 5);

}  // namespace mlab
