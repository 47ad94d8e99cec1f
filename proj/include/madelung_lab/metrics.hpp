#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "madelung_lab/grid.hpp"
#include "madelung_lab/madelung.hpp"

namespace mlab {

struct PhaseAlignment {
  Complex lambda{1.0, 0.0};
  double value = 0.0;
};

/// Minimizer of ||lambda a - b||^2 = aa + bb - 2 Re(lambda c) over unit lambda,
/// where c = <a, b> (linear in the first slot). lambda = 1 when c = 0.
PhaseAlignment phase_align_gram(double aa, double bb, Complex c);

/// inf over unit lambda of ||w (lambda a - b)||_{H^s}. lambda comes from the
/// Gram form; value is then the norm of w (lambda a - b) evaluated directly.
PhaseAlignment phase_align(const ComplexField& a, const ComplexField& b, SobolevIndex s,
                           const RealVector& weight);

/// Brute-force oracle for the S^1 infimum: the minimum of `objective` over
/// `samples` equispaced phases, and that minimum refined by golden-section
/// search on the bracket around the best sample.
struct PhaseScan {
  double scan_min = 0.0;
  double refined_min = 0.0;
  Complex lambda{1.0, 0.0};  // minimizer after refinement
};

PhaseScan phase_scan(const std::function<double(Complex)>& objective, std::size_t samples = 3600);

enum class LocalizationWeight { sech, sqrt_sech };

/// Outer y-quadrature: every `stride`-th grid point, trapezoid weight h*stride.
struct YQuadrature {
  std::size_t stride = 1;
};

/// Localization weight centered at y, evaluated at the minimum-image distance
/// and cut to zero beyond min(L/2, 35) or where sech drops below 1e-14.
RealVector localization_weight(const Grid1D& grid, double y, LocalizationWeight kind);

struct MetricReport {
  double s = 1.0;
  double d_s = 0.0;
  std::optional<double> theta_s;
  std::vector<std::pair<std::size_t, double>> per_ball;  // (k, d^s_*|_{B_k})
  double length = 0.0;
  std::size_t n_points = 0;
  std::size_t y_nodes = 0;
  std::size_t y_stride = 1;
  std::optional<std::uint64_t> seed;
};

MetricReport metric_ds(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                       YQuadrature quad = {});
/// Same construction with the weight sqrt(sech).
double metric_ds_tilde(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                       YQuadrature quad = {});

/// inf over unit lambda of ||lambda q - p||_{W^{s,2}(B)}.
PhaseAlignment metric_ds_star_ball(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                                   const Ball& ball);
/// (int inf_lambda ||sech(y - .)(lambda q - p)||^2_{W^{s,2}(B)} dy)^{1/2}. Nodes y
/// farther than R + 35 from the ball contribute nothing and are skipped.
double metric_ds_ball(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                      const Ball& ball, YQuadrature quad = {});

/// ||rho - eta||_{H^s} + ||v - w||_{H^{s-1}}.
double metric_theta(const HydroState& a, const HydroState& b, SobolevIndex s);

/// Balls of radius R centered at -L/2 + kR, k = 0..L/R-1 (L/R integer >= 2).
std::vector<Ball> ball_cover(const Grid1D& grid, double radius);

/// Fills report.per_ball with d^s_*|_{B_k}(q, p) over ball_cover(radius).
void attach_ball_distances(MetricReport& report, const ComplexField& q, const ComplexField& p,
                           double radius);

struct BallChainReport {
  double s = 1.0;
  double radius = 0.0;
  double ball_sum_sq = 0.0;  // sum_k d^s_*|_{B_k}(q,p)^2
  double d_s_sq = 0.0;
  double ratio = 0.0;        // ball_sum_sq / d_s_sq
  bool degenerate = false;   // d_s = 0
};

BallChainReport ball_chain_ratio(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                                 double radius, YQuadrature quad = {});

// ---------------------------------------------------------------------------
// Empirical probes

struct FieldPair {
  ComplexField q;
  ComplexField p;
};

/// Sample `index` of a pair family. May throw VacuumError; such samples are
/// rejected and logged by the probe.
using PairGenerator = std::function<FieldPair(std::size_t index)>;

struct RatioStats {
  double max = 0.0;
  double min = 0.0;
  std::vector<double> bin_edges;   // log10-spaced between min and max
  std::vector<std::size_t> counts;
};

struct BilipschitzOptions {
  double s = 1.0;
  std::size_t samples = 100;       // accepted pairs wanted
  std::size_t max_attempts = 0;   // 0: 10 * samples
  double energy_cap = 1.2;        // E^s(q), E^s(p) < cap < 4/3
  double modulus_floor = 0.05;    // |q|, |p| > floor
  double coincidence_tol = 1e-12; // both distances below: skipped
  std::size_t bins = 10;
  YQuadrature quad{};
};

struct BilipschitzReport {
  double s = 1.0;
  std::size_t requested = 0;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::size_t skipped_coincident = 0;
  std::size_t rejected = 0;
  std::vector<std::string> rejections;
  RatioStats theta_over_d;  // r1
  RatioStats d_over_theta;  // r2
  std::vector<double> r1;
  std::vector<double> r2;
};

BilipschitzReport bilipschitz_probe(const PairGenerator& generator,
                                    const BilipschitzOptions& options);

/// Pairs of independent random_vacuum_free fields from stream (seed, i).
PairGenerator random_pair_generator(const Grid1D& grid, std::uint64_t seed,
                                    double amplitude_mod, double amplitude_phase);

struct ShrinkingFamilyPoint {
  double epsilon = 0.0;
  double d_s = 0.0;
  double theta_s = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

/// p_eps = M^{-1}(rho + eps drho, v + eps dv) against q = M^{-1}(rho, v).
std::vector<ShrinkingFamilyPoint> shrinking_family_probe(const HydroState& base,
                                                         const RealVector& drho,
                                                         const RealVector& dv, SobolevIndex s,
                                                         const std::vector<double>& epsilons,
                                                         YQuadrature quad = {});

/// 2s - 2 for s >= 1, (1 - s) / (s - 1/2) for 1/2 < s < 1.
double phase_exponential_gamma(SobolevIndex s);

struct PhaseExponentialReport {
  double s = 1.0;
  double gamma = 0.0;
  std::size_t samples = 0;
  std::size_t skipped = 0;  // phi' = 0
  double max_ratio = 0.0;
  std::vector<double> ratios;  // ||(e^{i phi})'||_{H^{s-1}} / ((1 + ||phi'||)^gamma ||phi'||)
};

PhaseExponentialReport phase_exponential_probe(const Grid1D& grid,
                                               const std::vector<RealVector>& phases,
                                               SobolevIndex s);

}  // namespace mlab
