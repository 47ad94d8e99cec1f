#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "madelung_lab/grid.hpp"

namespace mlab::lp {

/// Dyadic partition of unity built from one smooth radial cutoff:
///   chi(xi) = 1 - S((|xi| - 3/4) / (4/3 - 3/4)),
///   S(t)    = e(t) / (e(t) + e(1 - t)),  e(t) = exp(-1/t) for t > 0, else 0,
///   phi(xi) = chi(xi / 2) - chi(xi).
/// chi is supported in |xi| < 4/3 and equals 1 on |xi| <= 3/4; phi is
/// supported in 3/4 < |xi| < 8/3; chi + sum_{j>=0} phi(2^-j .) telescopes to 1.
double chi(double xi);
double phi(double xi);

/// Multiplier of block j (j = -1 is chi, j >= 0 is phi(2^-j xi)).
double block_multiplier(int j, double xi);

class DyadicPartition {
 public:
  explicit DyadicPartition(const Grid1D& grid);

  const Grid1D& grid() const { return grid_; }
  /// Smallest J with chi(2^-(J+1) xi) = 1 on every grid frequency.
  int j_max() const { return j_max_; }
  std::size_t block_count() const { return static_cast<std::size_t>(j_max_ + 2); }
  /// max over grid frequencies of |chi + sum_j phi(2^-j .) - 1|.
  double unity_residual() const;

 private:
  Grid1D grid_;
  int j_max_;
};

struct DyadicDecomposition {
  Grid1D grid;
  int j_max;
  std::vector<ComplexField> blocks;  // blocks[j + 1] = Delta_j f, j = -1..j_max

  const ComplexField& block(int j) const;
  ComplexField sum() const;
};

DyadicDecomposition decompose(const ComplexField& field);
/// S_j f = sum_{j' < j} Delta_j' f, for j in [-1, j_max + 1].
ComplexField low_pass(const ComplexField& field, int j);

enum class LebesgueExponent { one, two, infinity };

/// l^r over j = -1..j_max of 2^{js} ||Delta_j f||_{L^p}.
double besov_norm(const ComplexField& field, double s, LebesgueExponent p, LebesgueExponent r);
LebesgueExponent parse_exponent(double value);

struct BonyParts {
  ComplexField paraproduct_fg;  // T_f g = sum_j S_{j-1} f Delta_j g
  ComplexField remainder;       // R(f, g) = sum_j sum_{|nu|<=1} Delta_{j+nu} f Delta_j g
  ComplexField paraproduct_gf;  // T_g f
  ComplexField total() const;
};

/// All block products are evaluated on the 3/2 zero-padded grid.
BonyParts bony_decompose(const ComplexField& f, const ComplexField& g);

struct ProductEstimateReport {
  double s = 0.0;
  std::size_t samples = 0;
  std::size_t skipped = 0;  // 0/0 samples
  std::uint64_t seed = 0;
  std::size_t n_points = 0;
  double length = 0.0;
  double max_ratio_hs = 0.0;  // ||fg||_{H^s} / (||g||_{H^s} (||f||_inf + ||f'||_{H^{s-1}}))
  double max_ratio_lower = 0.0;  // same with H^{s-1} on g and fg
};

/// Ratios for a single pair; nullopt when the right-hand side vanishes.
struct ProductRatios {
  double hs;
  double lower;
};
std::optional<ProductRatios> product_ratios(const ComplexField& f, const ComplexField& g,
                                            double s);

/// Random pairs: Gaussian-random band-limited fields with spectral envelope
/// <xi>^{-(s+1)} on wavenumbers |k| <= max_mode; per-sample RNG stream
/// (seed, index). max_mode is fixed in wavenumbers so refining N keeps the
/// same functions.
ProductEstimateReport product_estimate_probe(const Grid1D& grid, std::size_t samples, double s,
                                             std::uint64_t seed, long max_mode = 64);

}  // namespace mlab::lp
