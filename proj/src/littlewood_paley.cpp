#include "madelung_lab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "madelung_lab/fft.hpp"
#include "madelung_lab/parallel.hpp"
#include "madelung_lab/random_fields.hpp"
#include "madelung_lab/spectral.hpp"
#include "madelung_lab/summation.hpp"

namespace mlab::lp {
namespace {

constexpr double kInner = 0.75;
constexpr double kOuter = 4.0 / 3.0;

double bump_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = bump_exp(t);
  const double b = bump_exp(1.0 - t);
  return a / (a + b);
}

}  // namespace

double chi(double xi) {
  return 1.0 - smooth_step((std::abs(xi) - kInner) / (kOuter - kInner));
}

double phi(double xi) { return chi(0.5 * xi) - chi(xi); }

double block_multiplier(int j, double xi) {
  if (j < -1) return 0.0;
  if (j == -1) return chi(xi);
  return phi(std::ldexp(xi, -j));
}

DyadicPartition::DyadicPartition(const Grid1D& grid) : grid_(grid), j_max_(-1) {
  const double top = grid.xi_max();
  while (std::ldexp(kInner, j_max_ + 1) < top) ++j_max_;
  if (j_max_ < 3) throw ParameterError("grid too coarse for a dyadic decomposition (j_max < 3)");
}

double DyadicPartition::unity_residual() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const double xi = grid_.xi(k);
    double total = 0.0;
    for (int j = -1; j <= j_max_; ++j) total += block_multiplier(j, xi);
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

const ComplexField& DyadicDecomposition::block(int j) const {
  if (j < -1 || j > j_max) {
    throw IndexError("dyadic block index " + std::to_string(j) + " outside [-1, " +
                     std::to_string(j_max) + "]");
  }
  return blocks[static_cast<std::size_t>(j + 1)];
}

ComplexField DyadicDecomposition::sum() const {
  ComplexField total(grid);
  for (const auto& b : blocks) total += b;
  return total;
}

DyadicDecomposition decompose(const ComplexField& field) {
  const DyadicPartition partition(field.grid());
  const Grid1D& g = field.grid();
  ComplexVector spectrum = field.samples();
  fft::forward(spectrum);
  const double inv_n = 1.0 / static_cast<double>(g.size());
  DyadicDecomposition d{g, partition.j_max(), {}};
  d.blocks.reserve(partition.block_count());
  for (int j = -1; j <= partition.j_max(); ++j) {
    ComplexVector data(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      data[k] = spectrum[k] * (block_multiplier(j, g.xi(k)) * inv_n);
    }
    fft::backward(data);
    d.blocks.emplace_back(g, std::move(data));
  }
  return d;
}

ComplexField low_pass(const ComplexField& field, int j) {
  const DyadicPartition partition(field.grid());
  if (j < -1 || j > partition.j_max() + 1) {
    throw IndexError("low_pass index " + std::to_string(j) + " outside [-1, " +
                     std::to_string(partition.j_max() + 1) + "]");
  }
  return apply_multiplier(field, [j](std::size_t, double xi) {
    double m = 0.0;
    for (int jj = -1; jj < j; ++jj) m += block_multiplier(jj, xi);
    return Complex(m, 0.0);
  });
}

LebesgueExponent parse_exponent(double value) {
  if (value == 1.0) return LebesgueExponent::one;
  if (value == 2.0) return LebesgueExponent::two;
  if (std::isinf(value) && value > 0) return LebesgueExponent::infinity;
  throw ParameterError("Besov exponents must be 1, 2 or inf");
}

namespace {

double lebesgue_norm(const ComplexField& f, LebesgueExponent p) {
  switch (p) {
    case LebesgueExponent::one: {
      CompensatedSum acc;
      for (const auto& z : f.samples()) acc.add(std::abs(z));
      return f.grid().spacing() * acc.value();
    }
    case LebesgueExponent::two:
      return l2_norm(f);
    case LebesgueExponent::infinity:
      return linf_norm(f);
  }
  return 0.0;
}

}  // namespace

double besov_norm(const ComplexField& field, double s, LebesgueExponent p, LebesgueExponent r) {
  const DyadicDecomposition d = decompose(field);
  double sup = 0.0;
  CompensatedSum acc;
  for (int j = -1; j <= d.j_max; ++j) {
    const double term = std::pow(2.0, j * s) * lebesgue_norm(d.block(j), p);
    switch (r) {
      case LebesgueExponent::one:
        acc.add(term);
        break;
      case LebesgueExponent::two:
        acc.add(term * term);
        break;
      case LebesgueExponent::infinity:
        sup = std::max(sup, term);
        break;
    }
  }
  if (r == LebesgueExponent::infinity) return sup;
  if (r == LebesgueExponent::two) return std::sqrt(acc.value());
  return acc.value();
}

ComplexField BonyParts::total() const {
  return paraproduct_fg + remainder + paraproduct_gf;
}

namespace {

// Blocks of f as samples on the M = 3N/2 padded grid (trigonometric
// interpolation of each block, Nyquist split as in dealiased_product).
std::vector<ComplexVector> padded_blocks(const ComplexField& f, int j_max) {
  const Grid1D& g = f.grid();
  const std::size_t n = g.size();
  const std::size_t m = 3 * n / 2;
  ComplexVector spectrum = f.samples();
  fft::forward(spectrum);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<ComplexVector> out;
  for (int j = -1; j <= j_max; ++j) {
    ComplexVector padded(m, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
      const Complex c = spectrum[k] * (block_multiplier(j, g.xi(k)) * inv_n);
      if (k < n / 2) {
        padded[k] = c;
      } else if (k == n / 2) {
        padded[n / 2] = 0.5 * c;
        padded[m - n / 2] = 0.5 * c;
      } else {
        padded[m - (n - k)] = c;
      }
    }
    fft::backward(padded);
    out.push_back(std::move(padded));
  }
  return out;
}

ComplexField truncate_from_padded(const Grid1D& g, ComplexVector values) {
  const std::size_t n = g.size();
  const std::size_t m = values.size();
  fft::forward(values);
  const double inv_m = 1.0 / static_cast<double>(m);
  ComplexVector out(n);
  for (std::size_t k = 0; k < n / 2; ++k) out[k] = values[k] * inv_m;
  for (std::size_t k = n / 2 + 1; k < n; ++k) out[k] = values[m - (n - k)] * inv_m;
  out[n / 2] = (values[n / 2] + values[m - n / 2]) * inv_m;
  fft::backward(out);
  return ComplexField(g, std::move(out));
}

}  // namespace

BonyParts bony_decompose(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid(), "bony_decompose");
  const Grid1D& grid = f.grid();
  const DyadicPartition partition(grid);
  const int j_max = partition.j_max();
  const auto fb = padded_blocks(f, j_max);
  const auto gb = padded_blocks(g, j_max);
  const std::size_t m = fb.front().size();
  const std::size_t nb = fb.size();

  ComplexVector t_fg(m, 0.0), rem(m, 0.0), t_gf(m, 0.0);
  ComplexVector low_f(m, 0.0), low_g(m, 0.0);  // S_{j-1} on the padded grid
  // Block index b = j + 1. S_{j-1} = sum of blocks b' <= b - 2.
  for (std::size_t b = 0; b < nb; ++b) {
    if (b >= 2) {
      for (std::size_t i = 0; i < m; ++i) {
        low_f[i] += fb[b - 2][i];
        low_g[i] += gb[b - 2][i];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      t_fg[i] += low_f[i] * gb[b][i];
      t_gf[i] += low_g[i] * fb[b][i];
      Complex near = fb[b][i];
      if (b >= 1) near += fb[b - 1][i];
      if (b + 1 < nb) near += fb[b + 1][i];
      rem[i] += near * gb[b][i];
    }
  }
  return BonyParts{truncate_from_padded(grid, std::move(t_fg)),
                   truncate_from_padded(grid, std::move(rem)),
                   truncate_from_padded(grid, std::move(t_gf))};
}

std::optional<ProductRatios> product_ratios(const ComplexField& f, const ComplexField& g,
                                            double s) {
  const double f_factor = linf_norm(f) + h_s_norm(spectral_derivative(f, 1), SobolevIndex(s - 1));
  const double g_hs = h_s_norm(g, SobolevIndex(s));
  const double g_hs1 = h_s_norm(g, SobolevIndex(s - 1));
  if (f_factor == 0.0 || g_hs == 0.0) return std::nullopt;
  const ComplexField fg = dealiased_product(f, g);
  return ProductRatios{h_s_norm(fg, SobolevIndex(s)) / (g_hs * f_factor),
                       h_s_norm(fg, SobolevIndex(s - 1)) / (g_hs1 * f_factor)};
}

ProductEstimateReport product_estimate_probe(const Grid1D& grid, std::size_t samples, double s,
                                             std::uint64_t seed, long max_mode) {
  if (samples < 1) throw ParameterError("product_estimate_probe: samples must be >= 1");
  SobolevIndex(s).require_above(0.5, "product_estimate_probe");
  std::vector<std::optional<ProductRatios>> results(samples);
  parallel_for(samples, [&](std::size_t i) {
    auto rng = stream_rng(seed, i);
    const ComplexField f = random_band_limited(grid, rng, max_mode, s + 1.0);
    const ComplexField g = random_band_limited(grid, rng, max_mode, s + 1.0);
    results[i] = product_ratios(f, g, s);
  });
  ProductEstimateReport r;
  r.s = s;
  r.samples = samples;
  r.seed = seed;
  r.n_points = grid.size();
  r.length = grid.length();
  for (const auto& res : results) {
    if (!res) {
      ++r.skipped;
      continue;
    }
    r.max_ratio_hs = std::max(r.max_ratio_hs, res->hs);
    r.max_ratio_lower = std::max(r.max_ratio_lower, res->lower);
  }
  return r;
}

}  // namespace mlab::lp
