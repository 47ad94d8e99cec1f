#include "madelung_lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "madelung_lab/summation.hpp"

namespace mlab {

Spectrum dft(const ComplexField& field) {
  const Grid1D& g = field.grid();
  ComplexVector data = field.samples();
  fft::forward(data);
  const double scale = g.spacing() / std::sqrt(g.length());
  for (auto& z : data) z *= scale;
  return Spectrum{g, std::move(data)};
}

ComplexField idft(const Spectrum& spectrum) {
  const Grid1D& g = spectrum.grid;
  if (spectrum.coeffs.size() != g.size()) {
    throw InvalidGridError("idft: spectrum length does not match grid");
  }
  ComplexVector data = spectrum.coeffs;
  fft::backward(data);
  // Inverse of (h / sqrt L) * DFT is (sqrt L / (h N)) * IDFT_unnormalized.
  const double scale = std::sqrt(g.length()) / (g.spacing() * static_cast<double>(g.size()));
  for (auto& z : data) z *= scale;
  return ComplexField(g, std::move(data));
}

namespace {

Complex i_xi_power(double xi, int order) {
  Complex m(1.0, 0.0);
  const Complex ixi(0.0, xi);
  for (int p = 0; p < order; ++p) m *= ixi;
  return m;
}

}  // namespace

ComplexField spectral_derivative(const ComplexField& field, int order) {
  if (order < 1) throw ParameterError("spectral_derivative: order must be >= 1");
  const std::size_t nyq = field.grid().nyquist();
  return apply_multiplier(field, [order, nyq](std::size_t k, double xi) {
    if (k == nyq && (order % 2) == 1) return Complex(0.0, 0.0);
    return i_xi_power(xi, order);
  });
}

RealVector spectral_derivative(const Grid1D& grid, const RealVector& values, int order) {
  return real_part(spectral_derivative(from_real(grid, values), order));
}

RealVector spectral_antiderivative(const Grid1D& grid, const RealVector& values, double* mean) {
  const std::size_t n = grid.size();
  ComplexVector data(values.begin(), values.end());
  fft::forward(data);
  const double inv_n = 1.0 / static_cast<double>(n);
  if (mean) *mean = data[0].real() * inv_n;
  data[0] = 0.0;
  data[grid.nyquist()] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    if (k == grid.nyquist()) continue;
    data[k] /= Complex(0.0, grid.xi(k));
    data[k] *= inv_n;
  }
  fft::backward(data);
  RealVector out(n);
  const double at_origin = data[grid.origin()].real();
  for (std::size_t j = 0; j < n; ++j) out[j] = data[j].real() - at_origin;
  return out;
}

RealVector sobolev_weights(const Grid1D& grid, double s) {
  RealVector w(grid.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double xi = grid.xi(k);
    w[k] = std::pow(1.0 + xi * xi, s);
  }
  return w;
}

RealVector homogeneous_weights(const Grid1D& grid, double s) {
  RealVector w(grid.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double xi = std::abs(grid.xi(k));
    w[k] = (k == 0) ? 0.0 : std::pow(xi, 2.0 * s);
  }
  return w;
}

Complex weighted_inner(const ComplexVector& a, const ComplexVector& b, const RealVector& w) {
  CompensatedComplexSum acc;
  for (std::size_t k = 0; k < a.size(); ++k) acc.add(w[k] * a[k] * std::conj(b[k]));
  return acc.value();
}

double weighted_norm_squared(const ComplexVector& a, const RealVector& w) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < a.size(); ++k) acc.add(w[k] * std::norm(a[k]));
  return acc.value();
}

double h_s_norm(const ComplexField& field, SobolevIndex s) {
  field.require_finite("h_s_norm");
  const Spectrum sp = dft(field);
  return std::sqrt(weighted_norm_squared(sp.coeffs, sobolev_weights(field.grid(), s.value())));
}

double h_s_norm(const Grid1D& grid, const RealVector& values, SobolevIndex s) {
  return h_s_norm(from_real(grid, values), s);
}

Complex h_s_inner(const ComplexField& f, const ComplexField& g, SobolevIndex s) {
  require_same_grid(f.grid(), g.grid(), "h_s_inner");
  f.require_finite("h_s_inner");
  g.require_finite("h_s_inner");
  return weighted_inner(dft(f).coeffs, dft(g).coeffs, sobolev_weights(f.grid(), s.value()));
}

double hdot_s_norm(const ComplexField& field, SobolevIndex s) {
  field.require_finite("hdot_s_norm");
  const Spectrum sp = dft(field);
  return std::sqrt(weighted_norm_squared(sp.coeffs, homogeneous_weights(field.grid(), s.value())));
}

double l2_norm(const ComplexField& field) {
  CompensatedSum acc;
  for (const auto& z : field.samples()) acc.add(std::norm(z));
  return std::sqrt(field.grid().spacing() * acc.value());
}

double linf_norm(const ComplexField& field) {
  double m = 0.0;
  for (const auto& z : field.samples()) m = std::max(m, std::abs(z));
  return m;
}

namespace {

// Spectrum of f (scaled by 1/N) laid out on an M-point grid, Nyquist split.
ComplexVector pad_spectrum(const ComplexField& f, std::size_t m) {
  const std::size_t n = f.size();
  ComplexVector data = f.samples();
  fft::forward(data);
  const double inv_n = 1.0 / static_cast<double>(n);
  ComplexVector padded(m, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n / 2; ++k) padded[k] = data[k] * inv_n;
  for (std::size_t k = n / 2 + 1; k < n; ++k) padded[m - (n - k)] = data[k] * inv_n;
  const Complex half_nyq = 0.5 * data[n / 2] * inv_n;
  padded[n / 2] = half_nyq;
  padded[m - n / 2] = half_nyq;
  return padded;
}

}  // namespace

ComplexField dealiased_product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid(), "dealiased_product");
  const std::size_t n = a.size();
  const std::size_t m = 3 * n / 2;
  ComplexVector pa = pad_spectrum(a, m);
  ComplexVector pb = pad_spectrum(b, m);
  fft::backward(pa);
  fft::backward(pb);
  for (std::size_t j = 0; j < m; ++j) pa[j] *= pb[j];
  fft::forward(pa);
  const double inv_m = 1.0 / static_cast<double>(m);
  ComplexVector out(n);
  for (std::size_t k = 0; k < n / 2; ++k) out[k] = pa[k] * inv_m;
  for (std::size_t k = n / 2 + 1; k < n; ++k) out[k] = pa[m - (n - k)] * inv_m;
  out[n / 2] = (pa[n / 2] + pa[m - n / 2]) * inv_m;
  fft::backward(out);
  return ComplexField(a.grid(), std::move(out));
}

RealVector dealiased_product(const Grid1D& grid, const RealVector& a, const RealVector& b) {
  return real_part(dealiased_product(from_real(grid, a), from_real(grid, b)));
}

BallQuadrature ball_quadrature(const Grid1D& grid, const Ball& ball) {
  if (!(ball.radius > 0.0) || !std::isfinite(ball.center)) {
    throw DomainError("ball radius must be positive");
  }
  if (2.0 * ball.radius > grid.length() * (1.0 + 1e-12)) {
    throw DomainError("ball of radius " + std::to_string(ball.radius) +
                      " does not fit in the periodic box");
  }
  const double h = grid.spacing();
  const double x0 = grid.x(0);
  const double lo = ball.center - ball.radius;
  const double hi = ball.center + ball.radius;
  const auto n = static_cast<long>(grid.size());
  const long first = static_cast<long>(std::floor((lo - x0) / h)) - 1;
  const long last = static_cast<long>(std::ceil((hi - x0) / h)) + 1;
  BallQuadrature q;
  for (long m = first; m <= last; ++m) {
    const double c = x0 + static_cast<double>(m) * h;
    const double overlap = std::min(c + 0.5 * h, hi) - std::max(c - 0.5 * h, lo);
    if (overlap <= 0.0) continue;
    const long j = ((m % n) + n) % n;
    q.index.push_back(static_cast<std::size_t>(j));
    q.position.push_back(c);
    q.weight.push_back(overlap);
  }
  return q;
}

std::vector<ComplexField> derivative_stack(const ComplexField& field, int max_order) {
  std::vector<ComplexField> stack;
  stack.reserve(static_cast<std::size_t>(max_order) + 1);
  stack.push_back(field);
  for (int k = 1; k <= max_order; ++k) stack.push_back(spectral_derivative(field, k));
  return stack;
}

namespace {

int integer_part(SobolevIndex s) {
  if (s.value() < 0.0) throw DomainError("W^{s,2}(B) norms require s >= 0");
  return static_cast<int>(std::floor(s.value()));
}

}  // namespace

Complex w_s2_ball_inner(const std::vector<ComplexField>& f_derivs,
                        const std::vector<ComplexField>& g_derivs, const BallQuadrature& quad,
                        SobolevIndex s) {
  const int m = integer_part(s);
  const double alpha = s.value() - m;
  if (f_derivs.size() < static_cast<std::size_t>(m) + 1 ||
      g_derivs.size() < static_cast<std::size_t>(m) + 1) {
    throw ParameterError("w_s2_ball_inner: derivative stack too short");
  }
  CompensatedComplexSum acc;
  const std::size_t nodes = quad.index.size();
  for (int k = 0; k <= m; ++k) {
    const auto& fk = f_derivs[static_cast<std::size_t>(k)];
    const auto& gk = g_derivs[static_cast<std::size_t>(k)];
    for (std::size_t a = 0; a < nodes; ++a) {
      const std::size_t j = quad.index[a];
      acc.add(quad.weight[a] * fk[j] * std::conj(gk[j]));
    }
  }
  if (alpha > 0.0) {
    const auto& fm = f_derivs[static_cast<std::size_t>(m)];
    const auto& gm = g_derivs[static_cast<std::size_t>(m)];
    const double h = fm.grid().spacing();
    const double expo = 1.0 + 2.0 * alpha;
    // Unordered pairs counted twice.
    for (std::size_t a = 0; a < nodes; ++a) {
      const Complex fa = fm[quad.index[a]];
      const Complex ga = gm[quad.index[a]];
      CompensatedComplexSum row;
      for (std::size_t b = a + 1; b < nodes; ++b) {
        const double dist = std::abs(quad.position[a] - quad.position[b]);
        if (dist < 0.5 * h) continue;
        const Complex df = fa - fm[quad.index[b]];
        const Complex dg = ga - gm[quad.index[b]];
        row.add(quad.weight[b] * df * std::conj(dg) / std::pow(dist, expo));
      }
      acc.add(2.0 * quad.weight[a] * row.value());
    }
  }
  return acc.value();
}

Complex w_s2_ball_inner(const ComplexField& f, const ComplexField& g, const Ball& ball,
                        SobolevIndex s) {
  require_same_grid(f.grid(), g.grid(), "w_s2_ball_inner");
  const int m = integer_part(s);
  const BallQuadrature quad = ball_quadrature(f.grid(), ball);
  return w_s2_ball_inner(derivative_stack(f, m), derivative_stack(g, m), quad, s);
}

double w_s2_ball_norm(const ComplexField& field, const Ball& ball, SobolevIndex s) {
  field.require_finite("w_s2_ball_norm");
  const int m = integer_part(s);
  const BallQuadrature quad = ball_quadrature(field.grid(), ball);
  const auto stack = derivative_stack(field, m);
  return std::sqrt(std::max(0.0, w_s2_ball_inner(stack, stack, quad, s).real()));
}

PartitionRatioReport partition_norm_equivalence_probe(const ComplexField& field, SobolevIndex s,
                                                      double radius) {
  const Grid1D& g = field.grid();
  const double count = g.length() / radius;
  const auto n_balls = static_cast<std::size_t>(std::llround(count));
  if (!(radius > 0.0) || std::abs(count - static_cast<double>(n_balls)) > 1e-9 || n_balls < 2) {
    throw ParameterError("partition probe: L / R must be an integer >= 2");
  }
  const int m = integer_part(s);
  const auto stack = derivative_stack(field, m);
  PartitionRatioReport r;
  r.s = s.value();
  r.radius = radius;
  r.n_balls = n_balls;
  const double hs = h_s_norm(field, s);
  r.hs_norm_sq = hs * hs;
  CompensatedSum small_sum;
  CompensatedSum big_sum;
  for (std::size_t k = 0; k < n_balls; ++k) {
    const double c = -0.5 * g.length() + static_cast<double>(k) * radius;
    const auto qs = ball_quadrature(g, Ball{c, 0.5 * radius});
    small_sum.add(w_s2_ball_inner(stack, stack, qs, s).real());
    // A radius-R ball may span the whole period when L = 2R.
    const auto qb = ball_quadrature(g, Ball{c, radius});
    big_sum.add(w_s2_ball_inner(stack, stack, qb, s).real());
  }
  r.small_ball_sum = small_sum.value();
  r.ball_sum = big_sum.value();
  if (r.hs_norm_sq == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.lower_ratio = r.small_ball_sum / r.hs_norm_sq;
  r.upper_ratio = r.ball_sum > 0.0 ? r.hs_norm_sq / r.ball_sum : INFINITY;
  return r;
}

}  // namespace mlab
