#include "madelung_lab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "madelung_lab/energy.hpp"
#include "madelung_lab/parallel.hpp"
#include "madelung_lab/random_fields.hpp"
#include "madelung_lab/spectral.hpp"
#include "madelung_lab/summation.hpp"

namespace mlab {

namespace {

constexpr double kSechWindow = 35.0;
constexpr double kSechCutoff = 1e-14;

double min_image(double d, double length) {
  d = std::remainder(d, length);
  return d;
}

int integer_part(SobolevIndex s) { return static_cast<int>(std::floor(s.value())); }

ComplexField weighted(const ComplexField& f, const RealVector& w) {
  ComplexField out(f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = w[j] * f[j];
  return out;
}

std::size_t checked_stride(const Grid1D& g, YQuadrature quad) {
  if (quad.stride == 0 || g.size() % quad.stride != 0) {
    throw ParameterError("y-quadrature stride must divide N");
  }
  return quad.stride;
}

// ||lambda a - b||^2 in the weighted coefficient norm, evaluated directly so
// that near-coincident inputs do not suffer the cancellation of aa + bb - 2|c|.
double direct_value_sq(const ComplexVector& a, const ComplexVector& b, Complex lambda,
                       const RealVector& sw) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < a.size(); ++k) acc.add(sw[k] * std::norm(lambda * a[k] - b[k]));
  return acc.value();
}

PhaseAlignment align_coefficients(const ComplexVector& a, const ComplexVector& b,
                                  const RealVector& sw) {
  PhaseAlignment al = phase_align_gram(weighted_norm_squared(a, sw), weighted_norm_squared(b, sw),
                                       weighted_inner(a, b, sw));
  al.value = std::sqrt(direct_value_sq(a, b, al.lambda, sw));
  return al;
}

PhaseAlignment align_stacks(const std::vector<ComplexField>& as,
                            const std::vector<ComplexField>& bs, const BallQuadrature& bq,
                            SobolevIndex s) {
  PhaseAlignment al =
      phase_align_gram(w_s2_ball_inner(as, as, bq, s).real(), w_s2_ball_inner(bs, bs, bq, s).real(),
                       w_s2_ball_inner(as, bs, bq, s));
  std::vector<ComplexField> diff;
  diff.reserve(as.size());
  for (std::size_t k = 0; k < as.size(); ++k) diff.push_back(al.lambda * as[k] - bs[k]);
  al.value = std::sqrt(std::max(0.0, w_s2_ball_inner(diff, diff, bq, s).real()));
  return al;
}

double trapezoid_y(const RealVector& values, double h, std::size_t stride) {
  return h * static_cast<double>(stride) * compensated_sum(values);
}

double localized_distance_sq(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                             YQuadrature quad, LocalizationWeight kind) {
  require_same_grid(q.grid(), p.grid(), "metric_ds");
  q.require_finite("metric_ds");
  p.require_finite("metric_ds");
  const Grid1D& g = q.grid();
  const std::size_t stride = checked_stride(g, quad);
  const std::size_t nodes = g.size() / stride;
  const RealVector sw = sobolev_weights(g, s.value());
  RealVector per_node(nodes, 0.0);
  parallel_for(nodes, [&](std::size_t m) {
    const RealVector w = localization_weight(g, g.x(m * stride), kind);
    const Spectrum a = dft(weighted(q, w));
    const Spectrum b = dft(weighted(p, w));
    const PhaseAlignment al = align_coefficients(a.coeffs, b.coeffs, sw);
    per_node[m] = al.value * al.value;
  });
  return trapezoid_y(per_node, g.spacing(), stride);
}

}  // namespace

PhaseAlignment phase_align_gram(double aa, double bb, Complex c) {
  PhaseAlignment r;
  const double mag = std::abs(c);
  r.lambda = mag > 0.0 ? std::conj(c) / mag : Complex(1.0, 0.0);
  r.value = std::sqrt(std::max(0.0, aa + bb - 2.0 * mag));
  return r;
}

PhaseAlignment phase_align(const ComplexField& a, const ComplexField& b, SobolevIndex s,
                           const RealVector& weight) {
  require_same_grid(a.grid(), b.grid(), "phase_align");
  if (weight.size() != a.size()) throw InvalidGridError("phase_align: weight size mismatch");
  for (double w : weight) {
    if (!(w >= 0.0)) throw DomainError("phase_align: weight must be nonnegative");
  }
  const ComplexField wa = weighted(a, weight);
  const ComplexField wb = weighted(b, weight);
  wa.require_finite("phase_align");
  wb.require_finite("phase_align");
  return align_coefficients(dft(wa).coeffs, dft(wb).coeffs, sobolev_weights(a.grid(), s.value()));
}

PhaseScan phase_scan(const std::function<double(Complex)>& objective, std::size_t samples) {
  if (samples < 3) throw ParameterError("phase_scan: need at least 3 samples");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(samples);
  PhaseScan r;
  double best_theta = 0.0;
  r.scan_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta = step * static_cast<double>(i);
    const double f = objective(std::polar(1.0, theta));
    if (f < r.scan_min) {
      r.scan_min = f;
      best_theta = theta;
    }
  }
  // The objective is unimodal on one step either side of the best sample.
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_theta - step, hi = best_theta + step;
  double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
  double f1 = objective(std::polar(1.0, x1)), f2 = objective(std::polar(1.0, x2));
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = objective(std::polar(1.0, x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = objective(std::polar(1.0, x2));
    }
  }
  const double theta = f1 < f2 ? x1 : x2;
  r.refined_min = std::min({f1, f2, r.scan_min});
  r.lambda = r.refined_min == r.scan_min ? std::polar(1.0, best_theta) : std::polar(1.0, theta);
  return r;
}

RealVector localization_weight(const Grid1D& grid, double y, LocalizationWeight kind) {
  const double window = std::min(0.5 * grid.length(), kSechWindow);
  RealVector w(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = std::abs(min_image(grid.x(j) - y, grid.length()));
    if (d > window) continue;
    const double sech = 1.0 / std::cosh(d);
    if (sech < kSechCutoff) continue;
    w[j] = kind == LocalizationWeight::sech ? sech : std::sqrt(sech);
  }
  return w;
}

MetricReport metric_ds(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                       YQuadrature quad) {
  MetricReport r;
  r.s = s.value();
  r.d_s = std::sqrt(localized_distance_sq(q, p, s, quad, LocalizationWeight::sech));
  r.length = q.grid().length();
  r.n_points = q.size();
  r.y_stride = quad.stride;
  r.y_nodes = q.size() / quad.stride;
  return r;
}

double metric_ds_tilde(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                       YQuadrature quad) {
  return std::sqrt(localized_distance_sq(q, p, s, quad, LocalizationWeight::sqrt_sech));
}

PhaseAlignment metric_ds_star_ball(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                                   const Ball& ball) {
  require_same_grid(q.grid(), p.grid(), "metric_ds_star_ball");
  q.require_finite("metric_ds_star_ball");
  p.require_finite("metric_ds_star_ball");
  const int m = integer_part(s);
  const BallQuadrature bq = ball_quadrature(q.grid(), ball);
  return align_stacks(derivative_stack(q, m), derivative_stack(p, m), bq, s);
}

double metric_ds_ball(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                      const Ball& ball, YQuadrature quad) {
  require_same_grid(q.grid(), p.grid(), "metric_ds_ball");
  q.require_finite("metric_ds_ball");
  p.require_finite("metric_ds_ball");
  const Grid1D& g = q.grid();
  const std::size_t stride = checked_stride(g, quad);
  const std::size_t nodes = g.size() / stride;
  const int m = integer_part(s);
  const BallQuadrature bq = ball_quadrature(g, ball);
  RealVector per_node(nodes, 0.0);
  parallel_for(nodes, [&](std::size_t k) {
    const double y = g.x(k * stride);
    if (std::abs(min_image(y - ball.center, g.length())) > ball.radius + kSechWindow) return;
    const RealVector w = localization_weight(g, y, LocalizationWeight::sech);
    const auto as = derivative_stack(weighted(q, w), m);
    const auto bs = derivative_stack(weighted(p, w), m);
    const PhaseAlignment al = align_stacks(as, bs, bq, s);
    per_node[k] = al.value * al.value;
  });
  return std::sqrt(trapezoid_y(per_node, g.spacing(), stride));
}

double metric_theta(const HydroState& a, const HydroState& b, SobolevIndex s) {
  require_same_grid(a.grid(), b.grid(), "metric_theta");
  RealVector drho(a.size()), dv(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    drho[j] = a.rho()[j] - b.rho()[j];
    dv[j] = a.v()[j] - b.v()[j];
  }
  return h_s_norm(a.grid(), drho, s) + h_s_norm(a.grid(), dv, s.shifted(-1.0));
}

std::vector<Ball> ball_cover(const Grid1D& grid, double radius) {
  const double count = grid.length() / radius;
  const auto n = static_cast<std::size_t>(std::llround(count));
  if (!(radius > 0.0) || std::abs(count - static_cast<double>(n)) > 1e-9 || n < 2) {
    throw ParameterError("ball cover: L / R must be an integer >= 2");
  }
  std::vector<Ball> balls;
  balls.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    balls.push_back(Ball{-0.5 * grid.length() + static_cast<double>(k) * radius, radius});
  }
  return balls;
}

void attach_ball_distances(MetricReport& report, const ComplexField& q, const ComplexField& p,
                           double radius) {
  const SobolevIndex s(report.s);
  const auto balls = ball_cover(q.grid(), radius);
  report.per_ball.assign(balls.size(), {0, 0.0});
  parallel_for(balls.size(), [&](std::size_t k) {
    report.per_ball[k] = {k, metric_ds_star_ball(q, p, s, balls[k]).value};
  });
}

BallChainReport ball_chain_ratio(const ComplexField& q, const ComplexField& p, SobolevIndex s,
                                 double radius, YQuadrature quad) {
  MetricReport mr = metric_ds(q, p, s, quad);
  attach_ball_distances(mr, q, p, radius);
  BallChainReport r;
  r.s = s.value();
  r.radius = radius;
  CompensatedSum acc;
  for (const auto& [k, d] : mr.per_ball) acc.add(d * d);
  r.ball_sum_sq = acc.value();
  r.d_s_sq = mr.d_s * mr.d_s;
  r.degenerate = !(r.d_s_sq > 0.0);
  r.ratio = r.degenerate ? 0.0 : r.ball_sum_sq / r.d_s_sq;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

RatioStats ratio_stats(const std::vector<double>& values, std::size_t bins) {
  RatioStats st;
  if (values.empty()) return st;
  st.max = *std::max_element(values.begin(), values.end());
  st.min = *std::min_element(values.begin(), values.end());
  bins = std::max<std::size_t>(bins, 1);
  const double lo = std::log10(st.min);
  const double hi = std::log10(st.max);
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  st.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    st.bin_edges[b] = std::pow(10.0, lo + static_cast<double>(b) * width);
  }
  st.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((std::log10(v) - lo) / width);
    st.counts[std::min(b, bins - 1)] += 1;
  }
  return st;
}

}  // namespace

BilipschitzReport bilipschitz_probe(const PairGenerator& generator,
                                    const BilipschitzOptions& options) {
  if (!(options.energy_cap > 0.0 && options.energy_cap < kCriticalEnergy)) {
    throw ParameterError("bilipschitz_probe: energy cap must lie in (0, 4/3)");
  }
  const SobolevIndex s(options.s);
  s.require_above(0.5, "bilipschitz_probe");
  BilipschitzReport r;
  r.s = options.s;
  r.requested = options.samples;
  const std::size_t attempts =
      options.max_attempts ? options.max_attempts : 10 * std::max<std::size_t>(options.samples, 1);
  for (std::size_t i = 0; i < attempts && r.accepted < options.samples; ++i) {
    r.attempts = i + 1;
    std::optional<FieldPair> pair;
    std::optional<HydroState> hq, hp;
    try {
      pair = generator(i);
      hq = madelung_forward(pair->q, options.modulus_floor);
      hp = madelung_forward(pair->p, options.modulus_floor);
    } catch (const VacuumError& e) {
      r.rejected += 1;
      r.rejections.push_back("sample " + std::to_string(i) + ": " + e.what());
      continue;
    }
    const double eq = energy_es(pair->q, s).total;
    const double ep = energy_es(pair->p, s).total;
    if (!(eq < options.energy_cap && ep < options.energy_cap)) {
      r.rejected += 1;
      r.rejections.push_back("sample " + std::to_string(i) + ": energy " +
                             std::to_string(std::max(eq, ep)) + " above cap");
      continue;
    }
    const double d = metric_ds(pair->q, pair->p, s, options.quad).d_s;
    const double th = metric_theta(*hq, *hp, s);
    if (d < options.coincidence_tol && th < options.coincidence_tol) {
      r.skipped_coincident += 1;
      continue;
    }
    r.accepted += 1;
    r.r1.push_back(d > 0.0 ? th / d : std::numeric_limits<double>::infinity());
    r.r2.push_back(th > 0.0 ? d / th : std::numeric_limits<double>::infinity());
  }
  r.theta_over_d = ratio_stats(r.r1, options.bins);
  r.d_over_theta = ratio_stats(r.r2, options.bins);
  return r;
}

PairGenerator random_pair_generator(const Grid1D& grid, std::uint64_t seed,
                                    double amplitude_mod, double amplitude_phase) {
  return [=](std::size_t i) {
    auto rng = stream_rng(seed, i);
    ComplexField q = random_vacuum_free(grid, rng, amplitude_mod, amplitude_phase);
    ComplexField p = random_vacuum_free(grid, rng, amplitude_mod, amplitude_phase);
    return FieldPair{std::move(q), std::move(p)};
  };
}

std::vector<ShrinkingFamilyPoint> shrinking_family_probe(const HydroState& base,
                                                         const RealVector& drho,
                                                         const RealVector& dv, SobolevIndex s,
                                                         const std::vector<double>& epsilons,
                                                         YQuadrature quad) {
  const Grid1D& g = base.grid();
  if (drho.size() != g.size() || dv.size() != g.size()) {
    throw InvalidGridError("shrinking_family_probe: perturbation size mismatch");
  }
  const ComplexField q = madelung_inverse(base);
  std::vector<ShrinkingFamilyPoint> out;
  for (double eps : epsilons) {
    RealVector rho(g.size()), v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      rho[j] = base.rho()[j] + eps * drho[j];
      v[j] = base.v()[j] + eps * dv[j];
    }
    const HydroState perturbed(g, std::move(rho), std::move(v));
    const ComplexField p = madelung_inverse(perturbed);
    ShrinkingFamilyPoint pt;
    pt.epsilon = eps;
    pt.d_s = metric_ds(q, p, s, quad).d_s;
    pt.theta_s = metric_theta(base, perturbed, s);
    pt.r1 = pt.d_s > 0.0 ? pt.theta_s / pt.d_s : std::numeric_limits<double>::infinity();
    pt.r2 = pt.theta_s > 0.0 ? pt.d_s / pt.theta_s : std::numeric_limits<double>::infinity();
    out.push_back(pt);
  }
  return out;
}

double phase_exponential_gamma(SobolevIndex s) {
  s.require_above(0.5, "phase_exponential_gamma");
  const double v = s.value();
  return v >= 1.0 ? 2.0 * v - 2.0 : (1.0 - v) / (v - 0.5);
}

PhaseExponentialReport phase_exponential_probe(const Grid1D& grid,
                                               const std::vector<RealVector>& phases,
                                               SobolevIndex s) {
  PhaseExponentialReport r;
  r.s = s.value();
  r.gamma = phase_exponential_gamma(s);
  const SobolevIndex lower = s.shifted(-1.0);
  for (const auto& phi : phases) {
    if (phi.size() != grid.size()) throw InvalidGridError("phase_exponential_probe: size mismatch");
    r.samples += 1;
    const double norm_dphi = h_s_norm(grid, spectral_derivative(grid, phi, 1), lower);
    if (!(norm_dphi > 0.0)) {
      r.skipped += 1;
      continue;
    }
    ComplexField e(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) e[j] = std::polar(1.0, phi[j]);
    const double lhs = h_s_norm(spectral_derivative(e, 1), lower);
    const double ratio = lhs / (std::pow(1.0 + norm_dphi, r.gamma) * norm_dphi);
    r.ratios.push_back(ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  return r;
}

}  // namespace mlab
