#include <cmath>
#include <numbers>

#include "doctest.h"
#include "madelung_lab/random_fields.hpp"
#include "madelung_lab/spectral.hpp"
#include "test_support.hpp"

using namespace mlab;
using test_support::gauss_integral;

namespace {

ComplexField plane_wave(const Grid1D& g, long k) {
  const double xi = 2.0 * std::numbers::pi * static_cast<double>(k) / g.length();
  return ComplexField::from_function(g, [xi](double x) { return std::polar(1.0, xi * x); });
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("grid invariants") {
  const Grid1D g(60.0, 1024);
  CHECK(g.spacing() * static_cast<double>(g.size()) == doctest::Approx(60.0).epsilon(1e-15));
  CHECK(g.x(g.origin()) == 0.0);
  const auto xi = g.frequencies();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k == g.nyquist()) continue;
    const std::size_t partner = (g.size() - k) % g.size();
    CHECK(xi[partner] == doctest::Approx(-xi[k]));
  }
  CHECK_THROWS_AS(Grid1D(60.0, 1000), InvalidGridError);
  CHECK_THROWS_AS(Grid1D(-1.0, 1024), InvalidGridError);
  CHECK_THROWS_AS(ComplexField(g, ComplexVector(10)), InvalidGridError);
}

TEST_CASE("dft: zero, single mode and round trip") {
  const Grid1D g(60.0, 512);
  const Spectrum zero = dft(ComplexField(g));
  for (const auto& c : zero.coeffs) CHECK(std::abs(c) == 0.0);

  const Spectrum one = dft(plane_wave(g, 1));
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    total += std::norm(one.coeffs[k]);
    if (k != 1) CHECK(std::abs(one.coeffs[k]) < 1e-10);
  }
  CHECK(total == doctest::Approx(g.length()).epsilon(1e-13));

  auto rng = stream_rng(7, 0);
  const ComplexField f = random_band_limited(g, rng, 100, 0.0);
  const ComplexField back = idft(dft(f));
  CHECK(test_support::relative_l2_diff(back, f) < 1e-13);
}

TEST_CASE("Plancherel holds for random fields") {
  const Grid1D g(40.0, 256);
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = stream_rng(11, i);
    const ComplexField f = random_band_limited(g, rng, 127, 0.5);
    double spatial = 0.0, spectral = 0.0;
    for (const auto& z : f.samples()) spatial += std::norm(z);
    spatial *= g.spacing();
    for (const auto& c : dft(f).coeffs) spectral += std::norm(c);
    CHECK(std::abs(spatial - spectral) <= 1e-10 * spectral);
  }
}

TEST_CASE("spectral derivative") {
  const Grid1D g(60.0, 512);
  const ComplexField c = ComplexField::constant(g, {2.0, -1.0});
  CHECK(linf_norm(spectral_derivative(c, 1)) < 1e-13);
  CHECK(linf_norm(spectral_derivative(c, 3)) < 1e-13);

  const ComplexField e2 = plane_wave(g, 2);
  const Complex factor(0.0, 2.0 * 2.0 * std::numbers::pi / g.length());
  CHECK(test_support::max_abs_diff(spectral_derivative(e2, 1), factor * e2) < 1e-12);

  SUBCASE("smooth sech^2 profile matches analytic derivative") {
    const Grid1D fine(60.0, 4096);
    const auto f = ComplexField::from_function(fine, [](double x) { return sech(x) * sech(x); });
    const auto exact = ComplexField::from_function(
        fine, [](double x) { return -2.0 * sech(x) * sech(x) * std::tanh(x); });
    CHECK(test_support::max_abs_diff(spectral_derivative(f, 1), exact) < 1e-8);
  }

  SUBCASE("kinked minimizer profile converges at first order away from the kink") {
    // tanh(|x| + a) has a derivative jump at 0; the Gibbs tail decays only
    // algebraically, so the error away from the kink halves with h.
    const double a = std::atanh(0.5);
    auto err_at = [a](std::size_t n) {
      const Grid1D gg(60.0, n);
      const auto q = ComplexField::from_function(
          gg, [a](double x) { return std::tanh(std::abs(x) + a) - 1.0; });
      const auto dq = spectral_derivative(q, 1);
      double m = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double x = gg.x(j);
        if (std::abs(x) < 5.0) continue;
        const double exact = (x > 0 ? 1.0 : -1.0) * std::pow(sech(std::abs(x) + a), 2);
        m = std::max(m, std::abs(dq[j].real() - exact));
      }
      return m;
    };
    const double e1 = err_at(2048), e2 = err_at(4096);
    CHECK(e2 < 2e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("spectral antiderivative") {
  const Grid1D g(60.0, 2048);
  const double xi1 = 2.0 * std::numbers::pi / g.length();
  RealVector v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::cos(xi1 * g.x(j));
  double mean = 1.0;
  const RealVector phi = spectral_antiderivative(g, v, &mean);
  CHECK(std::abs(mean) < 1e-15);
  for (std::size_t j = 0; j < v.size(); ++j) {
    CHECK(std::abs(phi[j] - std::sin(xi1 * g.x(j)) / xi1) < 1e-8);
  }
  CHECK(phi[g.origin()] == 0.0);
}

TEST_CASE("H^s norms") {
  const Grid1D g(60.0, 512);
  CHECK(h_s_norm(ComplexField(g), SobolevIndex(1.3)) == 0.0);

  for (long k : {1L, 5L, -7L}) {
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(k) / g.length();
    for (double s : {0.0, 0.75, 2.0}) {
      const double expected = std::pow(1.0 + xi * xi, 0.5 * s) * std::sqrt(g.length());
      CHECK(h_s_norm(plane_wave(g, k), SobolevIndex(s)) ==
            doctest::Approx(expected).epsilon(1e-12));
      CHECK(hdot_s_norm(plane_wave(g, k), SobolevIndex(s > 0 ? s : 1.0)) ==
            doctest::Approx(std::pow(std::abs(xi), s > 0 ? s : 1.0) * std::sqrt(g.length()))
                .epsilon(1e-12));
    }
  }

  SUBCASE("Gaussian H^1 against real-space quadrature") {
    const Grid1D gg(40.0, 2048);
    const auto f = ComplexField::from_function(gg, [](double x) { return std::exp(-x * x); });
    const double integral = gauss_integral(
        [](double x) {
          const double e = std::exp(-x * x);
          return e * e + 4.0 * x * x * e * e;
        },
        -20.0, 20.0, 200);
    CHECK(std::abs(h_s_norm(f, SobolevIndex(1.0)) - std::sqrt(integral)) < 1e-6);
  }

  SUBCASE("homogeneous norm kills the zero mode") {
    CHECK(hdot_s_norm(ComplexField::constant(g, 3.0), SobolevIndex(0.5)) < 1e-12);
    auto rng = stream_rng(3, 0);
    ComplexField f = random_band_limited(g, rng, 60, 0.0);
    Complex mean(0.0, 0.0);
    for (const auto& z : f.samples()) mean += z;
    mean /= static_cast<double>(g.size());
    ComplexField mean_free = f;
    for (auto& z : mean_free.samples()) z -= mean;
    f.samples()[0] += 0.0;
    CHECK(hdot_s_norm(ComplexField::constant(g, 2.0) + f, SobolevIndex(0.0)) ==
          doctest::Approx(l2_norm(mean_free)).epsilon(1e-12));
  }
}

TEST_CASE("H^s properties on random fields") {
  const Grid1D g(30.0, 256);
  for (std::uint64_t i = 0; i < 25; ++i) {
    auto rng = stream_rng(21, i);
    const auto f = random_band_limited(g, rng, 100, 0.3);
    const auto h = random_band_limited(g, rng, 100, 0.3);
    CHECK(h_s_norm(f, SobolevIndex(0.0)) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
    double prev = 0.0;
    for (double s : {-0.5, 0.0, 0.5, 0.75, 1.0, 1.5, 2.0}) {
      const double n = h_s_norm(f, SobolevIndex(s));
      CHECK(n >= prev);
      prev = n;
    }
    for (double s : {0.0, 0.75, 1.5}) {
      const SobolevIndex si(s);
      const Complex ip = h_s_inner(f, h, si);
      CHECK(std::abs(ip) <= h_s_norm(f, si) * h_s_norm(h, si) * (1.0 + 1e-12));
      const Complex self = h_s_inner(f, f, si);
      CHECK(std::abs(self.imag()) <= 1e-12 * self.real());
      CHECK(self.real() == doctest::Approx(std::pow(h_s_norm(f, si), 2)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(h_s_norm(ComplexField::constant(g, NAN), SobolevIndex(1.0)), NumericError);
}

TEST_CASE("dealiased product is exact for band-limited inputs") {
  const Grid1D g(40.0, 256);
  auto rng = stream_rng(5, 0);
  const auto a = random_band_limited(g, rng, 60, 0.0);
  const auto b = random_band_limited(g, rng, 60, 0.0);
  CHECK(test_support::relative_l2_diff(dealiased_product(a, b), pointwise_product(a, b)) < 1e-12);
  // A constant factor passes everything through, including the Nyquist mode.
  const auto c = random_band_limited(g, rng, 127, 0.0);
  ComplexField with_nyq = c;
  for (std::size_t j = 0; j < g.size(); ++j) with_nyq[j] += (j % 2 == 0 ? 1.0 : -1.0);
  CHECK(test_support::relative_l2_diff(
            dealiased_product(ComplexField::constant(g, 1.0), with_nyq), with_nyq) < 1e-13);
}

TEST_CASE("W^{s,2}(B) norms") {
  const Grid1D g(60.0, 4096);
  const Ball unit{0.0, 1.0};
  CHECK(w_s2_ball_norm(ComplexField(g), unit, SobolevIndex(0.7)) == 0.0);

  for (double s : {0.0, 1.0, 2.0}) {
    const Ball b{3.1, 1.7};
    CHECK(w_s2_ball_norm(ComplexField::constant(g, {0.6, -0.8}), b, SobolevIndex(s)) ==
          doctest::Approx(std::sqrt(2.0 * b.radius)).epsilon(1e-12));
  }

  SUBCASE("f(x) = x on (-1, 1), s = 1/2") {
    // Off the diagonal |x - y|^2 / |x - y|^2 = 1, so the double integral is
    // |B|^2 = 4; the L^2 term is 2/3.
    const double oracle = std::sqrt(2.0 / 3.0 + 4.0);
    for (std::size_t n : {4096u, 16384u}) {
      const Grid1D gg(60.0, n);
      const auto f = ComplexField::from_function(gg, [](double x) { return x; });
      const double v = w_s2_ball_norm(f, unit, SobolevIndex(0.5));
      CHECK(std::abs(v - oracle) / oracle < 0.01);
    }
  }

  SUBCASE("sin on a ball against Gauss-Legendre product quadrature") {
    // s = 1/2 and s = 3/2: the difference quotients are bounded, so a
    // tensor Gauss rule on B x B is an independent oracle.
    const Ball b{0.5, 1.2};
    auto oracle = [&](bool derivative) {
      auto f = [derivative](double x) { return derivative ? std::cos(x) : std::sin(x); };
      const double lo = b.center - b.radius, hi = b.center + b.radius;
      double l2 = gauss_integral([](double x) { return std::sin(x) * std::sin(x); }, lo, hi);
      if (derivative) l2 += gauss_integral([](double x) { return std::cos(x) * std::cos(x); }, lo, hi);
      const double gag = gauss_integral(
          [&](double x) {
            return gauss_integral(
                [&](double y) {
                  const double d = x - y;
                  if (std::abs(d) < 1e-12) return 0.0;
                  return std::pow(f(x) - f(y), 2) / (d * d);
                },
                lo, hi, 16, 16);
          },
          lo, hi, 16, 16);
      return std::sqrt(l2 + gag);
    };
    const auto f = ComplexField::from_function(g, [](double x) { return std::sin(x); });
    const double half = w_s2_ball_norm(f, b, SobolevIndex(0.5));
    const double o_half = oracle(false);
    CHECK(std::abs(half - o_half) / o_half < 0.01);
    // sin is not periodic on L = 60: use a box of length 2 pi * 10.
    const Grid1D gp(20.0 * std::numbers::pi, 4096);
    const auto fp = ComplexField::from_function(gp, [](double x) { return std::sin(x); });
    const double three_half = w_s2_ball_norm(fp, b, SobolevIndex(1.5));
    const double o_three_half = oracle(true);
    CHECK(std::abs(three_half - o_three_half) / o_three_half < 0.01);
  }

  SUBCASE("whole period at integer s equals H^s") {
    const Grid1D gg(20.0, 2048);
    for (std::uint64_t i = 0; i < 5; ++i) {
      auto rng = stream_rng(9, i);
      const auto f = random_band_limited(gg, rng, 40, 1.0);
      for (double s : {0.0, 1.0, 2.0}) {
        const double w = w_s2_ball_norm(f, Ball{0.0, 10.0}, SobolevIndex(s));
        const double hs = h_s_norm(f, SobolevIndex(s));
        CHECK(std::abs(w - hs) / hs < 0.05);
      }
    }
  }

  CHECK_THROWS_AS(w_s2_ball_norm(ComplexField(g), Ball{0.0, 31.0}, SobolevIndex(1.0)),
                  DomainError);
  CHECK_THROWS_AS(w_s2_ball_norm(ComplexField(g), unit, SobolevIndex(-0.5)), DomainError);
}

TEST_CASE("ball quadrature weights sum to the ball length") {
  const Grid1D g(10.0, 64);
  for (double c : {0.0, 0.037, -4.9, 4.99}) {
    for (double r : {0.01, 0.3, 2.0, 5.0}) {
      const auto q = ball_quadrature(g, Ball{c, r});
      double total = 0.0;
      for (double w : q.weight) total += w;
      CHECK(total == doctest::Approx(2.0 * r).epsilon(1e-12));
    }
  }
}

TEST_CASE("partition norm equivalence") {
  const Grid1D g(40.0, 512);
  const auto zero = partition_norm_equivalence_probe(ComplexField(g), SobolevIndex(1.0), 2.0);
  CHECK(zero.degenerate);

  const auto bump = ComplexField::from_function(g, [](double x) { return std::exp(-x * x); });
  const auto r1 = partition_norm_equivalence_probe(bump, SobolevIndex(1.0), 2.0);
  CHECK_FALSE(r1.degenerate);
  CHECK(r1.lower_ratio <= 1.0 + 1e-12);
  CHECK(r1.upper_ratio <= 1.0 + 1e-12);  // B_k overlap, so the sum over B_k doubles L^2 parts

  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = stream_rng(17, i);
    const auto f = random_band_limited(g, rng, 40, 1.5);
    const auto r = partition_norm_equivalence_probe(f, SobolevIndex(1.0), 2.0);
    CHECK(r.lower_ratio <= 1.0 + 1e-12);
    CHECK(std::isfinite(r.upper_ratio));
    worst = std::max(worst, r.upper_ratio);
  }
  CHECK(worst < 1.0);

  CHECK_THROWS_AS(partition_norm_equivalence_probe(bump, SobolevIndex(1.0), 3.0), ParameterError);
}
