#include "madelung_lab/random_fields.hpp"

#include <cmath>

#include "madelung_lab/fft.hpp"
#include "madelung_lab/spectral.hpp"

namespace mlab {

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6d6c6162u};
  return std::mt19937_64(seq);
}

ComplexField random_band_limited(const Grid1D& grid, std::mt19937_64& rng, long max_mode,
                                 double decay, bool real_valued) {
  if (2 * max_mode >= static_cast<long>(grid.size())) {
    throw ParameterError("random_band_limited: max_mode must be below N/2");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const double two_pi_over_l = 2.0 * M_PI / grid.length();
  // Draw in a fixed wavenumber order so the function is grid independent.
  std::vector<Complex> coeff(static_cast<std::size_t>(2 * max_mode + 1));
  for (long k = -max_mode; k <= max_mode; ++k) {
    const double xi = two_pi_over_l * static_cast<double>(k);
    const double env = std::pow(1.0 + xi * xi, -0.5 * decay);
    const double re = normal(rng);
    const double im = normal(rng);
    coeff[static_cast<std::size_t>(k + max_mode)] = env * Complex(re, im) / std::sqrt(2.0);
  }
  if (real_valued) {
    for (long k = 1; k <= max_mode; ++k) {
      auto& pos = coeff[static_cast<std::size_t>(max_mode + k)];
      auto& neg = coeff[static_cast<std::size_t>(max_mode - k)];
      pos = 0.5 * (pos + std::conj(neg));
      neg = std::conj(pos);
    }
    auto& zero = coeff[static_cast<std::size_t>(max_mode)];
    zero = zero.real();
  }
  // e^{i xi_k x_j} = (-1)^k e^{2 pi i jk/N} since x_0 = -L/2.
  const auto n = static_cast<long>(grid.size());
  ComplexVector s(grid.size(), Complex(0.0, 0.0));
  for (long k = -max_mode; k <= max_mode; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s[static_cast<std::size_t>((k + n) % n)] = sign * coeff[static_cast<std::size_t>(k + max_mode)];
  }
  fft::backward(s);
  if (real_valued) {
    for (auto& z : s) z = Complex(z.real(), 0.0);
  }
  return ComplexField(grid, std::move(s));
}

RealVector random_bumps(const Grid1D& grid, std::mt19937_64& rng, const BumpParams& p) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double spread = p.center_spread * grid.length();
  struct Bump {
    double weight, center, width;
  };
  std::vector<Bump> bumps;
  for (int b = 0; b < p.bumps; ++b) {
    const double w = normal(rng);
    const double c = (2.0 * unit(rng) - 1.0) * spread;
    const double width = p.min_width * (1.0 + unit(rng));
    bumps.push_back({w, c, width});
  }
  RealVector out(grid.size(), 0.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double x = grid.x(j);
    double acc = 0.0;
    for (const auto& b : bumps) {
      const double z = (x - b.center) / b.width;
      acc += b.weight * std::exp(-0.5 * z * z);
    }
    out[j] = acc;
  }
  return out;
}

ComplexField random_vacuum_free(const Grid1D& grid, std::mt19937_64& rng, double amplitude_mod,
                                double amplitude_phase, const BumpParams& p) {
  const RealVector a = random_bumps(grid, rng, p);
  const RealVector b = random_bumps(grid, rng, p);
  ComplexVector s(grid.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    s[j] = (1.0 + amplitude_mod * a[j]) * std::polar(1.0, amplitude_phase * b[j]);
  }
  return ComplexField(grid, std::move(s));
}

HydroState random_valid_state(const Grid1D& grid, std::mt19937_64& rng, double amplitude_rho,
                              double amplitude_v, const BumpParams& p) {
  const RealVector a = random_bumps(grid, rng, p);
  RealVector v = spectral_derivative(grid, random_bumps(grid, rng, p), 1);
  RealVector rho(grid.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    rho[j] = std::exp(amplitude_rho * a[j]);
    v[j] *= amplitude_v;
  }
  return HydroState(grid, std::move(rho), std::move(v));
}

}  // namespace mlab
