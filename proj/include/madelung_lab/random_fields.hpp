#pragma once

#include <cstdint>
#include <random>

#include "madelung_lab/grid.hpp"
#include "madelung_lab/madelung.hpp"

namespace mlab {

/// Independent generator for sample `index` of a run seeded with `seed`.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index);

/// Gaussian-random trigonometric polynomial with wavenumbers |k| <= max_mode
/// and coefficient envelope <xi_k>^{-decay}. The same (rng state, L,
/// max_mode) gives the same function on every grid with N > 2 max_mode.
ComplexField random_band_limited(const Grid1D& grid, std::mt19937_64& rng, long max_mode,
                                 double decay, bool real_valued = false);

/// Random sum of Gaussian bumps centered in the middle third of the box,
/// widths in [min_width, 2 min_width], standard-normal weights. Smooth and
/// decaying; grid independent like random_band_limited.
struct BumpParams {
  int bumps = 4;
  double min_width = 0.75;
  double center_spread = 1.0 / 6.0;  // centers in [-spread L, spread L]
};

RealVector random_bumps(const Grid1D& grid, std::mt19937_64& rng, const BumpParams& p = {});

/// q = (1 + a(x)) exp(i b(x)) with random bump profiles a, b scaled by
/// amplitude_mod and amplitude_phase. Periodic to truncation accuracy and
/// phase-compatible (b decays, so no winding).
ComplexField random_vacuum_free(const Grid1D& grid, std::mt19937_64& rng, double amplitude_mod,
                                double amplitude_phase, const BumpParams& p = {});

/// Valid hydrodynamic state rho = exp(amplitude_rho a), v = amplitude_v b'
/// (a, b random bumps). v is an exact derivative, so it has zero mean.
HydroState random_valid_state(const Grid1D& grid, std::mt19937_64& rng, double amplitude_rho,
                              double amplitude_v, const BumpParams& p = {});

}  // namespace mlab
