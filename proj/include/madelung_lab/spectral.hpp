#pragma once

#include <cstddef>
#include <vector>

#include "madelung_lab/fft.hpp"
#include "madelung_lab/grid.hpp"

namespace mlab {

/// Fourier coefficients under the Plancherel convention
///   fhat_k = (h / sqrt(L)) * sum_j f_j exp(-2 pi i j k / N),
/// so that sum_k |fhat_k|^2 = h * sum_j |f_j|^2 (the discrete L^2 norm
/// squared). Phases are referenced to x_0 = -L/2; none of the norms see them.
struct Spectrum {
  Grid1D grid;
  ComplexVector coeffs;
};

Spectrum dft(const ComplexField& field);
ComplexField idft(const Spectrum& spectrum);

/// Multiplies the spectrum by m(xi_k) and transforms back.
template <class Multiplier>
ComplexField apply_multiplier(const ComplexField& field, Multiplier&& m) {
  ComplexVector data = field.samples();
  fft::forward(data);
  const Grid1D& g = field.grid();
  const double inv_n = 1.0 / static_cast<double>(g.size());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= m(k, g.xi(k)) * inv_n;
  fft::backward(data);
  return ComplexField(g, std::move(data));
}

/// Applies (i xi)^order. For odd orders the Nyquist mode is zeroed so that
/// real fields have real derivatives.
ComplexField spectral_derivative(const ComplexField& field, int order = 1);
RealVector spectral_derivative(const Grid1D& grid, const RealVector& values, int order = 1);

/// Antiderivative of the mean-free part, normalized to vanish at x = 0.
/// The mean is returned separately; the caller decides what to do with it.
RealVector spectral_antiderivative(const Grid1D& grid, const RealVector& values, double* mean);

/// <xi_k>^{2s}, the H^s weights in FFT order.
RealVector sobolev_weights(const Grid1D& grid, double s);
/// |xi_k|^{2s} with the zero mode set to 0.
RealVector homogeneous_weights(const Grid1D& grid, double s);

/// sum_k w_k a_k conj(b_k) with compensated summation.
Complex weighted_inner(const ComplexVector& a, const ComplexVector& b, const RealVector& w);
double weighted_norm_squared(const ComplexVector& a, const RealVector& w);

double h_s_norm(const ComplexField& field, SobolevIndex s);
Complex h_s_inner(const ComplexField& f, const ComplexField& g, SobolevIndex s);
double hdot_s_norm(const ComplexField& field, SobolevIndex s);
double l2_norm(const ComplexField& field);
double linf_norm(const ComplexField& field);

double h_s_norm(const Grid1D& grid, const RealVector& values, SobolevIndex s);

/// Product evaluated on a 3/2 zero-padded grid and truncated back to N modes.
/// The Nyquist coefficient is split symmetrically before padding, so a
/// constant factor reproduces the other factor exactly.
ComplexField dealiased_product(const ComplexField& a, const ComplexField& b);
RealVector dealiased_product(const Grid1D& grid, const RealVector& a, const RealVector& b);

/// Quadrature nodes for a ball: grid cells (width h, centered at grid points,
/// unwrapped around the ball center) weighted by their overlap with the ball.
struct BallQuadrature {
  std::vector<std::size_t> index;  // grid index of each node
  RealVector position;             // unwrapped coordinate of each node
  RealVector weight;               // overlap length, sums to 2R
};

BallQuadrature ball_quadrature(const Grid1D& grid, const Ball& ball);

/// Sobolev-Slobodeckij norm on a ball, s = m + alpha with alpha in [0, 1).
/// L^2 terms use cell-overlap weights; the Gagliardo double integral uses
/// midpoint quadrature on the cell product with diagonal cells excluded.
/// Derivatives come from the global spectral derivative (periodic fields).
double w_s2_ball_norm(const ComplexField& field, const Ball& ball, SobolevIndex s);
Complex w_s2_ball_inner(const ComplexField& f, const ComplexField& g, const Ball& ball,
                        SobolevIndex s);

/// Same quantities from precomputed derivative stacks: derivs[k] holds
/// d^k f for k = 0..m. Samples are used as given, so non-periodic data
/// (m = 0) is fine.
Complex w_s2_ball_inner(const std::vector<ComplexField>& f_derivs,
                        const std::vector<ComplexField>& g_derivs, const BallQuadrature& quad,
                        SobolevIndex s);
std::vector<ComplexField> derivative_stack(const ComplexField& field, int max_order);

struct PartitionRatioReport {
  double s = 0.0;
  double radius = 0.0;
  std::size_t n_balls = 0;
  double hs_norm_sq = 0.0;
  double small_ball_sum = 0.0;  // sum_k ||f||^2_{W^{s,2}(B~_k)}, radius R/2
  double ball_sum = 0.0;        // sum_k ||f||^2_{W^{s,2}(B_k)}, radius R
  double lower_ratio = 0.0;     // small_ball_sum / hs_norm_sq
  double upper_ratio = 0.0;     // hs_norm_sq / ball_sum
  bool degenerate = false;      // zero field: ratios are 0/0
};

/// Balls B_k of radius R centered at -L/2 + kR (k = 0..L/R-1) and the
/// concentric B~_k of radius R/2, which tile the period.
PartitionRatioReport partition_norm_equivalence_probe(const ComplexField& field, SobolevIndex s,
                                                      double radius);

}  // namespace mlab
