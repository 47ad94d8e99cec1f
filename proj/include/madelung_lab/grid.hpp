#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "madelung_lab/errors.hpp"

namespace mlab {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Uniform periodic grid on [-L/2, L/2) with x_j = -L/2 + j h.
///
/// Spectral data is kept in FFT order: index k < N/2 holds wavenumber k,
/// index k >= N/2 holds wavenumber k - N, so index N/2 is the Nyquist mode
/// -N/2 (the only frequency without a partner of opposite sign).
class Grid1D {
 public:
  Grid1D(double length, std::size_t n_points);

  double length() const { return length_; }
  std::size_t size() const { return n_; }
  double spacing() const { return length_ / static_cast<double>(n_); }

  double x(std::size_t j) const {
    return -0.5 * length_ + static_cast<double>(j) * spacing();
  }
  /// Signed integer wavenumber of FFT slot k.
  long wavenumber(std::size_t k) const {
    return k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
  }
  double xi(std::size_t k) const;
  double xi_max() const;  // |xi| of the Nyquist mode
  std::size_t nyquist() const { return n_ / 2; }
  /// Grid index of x = 0.
  std::size_t origin() const { return n_ / 2; }

  RealVector coordinates() const;
  RealVector frequencies() const;

  bool operator==(const Grid1D& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  double length_;
  std::size_t n_;
};

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where);

/// Grid samples of a complex wave function.
class ComplexField {
 public:
  explicit ComplexField(const Grid1D& grid);  // zero field
  ComplexField(const Grid1D& grid, ComplexVector samples);

  static ComplexField constant(const Grid1D& grid, Complex value);

  template <class F>
  static ComplexField from_function(const Grid1D& grid, F&& f) {
    ComplexVector s(grid.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = f(grid.x(j));
    return ComplexField(grid, std::move(s));
  }

  const Grid1D& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  const ComplexVector& samples() const { return samples_; }
  ComplexVector& samples() { return samples_; }
  Complex operator[](std::size_t j) const { return samples_[j]; }
  Complex& operator[](std::size_t j) { return samples_[j]; }

  bool all_finite() const;
  /// Throws NumericError on NaN/Inf.
  void require_finite(const char* where) const;

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(Complex c);

 private:
  Grid1D grid_;
  ComplexVector samples_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(Complex c, ComplexField a);
ComplexField pointwise_product(const ComplexField& a, const ComplexField& b);

ComplexField from_real(const Grid1D& grid, const RealVector& values);
RealVector real_part(const ComplexField& f);
RealVector imag_part(const ComplexField& f);

/// Regularity index; finite by construction, admissible range checked per
/// operation.
class SobolevIndex {
 public:
  explicit SobolevIndex(double s);
  double value() const { return s_; }
  SobolevIndex shifted(double ds) const { return SobolevIndex(s_ + ds); }
  /// Throws DomainError unless s > bound.
  void require_above(double bound, const char* where) const;

 private:
  double s_;
};

/// Closed interval [center - radius, center + radius].
struct Ball {
  double center;
  double radius;
};

}  // namespace mlab
