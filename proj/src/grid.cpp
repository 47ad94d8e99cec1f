#include "madelung_lab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mlab {

Grid1D::Grid1D(double length, std::size_t n_points) : length_(length), n_(n_points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidGridError("grid length must be positive and finite");
  }
  if (n_points < 2 || (n_points & (n_points - 1)) != 0) {
    throw InvalidGridError("grid size must be a power of two >= 2, got " +
                           std::to_string(n_points));
  }
}

double Grid1D::xi(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(wavenumber(k)) / length_;
}

double Grid1D::xi_max() const {
  return std::numbers::pi * static_cast<double>(n_) / length_;
}

RealVector Grid1D::coordinates() const {
  RealVector xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

RealVector Grid1D::frequencies() const {
  RealVector f(n_);
  for (std::size_t k = 0; k < n_; ++k) f[k] = xi(k);
  return f;
}

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* where) {
  if (!(a == b)) throw InvalidGridError(std::string(where) + ": fields live on different grids");
}

ComplexField::ComplexField(const Grid1D& grid) : grid_(grid), samples_(grid.size()) {}

ComplexField::ComplexField(const Grid1D& grid, ComplexVector samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw InvalidGridError("sample count " + std::to_string(samples_.size()) +
                           " does not match grid size " + std::to_string(grid_.size()));
  }
}

ComplexField ComplexField::constant(const Grid1D& grid, Complex value) {
  return ComplexField(grid, ComplexVector(grid.size(), value));
}

bool ComplexField::all_finite() const {
  for (const auto& z : samples_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void ComplexField::require_finite(const char* where) const {
  if (!all_finite()) throw NumericError(std::string(where) + ": non-finite sample");
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  require_same_grid(grid_, o.grid_, "operator+=");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += o.samples_[j];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  require_same_grid(grid_, o.grid_, "operator-=");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= o.samples_[j];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex c) {
  for (auto& z : samples_) z *= c;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(Complex c, ComplexField a) { return a *= c; }

ComplexField pointwise_product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise_product");
  ComplexField out(a.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

ComplexField from_real(const Grid1D& grid, const RealVector& values) {
  ComplexVector s(values.begin(), values.end());
  return ComplexField(grid, std::move(s));
}

RealVector real_part(const ComplexField& f) {
  RealVector r(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) r[j] = f[j].real();
  return r;
}

RealVector imag_part(const ComplexField& f) {
  RealVector r(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) r[j] = f[j].imag();
  return r;
}

SobolevIndex::SobolevIndex(double s) : s_(s) {
  if (!std::isfinite(s)) throw DomainError("Sobolev index must be finite");
}

void SobolevIndex::require_above(double bound, const char* where) const {
  if (!(s_ > bound)) {
    throw DomainError(std::string(where) + ": requires s > " + std::to_string(bound) +
                      ", got " + std::to_string(s_));
  }
}

}  // namespace mlab
