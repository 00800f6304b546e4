#pragma once

#include <span>

#include "sns/grid.hpp"

namespace sns {

/// Fourier coefficients of a real scalar (1), vector (3) or rank-2 tensor (9)
/// field in the half layout of its Grid. Tensor component (a, b) is stored at
/// index 3*a + b.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridPtr grid, int components);

  static SpectralField zeros_like(const SpectralField& other) { return {other.grid_, other.components_}; }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return components_; }
  bool empty() const { return grid_ == nullptr; }

  std::span<Complex> component(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * grid_->spectral_size(), grid_->spectral_size()};
  }
  std::span<const Complex> component(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * grid_->spectral_size(), grid_->spectral_size()};
  }

  Complex& at(int c, int i, int j, int l) { return data_[offset(c) + grid_->index(i, j, l)]; }
  const Complex& at(int c, int i, int j, int l) const { return data_[offset(c) + grid_->index(i, j, l)]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// this += scale * other
  SpectralField& add_scaled(double scale, const SpectralField& other);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  std::size_t offset(int c) const { return static_cast<std::size_t>(c) * grid_->spectral_size(); }
  void require_same_shape(const SpectralField& other, const char* where) const;

  GridPtr grid_;
  int components_ = 0;
  AlignedVector<Complex> data_;
};

/// Real values on the n^3 collocation lattice, row-major (x slowest).
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(GridPtr grid, int components);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return components_; }

  std::span<double> component(int c) {
    return {data_.data() + static_cast<std::size_t>(c) * grid_->real_size(), grid_->real_size()};
  }
  std::span<const double> component(int c) const {
    return {data_.data() + static_cast<std::size_t>(c) * grid_->real_size(), grid_->real_size()};
  }
  double& at(int c, int x, int y, int z) { return data_[point_index(c, x, y, z)]; }
  double at(int c, int x, int y, int z) const { return data_[point_index(c, x, y, z)]; }

  /// Coordinate of lattice index along any axis.
  double coordinate(int x) const { return grid_->length() * x / grid_->n(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t point_index(int c, int x, int y, int z) const {
    const std::size_t n = grid_->n();
    return static_cast<std::size_t>(c) * grid_->real_size() + (x * n + y) * n + z;
  }

  GridPtr grid_;
  int components_ = 0;
  AlignedVector<double> data_;
};

}  // namespace sns
