#include "sns/field.hpp"

#include <string>

namespace sns {

namespace {

void require_component_count(int components) {
  if (components != 1 && components != 3 && components != 9) {
    throw std::invalid_argument("field: component count must be 1, 3 or 9, got " + std::to_string(components));
  }
}

}  // namespace

SpectralField::SpectralField(GridPtr grid, int components)
    : grid_(std::move(grid)), components_(components) {
  if (grid_ == nullptr) throw std::invalid_argument("SpectralField: null grid");
  require_component_count(components);
  data_.assign(static_cast<std::size_t>(components) * grid_->spectral_size(), Complex{});
}

void SpectralField::require_same_shape(const SpectralField& other, const char* where) const {
  require_compatible(*grid_, *other.grid_, where);
  if (components_ != other.components_) {
    throw std::invalid_argument(std::string(where) + ": component count mismatch");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_shape(other, "SpectralField::operator+=");
  for (std::size_t m = 0; m < data_.size(); ++m) data_[m] += other.data_[m];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_shape(other, "SpectralField::operator-=");
  for (std::size_t m = 0; m < data_.size(); ++m) data_[m] -= other.data_[m];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

SpectralField& SpectralField::add_scaled(double scale, const SpectralField& other) {
  require_same_shape(other, "SpectralField::add_scaled");
  for (std::size_t m = 0; m < data_.size(); ++m) data_[m] += scale * other.data_[m];
  return *this;
}

PhysicalField::PhysicalField(GridPtr grid, int components) : grid_(std::move(grid)), components_(components) {
  if (grid_ == nullptr) throw std::invalid_argument("PhysicalField: null grid");
  require_component_count(components);
  data_.assign(static_cast<std::size_t>(components) * grid_->real_size(), 0.0);
}

}  // namespace sns
