#include "sns/grid.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace sns {

namespace {

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<const Grid> Grid::create(int n, double length) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("Grid: n must be even and >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("Grid: box length must be positive and finite");
  }
  return std::shared_ptr<const Grid>(new Grid(n, length));
}

Grid::Grid(int n, double length)
    : n_(n),
      length_(length),
      k0_(kTwoPi / length),
      real_size_(static_cast<std::size_t>(n) * n * n),
      spectral_size_(static_cast<std::size_t>(n) * n * (n / 2 + 1)) {
  AlignedVector<double> real(real_size_);
  AlignedVector<Complex> spec(spectral_size_);
  auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());

  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_3d(n, n, n, real.data(), cspec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_3d(n, n, n, cspec, real.data(), FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("Grid: FFTW planning failed");
  }
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(forward_plan_);
  if (inverse_plan_ != nullptr) fftw_destroy_plan(inverse_plan_);
}

double Grid::max_wavenumber() const { return k0_ * std::sqrt(static_cast<double>(max_shell())); }

std::string Grid::describe() const {
  std::ostringstream os;
  os << "n=" << n_ << ", L=" << length_;
  return os.str();
}

void Grid::forward(const double* physical, Complex* spectral) const {
  // r2c does not modify its input; the const_cast only satisfies the C API.
  fftw_execute_dft_r2c(forward_plan_, const_cast<double*>(physical), reinterpret_cast<fftw_complex*>(spectral));
  const double scale = 1.0 / static_cast<double>(real_size_);
  for (std::size_t m = 0; m < spectral_size_; ++m) spectral[m] *= scale;
}

void Grid::inverse(const Complex* spectral, double* physical) const {
  // c2r destroys its input, so it always runs on a private copy.
  AlignedVector<Complex> scratch(spectral, spectral + spectral_size_);
  fftw_execute_dft_c2r(inverse_plan_, reinterpret_cast<fftw_complex*>(scratch.data()), physical);
}

}  // namespace sns
