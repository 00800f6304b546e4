#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

namespace sns {

using Complex = std::complex<double>;

/// Raised when two fields (or a field and an operator) live on different grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// std::allocator replacement backed by fftw_malloc so every buffer has the
/// alignment the shared FFTW plans were created with.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    if (count > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_array_new_length();
    void* p = fftw_malloc(count * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }

  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

template <class T>
using AlignedVector = std::vector<T, FftwAllocator<T>>;

/// Periodic box [0, L)^3 with n collocation points per dimension.
///
/// Spectral data uses the real-to-complex half layout: indices (i, j, l) with
/// i, j in [0, n) and l in [0, n/2]. Index i maps to the signed wavenumber
/// index i for i < n/2 and i - n otherwise; the physical wavenumber is
/// (2*pi/L) times the signed index. The plane l = 0 and the Nyquist plane
/// l = n/2 hold their own Hermitian partners; every other plane stands for
/// itself and its conjugate mirror.
///
/// Transforms are normalized so that the k = 0 coefficient equals the lattice
/// mean. A Grid is immutable and safe to share between threads.
class Grid {
 public:
  static std::shared_ptr<const Grid> create(int n, double length = kTwoPi);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  static constexpr double kTwoPi = 6.283185307179586476925286766559;

  int n() const { return n_; }
  int nz() const { return n_ / 2 + 1; }
  double length() const { return length_; }
  /// Fundamental wavenumber 2*pi/L.
  double k0() const { return k0_; }

  std::size_t real_size() const { return real_size_; }
  std::size_t spectral_size() const { return spectral_size_; }

  std::size_t index(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * n_ + j) * nz() + l;
  }

  /// Signed integer wavenumber index of array index i along a full axis.
  int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }
  bool is_nyquist(int i) const { return i == n_ / 2; }

  /// Physical wavenumber along a full axis (i in [0, n)) or the half axis (l in [0, n/2]).
  double wavenumber(int i) const { return k0_ * signed_index(i); }
  double half_wavenumber(int l) const { return k0_ * l; }

  /// Wavenumber used by first-derivative multipliers: zero on the Nyquist index,
  /// whose mode has no distinct conjugate partner.
  double derivative_wavenumber(int i) const { return is_nyquist(i) ? 0.0 : wavenumber(i); }
  double half_derivative_wavenumber(int l) const { return l == n_ / 2 ? 0.0 : half_wavenumber(l); }

  /// |k|^2 in integer units (signed indices squared), independent of L.
  int shell(int i, int j, int l) const {
    const int a = signed_index(i);
    const int b = signed_index(j);
    return a * a + b * b + l * l;
  }
  double k_squared(int i, int j, int l) const { return k0_ * k0_ * shell(i, j, l); }

  /// Number of conjugate-mirror modes a half-layout entry represents (1 or 2).
  double mode_weight(int l) const { return (l == 0 || l == n_ / 2) ? 1.0 : 2.0; }

  /// Largest retained |signed index| under the 2/3 rule: 3|k| < n.
  int dealias_cutoff() const { return (n_ - 1) / 3; }
  bool dealias_retained(int i, int j, int l) const {
    const int c = dealias_cutoff();
    return std::abs(signed_index(i)) <= c && std::abs(signed_index(j)) <= c && l <= c;
  }

  /// Largest integer shell value present on the grid.
  int max_shell() const { return 3 * (n_ / 2) * (n_ / 2); }
  double min_wavenumber() const { return k0_; }
  double max_wavenumber() const;

  bool compatible(const Grid& other) const { return n_ == other.n_ && length_ == other.length_; }
  std::string describe() const;

  /// Forward transform of one real lattice (n^3) into half-layout coefficients.
  void forward(const double* physical, Complex* spectral) const;
  /// Inverse transform of one half-layout lattice into n^3 real values.
  void inverse(const Complex* spectral, double* physical) const;

 private:
  Grid(int n, double length);

  int n_;
  double length_;
  double k0_;
  std::size_t real_size_;
  std::size_t spectral_size_;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan inverse_plan_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

inline void require_compatible(const Grid& a, const Grid& b, const char* where) {
  if (!a.compatible(b)) {
    throw GridMismatch(std::string(where) + ": grid mismatch (" + a.describe() + " vs " + b.describe() + ")");
  }
}

}  // namespace sns
