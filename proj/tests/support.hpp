#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "sns/field.hpp"
#include "sns/spectral.hpp"

namespace sns::test {

/// Sets the coefficient of mode k (integer units) in component c, together with
/// its Hermitian partner when that partner is stored in the half layout.
inline void set_mode(SpectralField& f, int c, int kx, int ky, int kz, Complex value) {
  const int n = f.grid().n();
  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  auto comp = f.component(c);
  if (kz < 0) {
    kx = -kx;
    ky = -ky;
    kz = -kz;
    value = std::conj(value);
  }
  comp[f.grid().index(wrap(kx), wrap(ky), kz)] = value;
  if (kz == 0 || kz == n / 2) comp[f.grid().index(wrap(-kx), wrap(-ky), kz)] = std::conj(value);
}

/// Samples fn(x, y, z) -> per-component values on the collocation lattice.
inline PhysicalField sample(const GridPtr& grid, int components,
                            const std::function<std::array<double, 9>(double, double, double)>& fn) {
  PhysicalField out(grid, components);
  const int n = grid->n();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        const auto v = fn(out.coordinate(x), out.coordinate(y), out.coordinate(z));
        const std::size_t at = (static_cast<std::size_t>(x) * n + y) * n + z;
        for (int c = 0; c < components; ++c) out.component(c)[at] = v[c];
      }
    }
  }
  return out;
}

/// Component c of f as a scalar field.
inline SpectralField component_field(const SpectralField& f, int c) {
  SpectralField out(f.grid_ptr(), 1);
  auto src = f.component(c);
  std::copy(src.begin(), src.end(), out.component(0).begin());
  return out;
}

inline double rel_l2(const SpectralField& a, const SpectralField& b) {
  const double scale = std::max(spectral_l2_norm(a), spectral_l2_norm(b));
  return scale == 0.0 ? 0.0 : spectral_l2_norm(a - b) / scale;
}

inline double max_abs_diff(const PhysicalField& a, const PhysicalField& b) {
  double worst = 0.0;
  for (std::size_t m = 0; m < a.data().size(); ++m) worst = std::max(worst, std::abs(a.data()[m] - b.data()[m]));
  return worst;
}

}  // namespace sns::test
