#include "sns/initial_data.hpp"

#include <cmath>

#include "sns/random.hpp"
#include "sns/spectral.hpp"

namespace sns {

SpectralField taylor_green(const GridPtr& grid, double amplitude) {
  PhysicalField u(grid, 3);
  const int n = grid->n();
  const double k0 = grid->k0();
  for (int x = 0; x < n; ++x) {
    const double px = k0 * u.coordinate(x);
    for (int y = 0; y < n; ++y) {
      const double py = k0 * u.coordinate(y);
      for (int z = 0; z < n; ++z) {
        const double pz = k0 * u.coordinate(z);
        u.at(0, x, y, z) = amplitude * std::sin(px) * std::cos(py) * std::cos(pz);
        u.at(1, x, y, z) = -amplitude * std::cos(px) * std::sin(py) * std::cos(pz);
      }
    }
  }
  // Exact coefficients are +-A/8 (times i); the transform reproduces them to rounding.
  return remove_mean(to_spectral(u));
}

SpectralField shear_wave(const GridPtr& grid, double amplitude, int wavenumber) {
  if (wavenumber <= 0 || 3 * wavenumber >= grid->n()) {
    throw std::invalid_argument("shear_wave: wavenumber must lie inside the dealiasing band");
  }
  SpectralField u(grid, 3);
  // A cos(k x) = (A/2) e^{ikx} + (A/2) e^{-ikx}; x is the first (slowest) axis.
  u.at(1, wavenumber, 0, 0) = Complex(0.5 * amplitude, 0.0);
  u.at(1, grid->n() - wavenumber, 0, 0) = Complex(0.5 * amplitude, 0.0);
  return u;
}

SpectralField random_solenoidal(const GridPtr& grid, std::uint64_t seed, double band_lo, double band_hi) {
  if (!(band_hi >= band_lo) || band_lo < 0.0) throw std::invalid_argument("random_solenoidal: invalid band");
  SpectralField u(grid, 3);
  const Grid& g = *grid;
  const int n = g.n();
  const int nz = g.nz();
  const double lo2 = band_lo * band_lo;
  const double hi2 = band_hi * band_hi;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < nz; ++l) {
        const double s = g.shell(i, j, l);
        if (s == 0.0 || s < lo2 || s > hi2 || !g.dealias_retained(i, j, l)) continue;
        const std::size_t idx = g.index(i, j, l);
        for (int c = 0; c < 3; ++c) {
          const std::uint64_t key = hash_key(seed, static_cast<std::uint64_t>(c), idx);
          u.component(c)[idx] = Complex(counter_normal(hash_key(key, 0)), counter_normal(hash_key(key, 1)));
        }
      }
    }
  }
  enforce_hermitian(u);
  u = leray_project(u);
  const double norm = spectral_l2_norm(u);
  if (norm > 0.0) u *= 1.0 / norm;
  return u;
}

SpectralField builtin_field(const GridPtr& grid, const std::string& name, double amplitude, std::uint64_t seed) {
  if (name == "taylor-green") return taylor_green(grid, amplitude);
  if (name == "shear-wave") return shear_wave(grid, amplitude);
  if (name == "random") {
    SpectralField u = random_solenoidal(grid, seed, 1.0, 4.0);
    return u *= amplitude;
  }
  throw std::invalid_argument("unknown builtin field '" + name + "'");
}

}  // namespace sns
