#pragma once

#include <cstdint>
#include <string>

#include "sns/field.hpp"

namespace sns {

/// u = A (sin x cos y cos z, -cos x sin y cos z, 0) on a 2*pi box (scaled to L).
SpectralField taylor_green(const GridPtr& grid, double amplitude);

/// A single Fourier mode pair: u = A cos(k0 * x) e_2 (shear wave, divergence-free).
SpectralField shear_wave(const GridPtr& grid, double amplitude, int wavenumber = 1);

/// Random real, zero-mean, divergence-free vector field with independent
/// Gaussian coefficients on the shells band_lo <= |k| <= band_hi (integer
/// units), restricted to the dealiasing band and scaled to unit L2 norm.
SpectralField random_solenoidal(const GridPtr& grid, std::uint64_t seed, double band_lo, double band_hi);

/// Builtin initial fields by name: "taylor-green", "shear-wave", "random".
SpectralField builtin_field(const GridPtr& grid, const std::string& name, double amplitude, std::uint64_t seed = 0);

}  // namespace sns
