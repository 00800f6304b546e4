#pragma once

#include "sns/field.hpp"

namespace sns {

// Transform pair. The k = 0 coefficient equals the lattice mean, so Parseval
// reads mean(|u|^2) = sum over all modes of |u_k|^2.
PhysicalField to_physical(const SpectralField& f);
SpectralField to_spectral(const PhysicalField& g);

/// Applies a real per-mode symbol m(i, j, l) to every component.
template <class Symbol>
SpectralField apply_multiplier(const SpectralField& f, Symbol&& symbol) {
  SpectralField out = SpectralField::zeros_like(f);
  const Grid& grid = f.grid();
  const int n = grid.n();
  const int nz = grid.nz();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < nz; ++l) {
        const auto m = symbol(i, j, l);
        const std::size_t idx = grid.index(i, j, l);
        for (int c = 0; c < f.components(); ++c) out.component(c)[idx] = m * f.component(c)[idx];
      }
    }
  }
  return out;
}

/// Partial derivative along axis 0, 1 or 2: multiplier i*k_axis.
SpectralField derivative(const SpectralField& f, int axis);
/// Multiplier -|k|^2.
SpectralField laplacian(const SpectralField& f);
/// e^{t Laplacian}: multiplier exp(-t|k|^2). Throws for negative t.
SpectralField heat_semigroup(const SpectralField& f, double t);
/// Per-mode projector I - k k^T/|k|^2 onto divergence-free fields; identity at k = 0.
SpectralField leray_project(const SpectralField& f);
/// Gradient of a scalar field.
SpectralField gradient(const SpectralField& scalar);
/// Divergence of a vector field (scalar result), or row divergence
/// (div T)_b = sum_a d_a T_ab of a tensor field (vector result).
SpectralField divergence(const SpectralField& f);
/// Zeroes every mode outside the 2/3-rule band.
SpectralField dealias(const SpectralField& f);

/// Dealiased spectral representation of the pointwise products x^a y^b.
SpectralField tensor_product(const SpectralField& x, const SpectralField& y);

/// Q(x, y) = div(x (x) y) + grad (-Laplacian)^{-1} sum_ab d_a d_b (x^a y^b),
/// evaluated as the Leray projection of div(x (x) y). Not symmetric in general.
SpectralField q_bilinear(const SpectralField& x, const SpectralField& y);

// Diagnostics.

/// Root of sum_k |f_k|^2 over the full lattice and all components.
double spectral_l2_norm(const SpectralField& f);
/// Root-mean-square over the lattice and all components.
double physical_l2_norm(const PhysicalField& g);
/// max |k . f_k| / max |f_k| for a vector field (0 for the zero field).
double divergence_defect(const SpectralField& f);
/// max |f(-k) - conj f(k)| / max |f_k| over the self-partnered planes.
double hermitian_defect(const SpectralField& f);
/// max over components of |f_0|.
double mean_magnitude(const SpectralField& f);
double max_abs_coefficient(const SpectralField& f);
/// Replaces the self-partnered planes by their Hermitian part (real-field projection).
void enforce_hermitian(SpectralField& f);
/// Copy with every k = 0 coefficient set to zero.
SpectralField remove_mean(SpectralField f);

}  // namespace sns
