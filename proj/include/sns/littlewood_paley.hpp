#pragma once

#include <span>
#include <vector>

#include "sns/field.hpp"

namespace sns {

/// Smooth dyadic partition of frequency space.
///
/// chi is the exp(-1/x) glue between 3/4 and 4/3; phi(tau) = chi(tau/2) - chi(tau)
/// is supported in [3/4, 8/3] and sum_j phi(2^-j tau) = 1 for tau > 0.
/// The band range [j_min, j_max] covers every nonzero grid wavenumber.
class DyadicPartition {
 public:
  explicit DyadicPartition(const Grid& grid);

  static double chi(double tau);
  static double phi(double tau);

  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }

  /// phi(2^-band |k|).
  double block_symbol(int band, double k_magnitude) const;

 private:
  int j_min_;
  int j_max_;
};

/// Littlewood-Paley block: every coefficient scaled by phi(2^-j |k|).
SpectralField dyadic_block(const DyadicPartition& partition, const SpectralField& f, int band);

/// Homogeneous (|k|^2s weight) or inhomogeneous ((1+|k|^2)^s weight) Sobolev
/// norm. The homogeneous norm requires a zero-mean field.
double sobolev_norm(const SpectralField& f, double s, bool homogeneous = true);

/// Which l^r aggregation a Besov norm uses.
enum class BesovIndex { one, two, infinity };

/// Homogeneous Besov norm with p = 2: l^r aggregate over bands of 2^{js} ||block_j f||_{L2}.
double besov_norm(const DyadicPartition& partition, const SpectralField& f, double s, BesovIndex r);
/// Integer front-end; throws for r not in {1, 2} (use BesovIndex::infinity for r = inf).
double besov_norm(const DyadicPartition& partition, const SpectralField& f, double s, int r);

/// ||u (x) u||_{B^{2 gamma - 1/2}_{2,1}} / ||u||^2_{H^{1/2 + gamma}}.
double product_law_ratio(const DyadicPartition& partition, const SpectralField& u, double gamma);

/// Solution-space norm pieces for one trajectory.
struct ZNormRecord {
  double sup_part = 0.0;         // sup_t ||u(t)||_{H^{1/2+gamma}}
  double dissipative_part = 0.0; // int_0^T ||u(t)||^2_{H^{3/2+gamma}} dt (trapezoidal)
  double total = 0.0;            // sqrt(sup_part^2 + dissipative_part)
};

/// Core of the Z-norm from per-sample norms: sup of `low` and trapezoidal
/// integral of `high`^2 over `times`.
ZNormRecord z_norm_from_samples(std::span<const double> times, std::span<const double> low,
                                std::span<const double> high);

/// Z-norm of the heat flow e^{t Laplacian} f sampled on the uniform grid
/// t_m = m T / M, evaluated from per-shell energies without forming fields.
ZNormRecord heat_flow_z_norm(const SpectralField& f, double gamma, double t_final, int steps);

}  // namespace sns
