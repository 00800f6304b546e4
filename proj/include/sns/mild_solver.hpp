#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sns/brownian.hpp"
#include "sns/fixed_point.hpp"
#include "sns/gamma.hpp"
#include "sns/littlewood_paley.hpp"

namespace sns {

/// t_m = m T / M for m = 0..M.
std::vector<double> uniform_times(double t_final, int steps);

/// Fields sampled on 0 = t_0 < ... < t_M = T with cached H^{1/2+gamma} and
/// H^{3/2+gamma} norms of every sample.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<double> times, std::vector<SpectralField> fields, double gamma);

  /// All samples zero on the grid of `like`.
  static Trajectory zeros_like(const Trajectory& like);

  std::size_t size() const { return fields_.size(); }
  bool empty() const { return fields_.empty(); }
  double gamma() const { return gamma_; }
  const std::vector<double>& times() const { return times_; }
  double time(std::size_t m) const { return times_[m]; }
  double final_time() const { return times_.back(); }
  const SpectralField& field(std::size_t m) const { return fields_[m]; }
  const std::vector<SpectralField>& fields() const { return fields_; }
  const GridPtr& grid_ptr() const { return fields_.front().grid_ptr(); }

  const std::vector<double>& low_norms() const { return low_; }
  const std::vector<double>& high_norms() const { return high_; }

  friend Trajectory operator+(const Trajectory& a, const Trajectory& b);
  friend Trajectory operator-(const Trajectory& a, const Trajectory& b);

 private:
  void cache_norms();

  std::vector<double> times_;
  std::vector<SpectralField> fields_;
  double gamma_ = 0.5;
  std::vector<double> low_;
  std::vector<double> high_;
};

/// (e^{t_m Laplacian} u0)_m.
Trajectory heat_trajectory(const SpectralField& u0, const std::vector<double>& times, double gamma);

ZNormRecord z_norm(const Trajectory& traj);

/// B(y, z)(t_m) = -int_0^{t_m} e^{(t_m - s) Laplacian} Gamma^{-1}(s) Q(Gamma(s) y(s), Gamma(s) z(s)) ds,
/// trapezoidal in s over the trajectory samples; `op` must share the time grid.
SpectralField duhamel_bilinear(const Trajectory& y, const Trajectory& z, const GammaOperator& op, std::size_t t_index);
/// B(y, z) at every sample via the one-step trapezoidal recursion (uniform grids only).
Trajectory duhamel_trajectory(const Trajectory& y, const Trajectory& z, const GammaOperator& op);

struct PicardOptions {
  double gamma = 0.5;
  double tol = 1e-9;
  int max_iter = 50;
  /// Calibrated contraction constant; 0 disables the precondition.
  double c_hat = 0.0;
  /// sup eta entering the bound; negative means "sup over the operator's samples".
  double sup_eta = -1.0;
  /// First iterate; the heat trajectory when unset. Must share the operator's time grid.
  std::optional<Trajectory> start;
};

struct SolveReport {
  Trajectory trajectory;
  int iterations = 0;
  std::vector<double> residual_history;
  double bilinear_bound_used = 0.0;
  double heat_z_norm = 0.0;
  /// max_m ||y(t_m) - e^{t_m Laplacian} u0 - B(y, y)(t_m)||_{H^{1/2+gamma}}.
  double mild_residual = 0.0;
  bool converged = false;
};

/// Mild solution y = e^{t Laplacian} u0 + B(y, y) on the time grid of `op`.
/// Throws PreconditionViolation or NonConvergence when T is past the certified horizon.
SolveReport picard_solve(const SpectralField& u0, const GammaOperator& op, const PicardOptions& options);

struct ContractionOptions {
  double gamma = 0.5;
  int ensemble_size = 16;
  std::uint64_t seed = 0;
};

/// C_hat = max over seeded heat-flow trajectories y of
/// z(B(y, y)) / (T^{gamma/2} sup_eta z(y)^2); `op` fixes T and the time grid.
double contraction_constant(const GammaOperator& op, const ContractionOptions& options);

enum class LifespanVariant { nominal, derived };

/// nominal: c (sup_eta)^{-1} |u0|^{-2/gamma};  derived: c (sup_eta)^{-2/gamma} |u0|^{-2/gamma}.
double lifespan_lower_bound(double u0_norm, double sup_eta, double gamma, double c_gamma, LifespanVariant variant);

/// c'_gamma = (4 sqrt(3/2) C_hat)^{-2/gamma}.
double derived_c_gamma(double c_hat, double gamma);

struct LifespanOptions {
  double gamma = 0.5;
  double t_probe_max = 0.1;
  /// Dyadic probes T_probe_max * 2^{-j}, j = 0..levels-1 at least; deeper
  /// probes follow until one lies at or below t_star_derived.
  int levels = 8;
  /// Bisection steps between the largest passing and smallest failing probe.
  int refine = 8;
  int steps = 16;
  double tol = 1e-9;
  int max_iter = 50;
  double c_hat = 1.0;
  /// c_gamma reported for the nominal variant; defaults to c'_gamma when <= 0.
  double c_gamma = 0.0;
};

struct LifespanReport {
  double gamma = 0.5;
  double u0_norm = 0.0;
  double sup_eta = 1.0;
  bool tail_certified = false;
  double c_gamma_used = 0.0;
  double t_star_nominal = 0.0;
  double t_star_derived = 0.0;
  double t_empirical = 0.0;
  int probes = 0;
  int picard_iterations = 0;  // iterations of the accepted solve
};

/// Largest probed T whose Picard solve is certified: the precondition with the
/// probe's heat-trajectory Z-norm and the path-wide sup eta holds, and the
/// iteration converges. The path must cover [0, t_probe_max]; sup eta is taken
/// over the whole path grid and raised by any larger probe sample.
LifespanReport empirical_lifespan(const SpectralField& u0, const NoiseModel& model, const BrownianPath& path,
                                  const LifespanOptions& options);

}  // namespace sns
