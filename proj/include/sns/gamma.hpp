#pragma once

#include <utility>
#include <vector>

#include "sns/brownian.hpp"
#include "sns/field.hpp"
#include "sns/noise.hpp"

namespace sns {

/// Gamma(t) = prod_i exp(beta_i(t) Bt_i - (t/2) Bt_i^2) with Bt_i = h_i * . + lambda_i,
/// sampled on a fixed list of times. Every factor is diagonal in Fourier space:
/// mode k is multiplied by m(t, k) = exp(x(t, k)) with
/// x(t, k) = sum_i beta_i(t) b_i(k) - (t/2) b_i(k)^2,  b_i(k) = hhat_i(k) + lambda_i.
///
/// The exponent is cached per frequency class (integer shell for radial kernels,
/// individual mode otherwise), so the operator is immutable after construction.
class GammaOperator {
 public:
  /// Operator at the path's own sample times.
  GammaOperator(GridPtr grid, NoiseModel model, const BrownianPath& path);
  /// Operator at arbitrary times in [0, path.t_max()], resolved with path.value_at.
  GammaOperator(GridPtr grid, NoiseModel model, const BrownianPath& path, std::vector<double> times);
  /// Gamma = I on the given times (zero-noise model).
  static GammaOperator identity(GridPtr grid, std::vector<double> times);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const NoiseModel& model() const { return model_; }
  std::size_t size() const { return times_.size(); }
  double time(std::size_t t_index) const { return times_.at(t_index); }
  const std::vector<double>& times() const { return times_; }
  double beta(std::size_t channel, std::size_t t_index) const { return betas_[channel * times_.size() + t_index]; }
  bool is_identity() const { return model_.empty(); }

  /// m(t, k) at lattice mode (i, j, l) and its reciprocal.
  Complex symbol(std::size_t t_index, int i, int j, int l) const;
  Complex inverse_symbol(std::size_t t_index, int i, int j, int l) const;
  /// m(t, k) at an arbitrary wavevector, straight from the kernel symbols.
  Complex symbol_at(std::size_t t_index, double kx, double ky, double kz) const;

  SpectralField apply(const SpectralField& f, std::size_t t_index) const;
  SpectralField apply_inverse(const SpectralField& f, std::size_t t_index) const;

  /// sup_k |m(t, k)| and inf_k |m(t, k)| over grid modes plus, for radial
  /// kernels, 10^4 radial samples of |xi| in [0, k_max].
  double sup_multiplier(std::size_t t_index) const;
  double inf_multiplier(std::size_t t_index) const;
  /// eta(t) = (sup |m|)^2 * sup |m^{-1}|.
  double eta(std::size_t t_index) const;
  /// prod_i exp(3 |beta_i(t)| (||h_i|| + |lambda_i|) - t alpha_i).
  double eta_bound(std::size_t t_index) const;

  struct SupEta {
    double value = 1.0;
    /// The exponential bound stays below `value` for every t > T_max even if
    /// each |beta_i| grows by four standard deviations.
    bool tail_certified = false;
  };
  /// max of eta over samples with t <= t_max.
  SupEta sup_eta(double t_max) const;

  static constexpr int kRadialSamples = 10000;

 private:
  GammaOperator(GridPtr grid, NoiseModel model, std::vector<double> times, std::vector<double> betas);
  void build();
  std::size_t class_of(int i, int j, int l) const;
  Complex exponent(std::size_t t_index, int i, int j, int l) const {
    return exponents_[t_index * classes_ + class_of(i, j, l)];
  }

  GridPtr grid_;
  NoiseModel model_;
  std::vector<double> times_;
  std::vector<double> betas_;  // channel-major
  bool radial_ = true;
  std::size_t classes_ = 1;
  std::vector<Complex> exponents_;  // [t_index][class]
  std::vector<double> log_sup_;     // max_k Re x(t, k)
  std::vector<double> log_inf_;     // min_k Re x(t, k)
};

}  // namespace sns
