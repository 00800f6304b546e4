#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sns/grid.hpp"

namespace sns {

/// Convolution kernel h described by its Fourier symbol and L1 norm.
struct KernelSpec {
  std::string type = "zero";  // "gaussian" or "zero"
  double amplitude = 0.0;
  double sigma = 0.0;
  double l1_norm = 0.0;
  /// Symbol depends only on |xi|; such kernels are also even and real.
  bool radial = true;
  std::function<Complex(double, double, double)> symbol;

  /// h(x) = A (2 pi sigma^2)^{-3/2} exp(-|x|^2 / (2 sigma^2)); symbol A exp(-sigma^2 |xi|^2 / 2).
  static KernelSpec gaussian(double amplitude, double sigma);
  static KernelSpec zero();

  Complex operator()(double kx, double ky, double kz) const { return symbol(kx, ky, kz); }
  Complex radial_symbol(double k) const { return symbol(k, 0.0, 0.0); }
  std::string label() const;
};

struct ChannelSpec {
  double lambda = 0.0;
  KernelSpec kernel = KernelSpec::zero();
};

/// One admissible noise channel: intensity, kernel and decay rate
/// alpha = lambda^2/2 - 3/2 (||h||^2 + 2 |lambda| ||h||).
struct NoiseChannel {
  double lambda = 0.0;
  KernelSpec kernel;
  double alpha = 0.0;
};

struct NoiseModel {
  std::vector<NoiseChannel> channels;

  bool empty() const { return channels.empty(); }
  std::size_t size() const { return channels.size(); }
};

/// |lambda| must exceed (sqrt(12) + 3) ||h||_{L1}.
double admissibility_threshold(double kernel_l1_norm);
double decay_rate(double lambda, double kernel_l1_norm);

class AdmissibilityViolation : public std::invalid_argument {
 public:
  AdmissibilityViolation(std::size_t channel, double lambda, double threshold, const std::string& message)
      : std::invalid_argument(message), channel_(channel), lambda_(lambda), threshold_(threshold) {}
  std::size_t channel() const { return channel_; }
  double lambda() const { return lambda_; }
  double threshold() const { return threshold_; }

 private:
  std::size_t channel_;
  double lambda_;
  double threshold_;
};

/// Every violated constraint over all channels, as human-readable messages.
std::vector<std::string> noise_violations(const std::vector<ChannelSpec>& channels);

/// Builds the model with its alphas. Throws AdmissibilityViolation for the first
/// offending channel, std::invalid_argument for lambda = 0 or a bad kernel.
NoiseModel validate_noise(const std::vector<ChannelSpec>& channels);

}  // namespace sns
