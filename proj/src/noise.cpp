#include "sns/noise.hpp"

#include <cmath>
#include <sstream>

namespace sns {

KernelSpec KernelSpec::gaussian(double amplitude, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("gaussian kernel: sigma must be positive and parameters finite");
  }
  KernelSpec k;
  k.type = "gaussian";
  k.amplitude = amplitude;
  k.sigma = sigma;
  k.l1_norm = std::abs(amplitude);
  k.radial = true;
  const double half_var = 0.5 * sigma * sigma;
  k.symbol = [amplitude, half_var](double kx, double ky, double kz) {
    return Complex(amplitude * std::exp(-half_var * (kx * kx + ky * ky + kz * kz)), 0.0);
  };
  return k;
}

KernelSpec KernelSpec::zero() {
  KernelSpec k;
  k.symbol = [](double, double, double) { return Complex{}; };
  return k;
}

std::string KernelSpec::label() const {
  std::ostringstream os;
  if (type == "gaussian") {
    os << "gaussian(A=" << amplitude << ", sigma=" << sigma << ")";
  } else {
    os << type;
  }
  return os.str();
}

double admissibility_threshold(double kernel_l1_norm) { return (std::sqrt(12.0) + 3.0) * kernel_l1_norm; }

double decay_rate(double lambda, double kernel_l1_norm) {
  const double h = kernel_l1_norm;
  return 0.5 * lambda * lambda - 1.5 * (h * h + 2.0 * std::abs(lambda) * h);
}

namespace {

std::string admissibility_message(std::size_t i, double lambda, double l1, double threshold) {
  std::ostringstream os;
  os << "noise channel " << i << ": |lambda| = " << std::abs(lambda)
     << " does not exceed the admissibility threshold (sqrt(12)+3)*||h||_L1 = " << threshold
     << " (||h||_L1 = " << l1 << ")";
  return os.str();
}

}  // namespace

std::vector<std::string> noise_violations(const std::vector<ChannelSpec>& channels) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& ch = channels[i];
    if (!std::isfinite(ch.lambda) || ch.lambda == 0.0) {
      out.push_back("noise channel " + std::to_string(i) + ": lambda must be a nonzero finite number");
      continue;
    }
    if (!ch.kernel.symbol) {
      out.push_back("noise channel " + std::to_string(i) + ": kernel has no symbol");
      continue;
    }
    const double threshold = admissibility_threshold(ch.kernel.l1_norm);
    if (!(std::abs(ch.lambda) > threshold)) out.push_back(admissibility_message(i, ch.lambda, ch.kernel.l1_norm, threshold));
  }
  return out;
}

NoiseModel validate_noise(const std::vector<ChannelSpec>& channels) {
  NoiseModel model;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& ch = channels[i];
    if (!std::isfinite(ch.lambda) || ch.lambda == 0.0) {
      throw std::invalid_argument("noise channel " + std::to_string(i) + ": lambda must be a nonzero finite number");
    }
    if (!ch.kernel.symbol) throw std::invalid_argument("noise channel " + std::to_string(i) + ": kernel has no symbol");
    const double threshold = admissibility_threshold(ch.kernel.l1_norm);
    if (!(std::abs(ch.lambda) > threshold)) {
      throw AdmissibilityViolation(i, ch.lambda, threshold, admissibility_message(i, ch.lambda, ch.kernel.l1_norm, threshold));
    }
    model.channels.push_back({ch.lambda, ch.kernel, decay_rate(ch.lambda, ch.kernel.l1_norm)});
  }
  return model;
}

}  // namespace sns
