#include "sns/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sns/spectral.hpp"

namespace sns {

namespace {

std::vector<double> sample_betas(const NoiseModel& model, const BrownianPath& path, const std::vector<double>& times) {
  if (path.channels() < model.size()) {
    throw std::invalid_argument("GammaOperator: path has fewer channels than the noise model");
  }
  std::vector<double> betas(model.size() * times.size());
  for (std::size_t c = 0; c < model.size(); ++c) {
    for (std::size_t m = 0; m < times.size(); ++m) betas[c * times.size() + m] = path.value_at(c, times[m]);
  }
  return betas;
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("GammaOperator: empty time list");
  for (std::size_t m = 0; m < times.size(); ++m) {
    if (!(times[m] >= 0.0) || !std::isfinite(times[m])) throw std::invalid_argument("GammaOperator: negative or non-finite time");
    if (m > 0 && times[m] < times[m - 1]) throw std::invalid_argument("GammaOperator: times must be nondecreasing");
  }
}

}  // namespace

GammaOperator::GammaOperator(GridPtr grid, NoiseModel model, const BrownianPath& path)
    : GammaOperator(std::move(grid), std::move(model), path, path.times()) {}

GammaOperator::GammaOperator(GridPtr grid, NoiseModel model, const BrownianPath& path, std::vector<double> times)
    : grid_(std::move(grid)), model_(std::move(model)), times_(std::move(times)) {
  check_times(times_);
  if (times_.back() > path.t_max() * (1.0 + 1e-12)) {
    throw std::out_of_range("GammaOperator: time list extends beyond the Brownian path");
  }
  betas_ = sample_betas(model_, path, times_);
  build();
}

GammaOperator::GammaOperator(GridPtr grid, NoiseModel model, std::vector<double> times, std::vector<double> betas)
    : grid_(std::move(grid)), model_(std::move(model)), times_(std::move(times)), betas_(std::move(betas)) {
  check_times(times_);
  build();
}

GammaOperator GammaOperator::identity(GridPtr grid, std::vector<double> times) {
  return GammaOperator(std::move(grid), NoiseModel{}, std::move(times), {});
}

std::size_t GammaOperator::class_of(int i, int j, int l) const {
  if (classes_ == 1) return 0;
  if (radial_) return static_cast<std::size_t>(grid_->shell(i, j, l));
  return grid_->index(i, j, l);
}

void GammaOperator::build() {
  const Grid& g = *grid_;
  const std::size_t nt = times_.size();
  const std::size_t nc = model_.size();
  radial_ = std::all_of(model_.channels.begin(), model_.channels.end(), [](const NoiseChannel& ch) { return ch.kernel.radial; });

  if (nc == 0) {
    classes_ = 1;
    exponents_.assign(nt, Complex{});
    log_sup_.assign(nt, 0.0);
    log_inf_.assign(nt, 0.0);
    return;
  }

  // b_i per frequency class, and the list of classes actually present on the grid.
  std::vector<Complex> b;  // [class][channel]
  std::vector<std::size_t> present;
  const int n = g.n();
  const int nz = g.nz();
  if (radial_) {
    classes_ = static_cast<std::size_t>(g.max_shell()) + 1;
    std::vector<char> seen(classes_, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < nz; ++l) seen[static_cast<std::size_t>(g.shell(i, j, l))] = 1;
    b.resize(classes_ * nc);
    for (std::size_t s = 0; s < classes_; ++s) {
      if (seen[s]) present.push_back(s);
      const double k = g.k0() * std::sqrt(static_cast<double>(s));
      for (std::size_t c = 0; c < nc; ++c) {
        b[s * nc + c] = model_.channels[c].kernel.radial_symbol(k) + model_.channels[c].lambda;
      }
    }
  } else {
    classes_ = g.spectral_size();
    b.resize(classes_ * nc);
    present.resize(classes_);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < nz; ++l) {
          const std::size_t idx = g.index(i, j, l);
          present[idx] = idx;
          for (std::size_t c = 0; c < nc; ++c) {
            b[idx * nc + c] =
                model_.channels[c].kernel(g.wavenumber(i), g.wavenumber(j), g.half_wavenumber(l)) + model_.channels[c].lambda;
          }
        }
      }
    }
  }

  // Dense radial refinement of |xi| in [0, k_max] for the operator-norm sup.
  std::vector<Complex> b_radial;
  if (radial_) {
    b_radial.resize(static_cast<std::size_t>(kRadialSamples) * nc);
    const double kmax = g.max_wavenumber();
    for (int r = 0; r < kRadialSamples; ++r) {
      const double k = kmax * r / (kRadialSamples - 1);
      for (std::size_t c = 0; c < nc; ++c) {
        b_radial[r * nc + c] = model_.channels[c].kernel.radial_symbol(k) + model_.channels[c].lambda;
      }
    }
  }

  auto exponent_of = [&](std::size_t m, const Complex* bk) {
    Complex x{};
    const double t = times_[m];
    for (std::size_t c = 0; c < nc; ++c) x += beta(c, m) * bk[c] - 0.5 * t * bk[c] * bk[c];
    return x;
  };

  exponents_.assign(nt * classes_, Complex{});
  log_sup_.assign(nt, -std::numeric_limits<double>::infinity());
  log_inf_.assign(nt, std::numeric_limits<double>::infinity());
  for (std::size_t m = 0; m < nt; ++m) {
    Complex* row = exponents_.data() + m * classes_;
    for (std::size_t s = 0; s < classes_; ++s) row[s] = exponent_of(m, b.data() + s * nc);
    double hi = log_sup_[m];
    double lo = log_inf_[m];
    for (std::size_t s : present) {
      hi = std::max(hi, row[s].real());
      lo = std::min(lo, row[s].real());
    }
    for (int r = 0; r < static_cast<int>(b_radial.size() / nc); ++r) {
      const double x = exponent_of(m, b_radial.data() + r * nc).real();
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
    log_sup_[m] = hi;
    log_inf_[m] = lo;
  }
}

Complex GammaOperator::symbol(std::size_t t_index, int i, int j, int l) const {
  return std::exp(exponent(t_index, i, j, l));
}

Complex GammaOperator::inverse_symbol(std::size_t t_index, int i, int j, int l) const {
  return std::exp(-exponent(t_index, i, j, l));
}

Complex GammaOperator::symbol_at(std::size_t t_index, double kx, double ky, double kz) const {
  Complex x{};
  const double t = times_.at(t_index);
  for (std::size_t c = 0; c < model_.size(); ++c) {
    const Complex bk = model_.channels[c].kernel(kx, ky, kz) + model_.channels[c].lambda;
    x += beta(c, t_index) * bk - 0.5 * t * bk * bk;
  }
  return std::exp(x);
}

namespace {

SpectralField apply_exponent(const GammaOperator& op, const SpectralField& f, std::size_t t_index, double sign) {
  require_compatible(f.grid(), op.grid(), "apply_gamma");
  if (t_index >= op.size()) throw std::out_of_range("apply_gamma: time index out of range");
  if (op.is_identity()) return f;
  return apply_multiplier(f, [&](int i, int j, int l) {
    return sign > 0 ? op.symbol(t_index, i, j, l) : op.inverse_symbol(t_index, i, j, l);
  });
}

}  // namespace

SpectralField GammaOperator::apply(const SpectralField& f, std::size_t t_index) const {
  return apply_exponent(*this, f, t_index, 1.0);
}

SpectralField GammaOperator::apply_inverse(const SpectralField& f, std::size_t t_index) const {
  return apply_exponent(*this, f, t_index, -1.0);
}

double GammaOperator::sup_multiplier(std::size_t t_index) const { return std::exp(log_sup_.at(t_index)); }
double GammaOperator::inf_multiplier(std::size_t t_index) const { return std::exp(log_inf_.at(t_index)); }

double GammaOperator::eta(std::size_t t_index) const {
  return std::exp(2.0 * log_sup_.at(t_index) - log_inf_.at(t_index));
}

double GammaOperator::eta_bound(std::size_t t_index) const {
  double log_bound = 0.0;
  const double t = times_.at(t_index);
  for (std::size_t c = 0; c < model_.size(); ++c) {
    const auto& ch = model_.channels[c];
    log_bound += 3.0 * std::abs(beta(c, t_index)) * (ch.kernel.l1_norm + std::abs(ch.lambda)) - t * ch.alpha;
  }
  return std::exp(log_bound);
}

GammaOperator::SupEta GammaOperator::sup_eta(double t_max) const {
  SupEta out;
  out.value = 0.0;
  std::size_t last = 0;
  for (std::size_t m = 0; m < times_.size(); ++m) {
    if (times_[m] > t_max * (1.0 + 1e-12)) break;
    out.value = std::max(out.value, eta(m));
    last = m;
  }
  if (out.value == 0.0) out.value = eta(0);
  if (model_.empty()) {
    out.tail_certified = true;
    return out;
  }
  // Per channel, sup over tau >= 0 of 3c(|beta_T| + 4 sqrt(tau)) - (T + tau) alpha
  // is attained at sqrt(tau) = 6c/alpha and equals 3c|beta_T| - T alpha + 36 c^2 / alpha.
  const double t_end = times_[last];
  double log_tail = 0.0;
  for (std::size_t c = 0; c < model_.size(); ++c) {
    const auto& ch = model_.channels[c];
    if (!(ch.alpha > 0.0)) return out;
    const double cc = ch.kernel.l1_norm + std::abs(ch.lambda);
    log_tail += 3.0 * cc * std::abs(beta(c, last)) - t_end * ch.alpha + 36.0 * cc * cc / ch.alpha;
  }
  out.tail_certified = log_tail < std::log(out.value);
  return out;
}

}  // namespace sns
