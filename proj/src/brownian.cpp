#include "sns/brownian.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sns/random.hpp"

namespace sns {

namespace {

constexpr std::uint64_t kIncrementTag = 0x1c0ffee1ULL;
constexpr std::uint64_t kBridgeTag = 0xb41d6e5ULL;
constexpr int kMaxBridgeDepth = 48;
constexpr double kDyadicTolerance = 1e-12;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BrownianPath BrownianPath::sample(std::size_t channels, double t_max, int steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("sample_brownian: need at least one step");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("sample_brownian: T_max must be positive");
  BrownianPath p;
  p.channels_ = channels;
  p.steps_ = steps;
  p.t_max_ = t_max;
  p.dt_ = t_max / steps;
  p.seed_ = seed;
  p.values_.assign(channels * (static_cast<std::size_t>(steps) + 1), 0.0);
  const double scale = std::sqrt(p.dt_);
  for (std::size_t c = 0; c < channels; ++c) {
    double* v = p.values_.data() + c * (steps + 1);
    v[0] = 0.0;
    for (int m = 0; m < steps; ++m) {
      v[m + 1] = v[m] + scale * counter_normal(hash_key(seed, kIncrementTag, c, static_cast<std::uint64_t>(m)));
    }
  }
  return p;
}

std::vector<double> BrownianPath::times() const {
  std::vector<double> t(static_cast<std::size_t>(steps_) + 1);
  for (int m = 0; m <= steps_; ++m) t[m] = time(m);
  return t;
}

double BrownianPath::value_at(std::size_t channel, double t) const {
  if (channel >= channels_) throw std::out_of_range("BrownianPath::value_at: channel out of range");
  const double pos = t / dt_;
  if (!(pos >= -kDyadicTolerance) || pos > steps_ + kDyadicTolerance) {
    throw std::out_of_range("BrownianPath::value_at: time outside [0, T_max]");
  }
  const int cell = std::min(static_cast<int>(std::floor(std::max(pos, 0.0))), steps_ - 1);
  const double frac = pos - cell;
  if (frac <= kDyadicTolerance) return value(channel, cell);
  if (frac >= 1.0 - kDyadicTolerance) return value(channel, cell + 1);

  double a = 0.0;
  double b = 1.0;
  double va = value(channel, cell);
  double vb = value(channel, cell + 1);
  std::uint64_t node = 1;  // position numerator of the midpoint at the current level
  for (int level = 1; level <= kMaxBridgeDepth; ++level) {
    const double mid = 0.5 * (a + b);
    const double width = (b - a) * dt_;
    const double z = counter_normal(hash_key(seed_, kBridgeTag, hash_key(channel, static_cast<std::uint64_t>(cell)),
                                             hash_key(static_cast<std::uint64_t>(level), node)));
    const double vm = 0.5 * (va + vb) + std::sqrt(0.25 * width) * z;
    if (std::abs(frac - mid) <= kDyadicTolerance) return vm;
    if (frac < mid) {
      b = mid;
      vb = vm;
      node = 2 * node - 1;
    } else {
      a = mid;
      va = vm;
      node = 2 * node + 1;
    }
  }
  // Below the bisection depth the path is linearly interpolated.
  return va + (vb - va) * (frac - a) / (b - a);
}

void BrownianPath::write_csv(std::ostream& os) const {
  os << "# seed=" << seed_ << " channels=" << channels_ << " t_max=" << format_double(t_max_) << " steps=" << steps_
     << "\n";
  os << "t";
  for (std::size_t c = 0; c < channels_; ++c) os << ",beta_" << (c + 1);
  os << "\n";
  for (int m = 0; m <= steps_; ++m) {
    os << format_double(time(m));
    for (std::size_t c = 0; c < channels_; ++c) os << "," << format_double(value(c, m));
    os << "\n";
  }
}

BrownianPath BrownianPath::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw std::runtime_error("path csv: missing header comment");
  BrownianPath p;
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "seed") p.seed_ = std::stoull(val);
      else if (key == "channels") p.channels_ = std::stoull(val);
      else if (key == "t_max") p.t_max_ = std::stod(val);
      else if (key == "steps") p.steps_ = std::stoi(val);
    }
  }
  if (p.steps_ < 1 || !(p.t_max_ > 0.0)) throw std::runtime_error("path csv: invalid header");
  p.dt_ = p.t_max_ / p.steps_;
  if (!std::getline(is, line)) throw std::runtime_error("path csv: missing column header");
  p.values_.assign(p.channels_ * (static_cast<std::size_t>(p.steps_) + 1), 0.0);
  for (int m = 0; m <= p.steps_; ++m) {
    if (!std::getline(is, line)) throw std::runtime_error("path csv: truncated at row " + std::to_string(m));
    std::istringstream rs(line);
    std::string cell;
    std::getline(rs, cell, ',');  // time column is implied by the header
    for (std::size_t c = 0; c < p.channels_; ++c) {
      if (!std::getline(rs, cell, ',')) throw std::runtime_error("path csv: short row " + std::to_string(m));
      p.values_[c * (p.steps_ + 1) + m] = std::stod(cell);
    }
  }
  return p;
}

}  // namespace sns
