#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sns {

/// Independent standard Brownian motions beta_i sampled on the uniform grid
/// t_m = m * T_max / M, m = 0..M.
///
/// Increments are N(0, dt) variates addressed by (seed, channel, step), so a
/// path is a pure function of its parameters. Off-grid times are resolved by
/// Brownian-bridge bisection inside the enclosing cell with midpoint variates
/// addressed by (seed, channel, cell, level, node); dyadic points of a cell are
/// therefore exact samples of the same path, consistent across queries.
class BrownianPath {
 public:
  BrownianPath() = default;

  static BrownianPath sample(std::size_t channels, double t_max, int steps, std::uint64_t seed);

  std::size_t channels() const { return channels_; }
  int steps() const { return steps_; }
  double t_max() const { return t_max_; }
  double dt() const { return dt_; }
  std::uint64_t seed() const { return seed_; }

  double time(int m) const { return m * dt_; }
  std::vector<double> times() const;
  double value(std::size_t channel, int m) const { return values_[channel * (steps_ + 1) + m]; }
  std::span<const double> channel_values(std::size_t channel) const {
    return {values_.data() + channel * (steps_ + 1), static_cast<std::size_t>(steps_) + 1};
  }

  /// beta_channel(t) for any t in [0, T_max].
  double value_at(std::size_t channel, double t) const;

  /// CSV: "# seed=<seed> channels=<n> t_max=<T> steps=<M>" then "t,beta_1,...".
  void write_csv(std::ostream& os) const;
  static BrownianPath read_csv(std::istream& is);

 private:
  std::size_t channels_ = 0;
  int steps_ = 0;
  double t_max_ = 0.0;
  double dt_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> values_;
};

}  // namespace sns
