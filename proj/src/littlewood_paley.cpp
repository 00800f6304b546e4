#include "sns/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sns/spectral.hpp"

namespace sns {

namespace {

double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Energy per integer shell |k|^2 (L-independent units), summed over components
// with conjugate-mirror weights.
std::vector<double> shell_energy(const SpectralField& f) {
  const Grid& g = f.grid();
  std::vector<double> energy(static_cast<std::size_t>(g.max_shell()) + 1, 0.0);
  const int n = g.n();
  const int nz = g.nz();
  for (int c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < nz; ++l) {
          energy[static_cast<std::size_t>(g.shell(i, j, l))] += g.mode_weight(l) * std::norm(comp[g.index(i, j, l)]);
        }
      }
    }
  }
  return energy;
}

// Squared L2 norms of every band j_min..j_max.
std::vector<double> band_energies(const DyadicPartition& partition, const SpectralField& f) {
  const auto energy = shell_energy(f);
  const double k0 = f.grid().k0();
  std::vector<double> bands(static_cast<std::size_t>(partition.j_max() - partition.j_min() + 1), 0.0);
  for (std::size_t s = 1; s < energy.size(); ++s) {
    if (energy[s] == 0.0) continue;
    const double k = k0 * std::sqrt(static_cast<double>(s));
    for (int j = partition.j_min(); j <= partition.j_max(); ++j) {
      const double p = partition.block_symbol(j, k);
      if (p != 0.0) bands[static_cast<std::size_t>(j - partition.j_min())] += p * p * energy[s];
    }
  }
  return bands;
}

}  // namespace

double DyadicPartition::chi(double tau) {
  constexpr double lo = 3.0 / 4.0;
  constexpr double hi = 4.0 / 3.0;
  if (tau <= lo) return 1.0;
  if (tau >= hi) return 0.0;
  const double a = glue(hi - tau);
  const double b = glue(tau - lo);
  return a / (a + b);
}

double DyadicPartition::phi(double tau) { return chi(0.5 * tau) - chi(tau); }

DyadicPartition::DyadicPartition(const Grid& grid) {
  // Band j touches |k| iff 3/4 <= 2^-j |k| <= 8/3.
  const double kmin = grid.min_wavenumber();
  const double kmax = grid.max_wavenumber();
  j_min_ = static_cast<int>(std::floor(std::log2(kmin * 3.0 / 8.0)));
  j_max_ = static_cast<int>(std::ceil(std::log2(kmax * 4.0 / 3.0)));
}

double DyadicPartition::block_symbol(int band, double k_magnitude) const {
  return phi(std::ldexp(k_magnitude, -band));
}

SpectralField dyadic_block(const DyadicPartition& partition, const SpectralField& f, int band) {
  const Grid& g = f.grid();
  std::vector<double> table(static_cast<std::size_t>(g.max_shell()) + 1);
  for (std::size_t s = 0; s < table.size(); ++s) {
    table[s] = s == 0 ? 0.0 : partition.block_symbol(band, g.k0() * std::sqrt(static_cast<double>(s)));
  }
  return apply_multiplier(f, [&](int i, int j, int l) { return table[static_cast<std::size_t>(g.shell(i, j, l))]; });
}

double sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
  if (homogeneous && mean_magnitude(f) != 0.0) {
    throw std::domain_error("sobolev_norm: homogeneous norm of a field with nonzero mean");
  }
  const auto energy = shell_energy(f);
  const double k0sq = f.grid().k0() * f.grid().k0();
  double sum = 0.0;
  for (std::size_t sh = 0; sh < energy.size(); ++sh) {
    if (energy[sh] == 0.0) continue;
    const double k2 = k0sq * static_cast<double>(sh);
    const double w = homogeneous ? std::pow(k2, s) : std::pow(1.0 + k2, s);
    sum += w * energy[sh];
  }
  return std::sqrt(sum);
}

double besov_norm(const DyadicPartition& partition, const SpectralField& f, double s, BesovIndex r) {
  const auto bands = band_energies(partition, f);
  double acc = 0.0;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const int j = partition.j_min() + static_cast<int>(b);
    const double term = std::exp2(j * s) * std::sqrt(bands[b]);
    switch (r) {
      case BesovIndex::one: acc += term; break;
      case BesovIndex::two: acc += term * term; break;
      case BesovIndex::infinity: acc = std::max(acc, term); break;
    }
  }
  return r == BesovIndex::two ? std::sqrt(acc) : acc;
}

double besov_norm(const DyadicPartition& partition, const SpectralField& f, double s, int r) {
  switch (r) {
    case 1: return besov_norm(partition, f, s, BesovIndex::one);
    case 2: return besov_norm(partition, f, s, BesovIndex::two);
    default: throw std::invalid_argument("besov_norm: unsupported summability index r = " + std::to_string(r));
  }
}

double product_law_ratio(const DyadicPartition& partition, const SpectralField& u, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("product_law_ratio: gamma must lie in (0, 1)");
  const double denom = sobolev_norm(u, 0.5 + gamma);
  if (denom == 0.0) throw std::invalid_argument("product_law_ratio: zero input field");
  const double num = besov_norm(partition, tensor_product(u, u), 2.0 * gamma - 0.5, BesovIndex::one);
  return num / (denom * denom);
}

ZNormRecord z_norm_from_samples(std::span<const double> times, std::span<const double> low,
                                std::span<const double> high) {
  if (times.empty() || low.size() != times.size() || high.size() != times.size()) {
    throw std::invalid_argument("z_norm: empty or inconsistent trajectory samples");
  }
  ZNormRecord rec;
  for (double v : low) rec.sup_part = std::max(rec.sup_part, v);
  for (std::size_t m = 1; m < times.size(); ++m) {
    const double dt = times[m] - times[m - 1];
    rec.dissipative_part += 0.5 * dt * (high[m - 1] * high[m - 1] + high[m] * high[m]);
  }
  rec.total = std::sqrt(rec.sup_part * rec.sup_part + rec.dissipative_part);
  return rec;
}

ZNormRecord heat_flow_z_norm(const SpectralField& f, double gamma, double t_final, int steps) {
  if (steps < 1 || !(t_final > 0.0)) throw std::invalid_argument("heat_flow_z_norm: need T > 0 and at least one step");
  if (mean_magnitude(f) != 0.0) throw std::domain_error("heat_flow_z_norm: field must have zero mean");
  const auto energy = shell_energy(f);
  const double k0sq = f.grid().k0() * f.grid().k0();
  std::vector<double> k2;
  std::vector<double> e;
  for (std::size_t s = 1; s < energy.size(); ++s) {
    if (energy[s] == 0.0) continue;
    k2.push_back(k0sq * static_cast<double>(s));
    e.push_back(energy[s]);
  }
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  std::vector<double> low(times.size());
  std::vector<double> high(times.size());
  for (int m = 0; m <= steps; ++m) {
    const double t = t_final * m / steps;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < k2.size(); ++i) {
      const double w = std::pow(k2[i], 0.5 + gamma) * std::exp(-2.0 * t * k2[i]) * e[i];
      lo += w;
      hi += w * k2[i];
    }
    times[m] = t;
    low[m] = std::sqrt(lo);
    high[m] = std::sqrt(hi);
  }
  return z_norm_from_samples(times, low, high);
}

}  // namespace sns
