#include "sns/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sns/initial_data.hpp"
#include "sns/random.hpp"
#include "sns/spectral.hpp"

namespace sns {

namespace {

void require_gamma(double gamma, const char* where) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument(std::string(where) + ": gamma must lie in (0, 1)");
}

bool same_times(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  const double scale = std::max(std::abs(a.back()), 1.0);
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (std::abs(a[m] - b[m]) > 1e-12 * scale) return false;
  }
  return true;
}

void require_shared_grid(const Trajectory& y, const Trajectory& z, const GammaOperator& op, const char* where) {
  if (y.empty() || z.empty()) throw std::invalid_argument(std::string(where) + ": empty trajectory");
  if (!same_times(y.times(), z.times()) || !same_times(y.times(), op.times())) {
    throw GridMismatch(std::string(where) + ": trajectories and operator must share the time grid");
  }
  require_compatible(y.field(0).grid(), z.field(0).grid(), where);
  require_compatible(y.field(0).grid(), op.grid(), where);
}

// Gamma^{-1}(s_m) Q(Gamma(s_m) y_m, Gamma(s_m) z_m).
SpectralField integrand(const Trajectory& y, const Trajectory& z, const GammaOperator& op, std::size_t m) {
  const SpectralField gy = op.apply(y.field(m), m);
  if (&y == &z) return op.apply_inverse(q_bilinear(gy, gy), m);
  return op.apply_inverse(q_bilinear(gy, op.apply(z.field(m), m)), m);
}

}  // namespace

std::vector<double> uniform_times(double t_final, int steps) {
  if (steps < 1) throw std::invalid_argument("uniform_times: need at least one step");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("uniform_times: final time must be positive");
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int m = 0; m <= steps; ++m) t[m] = t_final * m / steps;
  return t;
}

Trajectory::Trajectory(std::vector<double> times, std::vector<SpectralField> fields, double gamma)
    : times_(std::move(times)), fields_(std::move(fields)), gamma_(gamma) {
  require_gamma(gamma_, "Trajectory");
  if (fields_.empty() || fields_.size() != times_.size()) {
    throw std::invalid_argument("Trajectory: need one field per time sample");
  }
  if (times_.front() != 0.0) throw std::invalid_argument("Trajectory: time grid must start at 0");
  for (std::size_t m = 1; m < times_.size(); ++m) {
    if (!(times_[m] > times_[m - 1])) throw std::invalid_argument("Trajectory: times must increase strictly");
    require_compatible(fields_[m].grid(), fields_[0].grid(), "Trajectory");
  }
  cache_norms();
}

Trajectory Trajectory::zeros_like(const Trajectory& like) {
  std::vector<SpectralField> fields;
  fields.reserve(like.size());
  for (const auto& f : like.fields_) fields.push_back(SpectralField::zeros_like(f));
  return {like.times_, std::move(fields), like.gamma_};
}

void Trajectory::cache_norms() {
  low_.resize(fields_.size());
  high_.resize(fields_.size());
  for (std::size_t m = 0; m < fields_.size(); ++m) {
    low_[m] = sobolev_norm(fields_[m], 0.5 + gamma_);
    high_[m] = sobolev_norm(fields_[m], 1.5 + gamma_);
  }
}

namespace {

Trajectory combine(const Trajectory& a, const Trajectory& b, double sign) {
  if (a.size() != b.size() || !same_times(a.times(), b.times())) {
    throw GridMismatch("Trajectory arithmetic: time grids differ");
  }
  std::vector<SpectralField> out;
  out.reserve(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    SpectralField f = a.field(m);
    f.add_scaled(sign, b.field(m));
    out.push_back(std::move(f));
  }
  return {a.times(), std::move(out), a.gamma()};
}

}  // namespace

Trajectory operator+(const Trajectory& a, const Trajectory& b) { return combine(a, b, 1.0); }
Trajectory operator-(const Trajectory& a, const Trajectory& b) { return combine(a, b, -1.0); }

Trajectory heat_trajectory(const SpectralField& u0, const std::vector<double>& times, double gamma) {
  std::vector<SpectralField> fields;
  fields.reserve(times.size());
  for (double t : times) fields.push_back(heat_semigroup(u0, t));
  return {times, std::move(fields), gamma};
}

ZNormRecord z_norm(const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("z_norm: empty trajectory");
  return z_norm_from_samples(traj.times(), traj.low_norms(), traj.high_norms());
}

SpectralField duhamel_bilinear(const Trajectory& y, const Trajectory& z, const GammaOperator& op, std::size_t t_index) {
  require_shared_grid(y, z, op, "duhamel_bilinear");
  if (t_index >= y.size()) throw std::out_of_range("duhamel_bilinear: time index out of range");
  SpectralField acc = SpectralField::zeros_like(y.field(0));
  const double t = y.time(t_index);
  for (std::size_t m = 0; m <= t_index && t_index > 0; ++m) {
    double w = 0.0;
    if (m > 0) w += 0.5 * (y.time(m) - y.time(m - 1));
    if (m < t_index) w += 0.5 * (y.time(m + 1) - y.time(m));
    acc.add_scaled(-w, heat_semigroup(integrand(y, z, op, m), t - y.time(m)));
  }
  return acc;
}

Trajectory duhamel_trajectory(const Trajectory& y, const Trajectory& z, const GammaOperator& op) {
  require_shared_grid(y, z, op, "duhamel_trajectory");
  const std::size_t count = y.size();
  const double dt = count > 1 ? y.time(1) : 0.0;
  for (std::size_t m = 1; m < count; ++m) {
    if (std::abs((y.time(m) - y.time(m - 1)) - dt) > 1e-10 * dt) {
      throw std::invalid_argument("duhamel_trajectory: time grid must be uniform");
    }
  }
  // I_{m+1} = e^{dt Laplacian} (I_m + dt/2 G_m) + dt/2 G_{m+1}, I_0 = 0; B = -I.
  std::vector<SpectralField> out;
  out.reserve(count);
  out.push_back(SpectralField::zeros_like(y.field(0)));
  if (count > 1) {
    SpectralField g = integrand(y, z, op, 0);
    SpectralField acc = SpectralField::zeros_like(g);
    for (std::size_t m = 0; m + 1 < count; ++m) {
      acc.add_scaled(0.5 * dt, g);
      acc = heat_semigroup(acc, dt);
      g = integrand(y, z, op, m + 1);
      acc.add_scaled(0.5 * dt, g);
      out.push_back(-1.0 * acc);
    }
  }
  return {y.times(), std::move(out), y.gamma()};
}

SolveReport picard_solve(const SpectralField& u0, const GammaOperator& op, const PicardOptions& options) {
  require_gamma(options.gamma, "picard_solve");
  require_compatible(u0.grid(), op.grid(), "picard_solve");
  if (u0.components() != 3) throw std::invalid_argument("picard_solve: initial datum must be a vector field");
  if (mean_magnitude(u0) != 0.0) throw std::domain_error("picard_solve: initial datum must have zero mean");
  if (divergence_defect(u0) > 1e-10) throw std::invalid_argument("picard_solve: initial datum must be divergence-free");
  if (op.size() < 2) throw std::invalid_argument("picard_solve: need at least two time samples");

  const double t_final = op.times().back();
  const double sup_eta = options.sup_eta < 0.0 ? op.sup_eta(t_final).value : options.sup_eta;
  const double bound = options.c_hat * std::pow(t_final, 0.5 * options.gamma) * sup_eta;

  const Trajectory a = heat_trajectory(u0, op.times(), options.gamma);
  auto bilinear = [&op](const Trajectory& x, const Trajectory& y) { return duhamel_trajectory(x, y, op); };
  auto norm = [](const Trajectory& x) { return z_norm(x).total; };
  if (options.start && options.start->times() != a.times()) {
    throw std::invalid_argument("picard_solve: start trajectory is on a different time grid");
  }
  const Trajectory& start = options.start ? *options.start : a;

  auto result = fixed_point_solve(a, start, bilinear, norm, bound, options.tol, options.max_iter);

  SolveReport report;
  report.iterations = result.iterations;
  report.residual_history = std::move(result.residual_history);
  report.bilinear_bound_used = bound;
  report.heat_z_norm = result.a_norm;
  report.converged = result.converged;
  report.trajectory = std::move(result.solution);
  const Trajectory defect = report.trajectory - a - bilinear(report.trajectory, report.trajectory);
  report.mild_residual = *std::max_element(defect.low_norms().begin(), defect.low_norms().end());
  return report;
}

double contraction_constant(const GammaOperator& op, const ContractionOptions& options) {
  require_gamma(options.gamma, "contraction_constant");
  if (options.ensemble_size < 1) throw std::invalid_argument("contraction_constant: ensemble must be nonempty");
  if (op.size() < 2) throw std::invalid_argument("contraction_constant: need at least two time samples");
  const double t_final = op.times().back();
  const double sup_eta = op.sup_eta(t_final).value;
  const double k_top = 0.5 * op.grid().dealias_cutoff();
  double best = 0.0;
  bool any = false;
  for (int e = 0; e < options.ensemble_size; ++e) {
    const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(e));
    const double band_lo = std::exp(std::log(k_top) * uniform_open(hash_key(seed, 0xba4dULL)));
    const SpectralField w = random_solenoidal(op.grid_ptr(), seed, band_lo, 2.0 * band_lo);
    const Trajectory y = heat_trajectory(w, op.times(), options.gamma);
    const double zy = z_norm(y).total;
    if (zy == 0.0) continue;
    const double zf = z_norm(duhamel_trajectory(y, y, op)).total;
    if (zf == 0.0) continue;
    any = true;
    best = std::max(best, zf / (std::pow(t_final, 0.5 * options.gamma) * sup_eta * zy * zy));
  }
  if (!any) throw std::runtime_error("contraction_constant: degenerate ensemble (every sample vanished)");
  return best;
}

double lifespan_lower_bound(double u0_norm, double sup_eta, double gamma, double c_gamma, LifespanVariant variant) {
  require_gamma(gamma, "lifespan_lower_bound");
  if (!(u0_norm > 0.0) || !(sup_eta > 0.0) || !(c_gamma > 0.0)) {
    throw std::invalid_argument("lifespan_lower_bound: inputs must be positive");
  }
  const double data = std::pow(u0_norm, -2.0 / gamma);
  const double noise = variant == LifespanVariant::nominal ? 1.0 / sup_eta : std::pow(sup_eta, -2.0 / gamma);
  return c_gamma * noise * data;
}

double derived_c_gamma(double c_hat, double gamma) {
  require_gamma(gamma, "derived_c_gamma");
  if (!(c_hat > 0.0) || !std::isfinite(c_hat)) throw std::invalid_argument("derived_c_gamma: C_hat must be positive");
  return std::pow(4.0 * std::sqrt(1.5) * c_hat, -2.0 / gamma);
}

LifespanReport empirical_lifespan(const SpectralField& u0, const NoiseModel& model, const BrownianPath& path,
                                  const LifespanOptions& options) {
  require_gamma(options.gamma, "empirical_lifespan");
  if (options.levels < 1 || options.refine < 0 || options.steps < 1 || !(options.t_probe_max > 0.0)) {
    throw std::invalid_argument("empirical_lifespan: invalid search parameters");
  }
  const GridPtr& grid = u0.grid_ptr();
  LifespanReport rep;
  rep.gamma = options.gamma;
  rep.u0_norm = sobolev_norm(u0, 0.5 + options.gamma);
  {
    const GammaOperator base(grid, model, path);
    const auto s = base.sup_eta(path.t_max());
    rep.sup_eta = s.value;
    rep.tail_certified = s.tail_certified;
  }

  auto probe = [&](double t_final) -> int {
    ++rep.probes;
    const GammaOperator op(grid, model, path, uniform_times(t_final, options.steps));
    PicardOptions po;
    po.gamma = options.gamma;
    po.tol = options.tol;
    po.max_iter = options.max_iter;
    po.c_hat = options.c_hat;
    // Path-wide sup eta, raised if a bridge sample of this probe exceeds it.
    po.sup_eta = std::max(rep.sup_eta, op.sup_eta(t_final).value);
    rep.sup_eta = po.sup_eta;
    try {
      return picard_solve(u0, op, po).iterations;
    } catch (const PreconditionViolation&) {
      return -1;
    } catch (const NonConvergence&) {
      return -1;
    }
  };

  const double c_derived = derived_c_gamma(options.c_hat, options.gamma);
  auto t_star_now = [&] {
    return rep.u0_norm > 0.0
               ? lifespan_lower_bound(rep.u0_norm, rep.sup_eta, options.gamma, c_derived, LifespanVariant::derived)
               : std::numeric_limits<double>::infinity();
  };

  // `levels` is a floor: halving continues until some probe has reached the
  // derived bound, which only shrinks as probes raise sup eta.
  constexpr int kMaxLevels = 1000;
  int level = 0;
  for (; level < kMaxLevels; ++level) {
    const double t = std::ldexp(options.t_probe_max, -level);
    if (level >= options.levels && 2.0 * t <= t_star_now()) break;
    const int it = probe(t);
    if (it >= 0) {
      rep.t_empirical = t;
      rep.picard_iterations = it;
      break;
    }
  }
  if (rep.t_empirical > 0.0 && level > 0) {
    double lo = rep.t_empirical;
    double hi = 2.0 * lo;
    for (int r = 0; r < options.refine; ++r) {
      const double mid = 0.5 * (lo + hi);
      const int it = probe(mid);
      if (it >= 0) {
        lo = mid;
        rep.picard_iterations = it;
      } else {
        hi = mid;
      }
    }
    rep.t_empirical = lo;
  }

  rep.c_gamma_used = options.c_gamma > 0.0 ? options.c_gamma : c_derived;
  if (rep.u0_norm > 0.0) {
    rep.t_star_nominal = lifespan_lower_bound(rep.u0_norm, rep.sup_eta, options.gamma, rep.c_gamma_used, LifespanVariant::nominal);
    rep.t_star_derived = t_star_now();
  } else {
    rep.t_star_nominal = rep.t_star_derived = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace sns
