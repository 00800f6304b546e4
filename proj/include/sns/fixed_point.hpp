#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sns {

/// norm(a) >= 1 / (4 ||B||): the contraction argument does not apply.
class PreconditionViolation : public std::runtime_error {
 public:
  PreconditionViolation(double a_norm, double bound)
      : std::runtime_error("fixed point precondition violated: norm(a) = " + std::to_string(a_norm) +
                           " >= 1/(4*||B||) = " + std::to_string(bound > 0.0 ? 0.25 / bound : INFINITY)),
        a_norm_(a_norm),
        bound_(bound) {}
  double a_norm() const { return a_norm_; }
  double bilinear_bound() const { return bound_; }

 private:
  double a_norm_;
  double bound_;
};

/// The iteration did not reach the tolerance (budget exhausted, growth, or overflow).
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& why, std::vector<double> history)
      : std::runtime_error("fixed point iteration did not converge: " + why), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

template <class X>
struct FixedPointResult {
  X solution;
  int iterations = 0;
  /// norm(x_{m+1} - x_m) per iteration.
  std::vector<double> residual_history;
  double bilinear_bound = 0.0;
  double a_norm = 0.0;
  bool converged = false;
};

/// Solves x = a + B(x, x) by x_{m+1} = a + B(x_m, x_m) starting from `start`.
///
/// A bilinear_bound of 0 disables the precondition (the threshold 1/(4*0) is infinite).
/// Stops once norm(x_{m+1} - x_m) <= tol and returns x_{m+1}.
template <class X, class Bilinear, class Norm>
FixedPointResult<X> fixed_point_solve(const X& a, const X& start, Bilinear&& bilinear, Norm&& norm, double bilinear_bound,
                                      double tol, int max_iter) {
  if (!(bilinear_bound >= 0.0)) throw std::invalid_argument("fixed_point_solve: bilinear bound must be nonnegative");
  if (!(tol > 0.0)) throw std::invalid_argument("fixed_point_solve: tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("fixed_point_solve: max_iter must be at least 1");

  FixedPointResult<X> out;
  out.bilinear_bound = bilinear_bound;
  out.a_norm = norm(a);
  if (bilinear_bound > 0.0 && !(out.a_norm < 0.25 / bilinear_bound)) throw PreconditionViolation(out.a_norm, bilinear_bound);

  constexpr int kMaxGrowth = 3;
  int growth = 0;
  X x = start;
  for (int it = 1; it <= max_iter; ++it) {
    X next = a + bilinear(x, x);
    const double r = norm(next - x);
    out.residual_history.push_back(r);
    out.iterations = it;
    if (!std::isfinite(r)) throw NonConvergence("non-finite residual at iteration " + std::to_string(it), out.residual_history);
    if (r <= tol) {
      out.solution = std::move(next);
      out.converged = true;
      return out;
    }
    if (it > 1 && r >= out.residual_history[it - 2]) {
      if (++growth >= kMaxGrowth) throw NonConvergence("residual grew repeatedly", out.residual_history);
    } else {
      growth = 0;
    }
    x = std::move(next);
  }
  throw NonConvergence("max_iter = " + std::to_string(max_iter) + " reached", out.residual_history);
}

template <class X, class Bilinear, class Norm>
FixedPointResult<X> fixed_point_solve(const X& a, Bilinear&& bilinear, Norm&& norm, double bilinear_bound, double tol,
                                      int max_iter) {
  return fixed_point_solve(a, a, std::forward<Bilinear>(bilinear), std::forward<Norm>(norm), bilinear_bound, tol, max_iter);
}

}  // namespace sns
