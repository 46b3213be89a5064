#pragma once

// Numerical optimizers used by the classifier bank: L-BFGS with a strong
// Wolfe line search, Adam, and an SMO solver for the soft-margin SVM dual.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "maiclass/error.hpp"
#include "maiclass/matrix.hpp"

namespace maiclass::optim {

struct OptimizerConfig {
  std::size_t max_iterations = 200;
  double tolerance = 1e-5;
  double learning_rate = 1e-3;  // Adam only
  std::size_t history_size = 10;  // L-BFGS only
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  // max_iterations == 0 is accepted and means "return the start point".
  void validate() const {
    if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be > 0");
    if (history_size == 0) throw InvalidArgument("history_size must be >= 1");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw InvalidArgument("adam_beta1 must be in (0,1)");
    if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw InvalidArgument("adam_beta2 must be in (0,1)");
    if (!(adam_epsilon > 0.0)) throw InvalidArgument("adam_epsilon must be > 0");
  }
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// Evaluates objective(x, grad) and rejects non-finite output.
template <class Objective>
double evaluate(Objective& objective, std::span<const double> x, std::span<double> grad) {
  const double f = objective(x, grad);
  if (!std::isfinite(f) || !all_finite(grad)) throw NumericalFailure("objective returned a non-finite value or gradient");
  return f;
}

struct LinePoint {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative
  std::vector<double> x;
  std::vector<double> grad;
};

// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db),
// safeguarded into the middle of [a, b].
inline double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

// Strong Wolfe line search (bracketing + zoom). Returns false when no step
// satisfying the conditions was found; out then holds the best Armijo point
// if any (out.step > 0) or is untouched.
template <class Objective>
bool wolfe_search(Objective& objective, std::span<const double> x0, double f0, double slope0,
                  std::span<const double> dir, double initial_step, LinePoint& out) {
  constexpr double c1 = 1e-4, c2 = 0.9;
  constexpr int max_bracket = 40, max_zoom = 40;
  const std::size_t n = x0.size();

  auto eval_at = [&](double step) {
    LinePoint p;
    p.step = step;
    p.x.assign(x0.begin(), x0.end());
    axpy(step, dir, p.x);
    p.grad.assign(n, 0.0);
    p.value = evaluate(objective, p.x, p.grad);
    p.slope = dot(p.grad, dir);
    return p;
  };

  LinePoint armijo_best;
  armijo_best.step = 0.0;
  armijo_best.value = f0;
  auto note = [&](const LinePoint& p) {
    if (p.value <= f0 + c1 * p.step * slope0 && p.value < armijo_best.value) armijo_best = p;
  };

  auto zoom = [&](LinePoint lo, LinePoint hi) -> bool {
    for (int i = 0; i < max_zoom; ++i) {
      if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, lo.step)) break;
      const double t = cubic_step(lo.step, lo.value, lo.slope, hi.step, hi.value, hi.slope);
      LinePoint p = eval_at(t);
      note(p);
      if (p.value > f0 + c1 * t * slope0 || p.value >= lo.value) {
        hi = std::move(p);
      } else {
        if (std::abs(p.slope) <= -c2 * slope0) {
          out = std::move(p);
          return true;
        }
        if (p.slope * (hi.step - lo.step) >= 0.0) hi = lo;
        lo = std::move(p);
      }
    }
    return false;
  };

  LinePoint prev;
  prev.step = 0.0;
  prev.value = f0;
  prev.slope = slope0;
  double step = initial_step;
  for (int i = 0; i < max_bracket; ++i) {
    LinePoint p = eval_at(step);
    note(p);
    if (p.value > f0 + c1 * step * slope0 || (i > 0 && p.value >= prev.value)) {
      if (zoom(prev, p)) return true;
      break;
    }
    if (std::abs(p.slope) <= -c2 * slope0) {
      out = std::move(p);
      return true;
    }
    if (p.slope >= 0.0) {
      if (zoom(p, prev)) return true;
      break;
    }
    prev = std::move(p);
    step *= 2.0;
  }
  if (armijo_best.step > 0.0) out = std::move(armijo_best);
  return false;
}

}  // namespace detail

// objective(x, grad) -> value, filling grad. Stops when the gradient norm is
// at most cfg.tolerance, when no further decrease is representable, or after
// cfg.max_iterations iterations. Every accepted step decreases the objective.
template <class Objective>
MinimizeResult lbfgs_minimize(Objective&& objective, std::vector<double> x0, const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t n = x0.size();
  MinimizeResult res;
  res.x = std::move(x0);
  std::vector<double> grad(n, 0.0);
  res.value = detail::evaluate(objective, res.x, grad);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> dir(n), alpha(cfg.history_size);

  for (res.iterations = 0; res.iterations < cfg.max_iterations; ++res.iterations) {
    if (norm(grad) <= cfg.tolerance) {
      res.converged = true;
      return res;
    }

    // Two-loop recursion: dir = -H * grad.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = memory[k].rho * dot(memory[k].s, dir);
      detail::axpy(-alpha[k], memory[k].y, dir);
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double& d : dir) d *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double beta = memory[k].rho * dot(memory[k].y, dir);
      detail::axpy(alpha[k] - beta, memory[k].s, dir);
    }

    double slope = dot(grad, dir);
    if (!(slope < 0.0)) {
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
      slope = dot(grad, dir);
    }
    double initial = memory.empty() ? std::min(1.0, 1.0 / norm(grad)) : 1.0;

    detail::LinePoint next;
    bool ok = detail::wolfe_search(objective, res.x, res.value, slope, dir, initial, next);
    if (!ok && next.step <= 0.0 && !memory.empty()) {
      // Retry once from a steepest-descent direction with fresh curvature.
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
      slope = dot(grad, dir);
      initial = std::min(1.0, 1.0 / norm(grad));
      ok = detail::wolfe_search(objective, res.x, res.value, slope, dir, initial, next);
    }
    if (!ok && next.step <= 0.0) {
      // Nothing decreases the objective along a descent direction: either we
      // sit at the floating-point minimum or the oracle is inconsistent.
      if (std::abs(slope) <= 1e-12 * std::max(1.0, std::abs(res.value))) return res;
      throw LineSearchFailure("no step satisfies the Wolfe conditions");
    }

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = next.x[i] - res.x[i];
      p.y[i] = next.grad[i] - grad[i];
    }
    const double sy = dot(p.s, p.y);
    const double previous = res.value;
    res.x = std::move(next.x);
    grad = std::move(next.grad);
    res.value = next.value;

    if (sy > 1e-10 * dot(p.y, p.y)) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (memory.size() > cfg.history_size) memory.pop_front();
    }

    const double scale = std::max({std::abs(previous), std::abs(res.value), 1.0});
    if (previous - res.value <= 10.0 * std::numeric_limits<double>::epsilon() * scale) {
      ++res.iterations;
      res.converged = norm(grad) <= cfg.tolerance;
      return res;
    }
  }
  res.converged = norm(grad) <= cfg.tolerance;
  return res;
}

// gradient(x, step, grad) -> value, filling grad for the (mini-)batch used at
// update number `step` (0-based). Returns the iterate with the lowest reported
// value, so with a full-batch oracle the result never exceeds f(x0).
template <class Gradient>
MinimizeResult adam_minimize(Gradient&& gradient, std::vector<double> x0, const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t n = x0.size();
  std::vector<double> x = std::move(x0), grad(n), m(n, 0.0), v(n, 0.0);

  MinimizeResult res;
  res.x = x;
  res.value = std::numeric_limits<double>::infinity();
  double b1t = 1.0, b2t = 1.0;
  std::size_t t = 0;
  for (; t < cfg.max_iterations; ++t) {
    const double f = gradient(std::span<const double>(x), t, std::span<double>(grad));
    if (!std::isfinite(f) || !all_finite(grad)) throw NumericalFailure("non-finite gradient in Adam");
    if (f < res.value) {
      res.value = f;
      res.x = x;
    }

    b1t *= cfg.adam_beta1;
    b2t *= cfg.adam_beta2;
    double step_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * grad[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
      const double mhat = m[i] / (1.0 - b1t);
      const double vhat = v[i] / (1.0 - b2t);
      const double step = cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
      x[i] -= step;
      step_sq += step * step;
    }
    if (std::sqrt(step_sq) <= cfg.tolerance) {
      res.converged = true;
      ++t;
      break;
    }
  }
  res.iterations = t;
  if (t == 0) {
    res.value = gradient(std::span<const double>(x), 0, std::span<double>(grad));
    return res;
  }
  const double f = gradient(std::span<const double>(x), t, std::span<double>(grad));
  if (!std::isfinite(f)) throw NumericalFailure("non-finite objective in Adam");
  if (f < res.value) {
    res.value = f;
    res.x = x;
  }
  return res;
}

// Soft-margin SVM dual: min 1/2 a'Qa - e'a, Q_ij = y_i y_j K_ij,
// 0 <= a_i <= C, y'a = 0. Decision value is sum_i a_i y_i K(x_i, x) + bias.
struct DualSolution {
  std::vector<double> alphas;
  double bias = 0.0;
  std::vector<std::size_t> support_indices;
  std::size_t iterations = 0;
  bool converged = false;
};

inline double dual_objective(const Matrix& kernel, std::span<const double> y, std::span<const double> alphas) {
  const std::size_t n = y.size();
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alphas[i];
    for (std::size_t j = 0; j < n; ++j) quad += alphas[i] * alphas[j] * y[i] * y[j] * kernel(i, j);
  }
  return 0.5 * quad - lin;
}

// Largest KKT violation m(a) - M(a); <= tol means optimal within tol.
inline double kkt_violation(const Matrix& kernel, std::span<const double> y, std::span<const double> alphas,
                            double C) {
  const std::size_t n = y.size();
  double up = -std::numeric_limits<double>::infinity();
  double low = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    double g = -1.0;
    for (std::size_t j = 0; j < n; ++j) g += y[t] * y[j] * kernel(t, j) * alphas[j];
    const double v = -y[t] * g;
    const bool in_up = (y[t] > 0 && alphas[t] < C) || (y[t] < 0 && alphas[t] > 0);
    const bool in_low = (y[t] > 0 && alphas[t] > 0) || (y[t] < 0 && alphas[t] < C);
    if (in_up) up = std::max(up, v);
    if (in_low) low = std::min(low, v);
  }
  if (!std::isfinite(up) || !std::isfinite(low)) return 0.0;
  return std::max(0.0, up - low);
}

// SMO with maximal-violating-pair working set selection; ties go to the
// lowest index. On hitting max_iterations the best-so-far solution is
// returned with converged == false.
inline DualSolution smo_solve(const Matrix& kernel, std::span<const double> y, double C, double tol,
                              std::size_t max_iterations = 0) {
  const std::size_t n = y.size();
  if (kernel.rows() != n || kernel.cols() != n) throw DimensionMismatch("kernel matrix must be n x n with n = |y|");
  if (!(C > 0.0)) throw InvalidArgument("C must be > 0");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
  for (double v : y)
    if (v != 1.0 && v != -1.0) throw InvalidArgument("labels must be -1 or +1");
  if (max_iterations == 0) max_iterations = std::max<std::size_t>(100000, 100 * n);

  constexpr double tau = 1e-12;
  auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * kernel(i, j); };

  DualSolution sol;
  sol.alphas.assign(n, 0.0);
  std::vector<double>& a = sol.alphas;
  std::vector<double> G(n, -1.0);

  auto in_up = [&](std::size_t t) { return (y[t] > 0 && a[t] < C) || (y[t] < 0 && a[t] > 0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && a[t] > 0) || (y[t] < 0 && a[t] < C); };

  for (sol.iterations = 0; sol.iterations < max_iterations; ++sol.iterations) {
    std::size_t i = n, j = n;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * G[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (i == n || j == n || gmax - gmin <= tol) {
      sol.converged = true;
      break;
    }

    const double old_ai = a[i], old_aj = a[j];
    if (y[i] != y[j]) {
      double quad = Q(i, i) + Q(j, j) + 2.0 * Q(i, j);
      if (quad <= 0.0) quad = tau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = C - diff;
        }
      } else if (a[j] > C) {
        a[j] = C;
        a[i] = C + diff;
      }
    } else {
      double quad = Q(i, i) + Q(j, j) - 2.0 * Q(i, j);
      if (quad <= 0.0) quad = tau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > C) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = sum - C;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > C) {
        if (a[j] > C) {
          a[j] = C;
          a[i] = sum - C;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }

    const double di = a[i] - old_ai, dj = a[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) G[t] += Q(t, i) * di + Q(t, j) * dj;
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (a[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (a[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  double rho = 0.0;
  if (n_free > 0) rho = sum_free / static_cast<double>(n_free);
  else if (std::isfinite(ub) && std::isfinite(lb)) rho = 0.5 * (ub + lb);
  else if (std::isfinite(ub)) rho = ub;
  else if (std::isfinite(lb)) rho = lb;
  sol.bias = -rho;

  for (std::size_t t = 0; t < n; ++t)
    if (a[t] > 0.0) sol.support_indices.push_back(t);
  return sol;
}

}  // namespace maiclass::optim
