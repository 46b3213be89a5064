#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "maiclass/error.hpp"
#include "maiclass/matrix.hpp"
#include "maiclass/optim.hpp"
#include "maiclass/random.hpp"

namespace maiclass::mlp {

enum class Solver { lbfgs, adam };

// Parameter layout inside the flat vector: W1 (d x h, row-major), b1 (h),
// W2 (h x k, row-major), b2 (k).
struct Shape {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::size_t outputs = 0;

  std::size_t w1() const { return 0; }
  std::size_t b1() const { return inputs * hidden; }
  std::size_t w2() const { return b1() + hidden; }
  std::size_t b2() const { return w2() + hidden * outputs; }
  std::size_t size() const { return b2() + outputs; }
};

namespace detail {

// Softmax in place.
inline void softmax(std::span<double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double& v : z) s += (v = std::exp(v - top));
  for (double& v : z) v /= s;
}

}  // namespace detail

// Mean cross-entropy of a ReLU hidden layer + softmax output, plus
// alpha / (2 n) * (|W1|^2 + |W2|^2). Rows can be restricted to a batch.
class Objective {
 public:
  Objective(const Matrix& X, std::span<const std::size_t> y, Shape shape, double alpha)
      : X_(X), y_(y.begin(), y.end()), shape_(shape), alpha_(alpha), nonzero_(X.rows()) {
    for (std::size_t i = 0; i < X.rows(); ++i)
      for (std::size_t j = 0; j < X.cols(); ++j)
        if (X(i, j) != 0.0) nonzero_[i].push_back(j);
  }

  const Shape& shape() const { return shape_; }

  double operator()(std::span<const double> params, std::span<double> grad) const {
    std::vector<std::size_t> all(X_.rows());
    std::iota(all.begin(), all.end(), 0);
    return batch(params, all, grad);
  }

  double batch(std::span<const double> params, std::span<const std::size_t> rows, std::span<double> grad) const {
    const auto [d, h, k] = shape_;
    const double* W1 = params.data() + shape_.w1();
    const double* b1 = params.data() + shape_.b1();
    const double* W2 = params.data() + shape_.w2();
    const double* b2 = params.data() + shape_.b2();
    double* gW1 = grad.data() + shape_.w1();
    double* gb1 = grad.data() + shape_.b1();
    double* gW2 = grad.data() + shape_.w2();
    double* gb2 = grad.data() + shape_.b2();
    std::fill(grad.begin(), grad.end(), 0.0);

    const double n = static_cast<double>(rows.size());
    std::vector<double> z1(h), a1(h), out(k), dz1(h);
    double loss = 0.0;
    for (std::size_t i : rows) {
      const auto x = X_.row(i);
      std::copy(b1, b1 + h, z1.begin());
      for (std::size_t j : nonzero_[i]) {
        const double xj = x[j];
        const double* w = W1 + j * h;
        for (std::size_t u = 0; u < h; ++u) z1[u] += xj * w[u];
      }
      for (std::size_t u = 0; u < h; ++u) a1[u] = z1[u] > 0.0 ? z1[u] : 0.0;
      std::copy(b2, b2 + k, out.begin());
      for (std::size_t u = 0; u < h; ++u) {
        if (a1[u] == 0.0) continue;
        const double* w = W2 + u * k;
        for (std::size_t c = 0; c < k; ++c) out[c] += a1[u] * w[c];
      }
      const double top = *std::max_element(out.begin(), out.end());
      double s = 0.0;
      for (double v : out) s += std::exp(v - top);
      loss += std::log(s) + top - out[y_[i]];
      detail::softmax(out);

      // out becomes dL/dz2 for this row (unscaled by 1/n).
      out[y_[i]] -= 1.0;
      for (std::size_t c = 0; c < k; ++c) gb2[c] += out[c];
      for (std::size_t u = 0; u < h; ++u) {
        double acc = 0.0;
        const double* w = W2 + u * k;
        double* gw = gW2 + u * k;
        for (std::size_t c = 0; c < k; ++c) {
          gw[c] += a1[u] * out[c];
          acc += w[c] * out[c];
        }
        dz1[u] = z1[u] > 0.0 ? acc : 0.0;
      }
      for (std::size_t u = 0; u < h; ++u) gb1[u] += dz1[u];
      for (std::size_t j : nonzero_[i]) {
        const double xj = x[j];
        double* gw = gW1 + j * h;
        for (std::size_t u = 0; u < h; ++u) gw[u] += xj * dz1[u];
      }
    }

    double sq = 0.0;
    for (std::size_t p = 0; p < shape_.b1(); ++p) sq += W1[p] * W1[p];
    for (std::size_t p = 0; p < h * k; ++p) sq += W2[p] * W2[p];
    loss = loss / n + 0.5 * alpha_ * sq / n;

    for (double& g : grad) g /= n;
    for (std::size_t p = 0; p < shape_.b1(); ++p) gW1[p] += alpha_ * W1[p] / n;
    for (std::size_t p = 0; p < h * k; ++p) gW2[p] += alpha_ * W2[p] / n;
    return loss;
  }

 private:
  const Matrix& X_;
  std::vector<std::size_t> y_;
  Shape shape_;
  double alpha_;
  std::vector<std::vector<std::size_t>> nonzero_;
};

struct Model {
  Shape shape;
  std::vector<double> params;
  double final_loss = 0.0;
};

struct Options {
  Solver solver = Solver::lbfgs;
  std::size_t hidden = 100;
  double alpha = 1e-4;
  std::size_t max_iter = 200;  // L-BFGS iterations or Adam epochs
  double tol = 1e-4;
  double learning_rate = 1e-3;
  std::size_t batch_size = 200;
};

// Glorot-uniform initialization of weights and biases.
inline std::vector<double> initial_params(const Shape& shape, Rng& rng) {
  std::vector<double> p(shape.size());
  const double bound1 = std::sqrt(6.0 / static_cast<double>(shape.inputs + shape.hidden));
  const double bound2 = std::sqrt(6.0 / static_cast<double>(shape.hidden + shape.outputs));
  for (std::size_t i = shape.w1(); i < shape.w2(); ++i) p[i] = rng.uniform(-bound1, bound1);
  for (std::size_t i = shape.w2(); i < shape.size(); ++i) p[i] = rng.uniform(-bound2, bound2);
  return p;
}

inline Model fit(const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes, const Options& opt,
                 std::uint64_t seed) {
  if (opt.hidden == 0) throw InvalidArgument("MLP hidden width must be >= 1");
  Rng rng(seed);
  const Shape shape{X.cols(), opt.hidden, n_classes};
  Objective objective(X, y, shape, opt.alpha);
  Model m{shape, initial_params(shape, rng), 0.0};

  if (opt.solver == Solver::lbfgs) {
    optim::OptimizerConfig cfg;
    cfg.max_iterations = opt.max_iter;
    cfg.tolerance = opt.tol;
    const auto res = optim::lbfgs_minimize(objective, std::move(m.params), cfg);
    m.params = res.x;
    m.final_loss = res.value;
    return m;
  }

  const std::size_t n = X.rows();
  const std::size_t batch = std::clamp<std::size_t>(opt.batch_size, 1, n);
  const std::size_t per_epoch = (n + batch - 1) / batch;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t shuffled_epoch = static_cast<std::size_t>(-1);

  auto gradient = [&](std::span<const double> params, std::size_t step, std::span<double> grad) {
    const std::size_t epoch = step / per_epoch, b = step % per_epoch;
    if (epoch != shuffled_epoch && per_epoch > 1) {
      rng.shuffle(order);
      shuffled_epoch = epoch;
    }
    const std::size_t lo = b * batch, hi = std::min(n, lo + batch);
    return objective.batch(params, std::span<const std::size_t>(order).subspan(lo, hi - lo), grad);
  };

  optim::OptimizerConfig cfg;
  cfg.max_iterations = opt.max_iter * per_epoch;
  cfg.tolerance = 0.0;
  cfg.learning_rate = opt.learning_rate;
  const auto res = optim::adam_minimize(gradient, std::move(m.params), cfg);
  m.params = res.x;
  std::vector<double> g(shape.size());
  m.final_loss = objective(m.params, g);
  return m;
}

inline std::vector<double> probabilities(const Model& m, std::span<const double> x) {
  const auto [d, h, k] = m.shape;
  const double* W1 = m.params.data() + m.shape.w1();
  const double* b1 = m.params.data() + m.shape.b1();
  const double* W2 = m.params.data() + m.shape.w2();
  const double* b2 = m.params.data() + m.shape.b2();
  std::vector<double> a1(b1, b1 + h), out(b2, b2 + k);
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] == 0.0) continue;
    for (std::size_t u = 0; u < h; ++u) a1[u] += x[j] * W1[j * h + u];
  }
  for (std::size_t u = 0; u < h; ++u) {
    if (a1[u] <= 0.0) continue;
    for (std::size_t c = 0; c < k; ++c) out[c] += a1[u] * W2[u * k + c];
  }
  detail::softmax(out);
  return out;
}

}  // namespace maiclass::mlp
