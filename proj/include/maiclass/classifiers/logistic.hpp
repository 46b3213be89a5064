#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "maiclass/matrix.hpp"
#include "maiclass/optim.hpp"

namespace maiclass::logistic {

inline double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// L2-penalized binary logistic loss over parameters [w..., b]:
//   C * sum_i log(1 + exp(-y_i (w.x_i + b))) + 1/2 |w|^2
// The intercept is not penalized.
class BinaryObjective {
 public:
  BinaryObjective(const Matrix& X, std::vector<double> signs, double C) : X_(X), y_(std::move(signs)), C_(C) {}

  std::size_t dimension() const { return X_.cols() + 1; }

  double operator()(std::span<const double> params, std::span<double> grad) const {
    const std::size_t d = X_.cols();
    const auto w = params.first(d);
    const double b = params[d];
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < X_.rows(); ++i) {
      const auto x = X_.row(i);
      const double margin = y_[i] * (dot(w, x) + b);
      loss += softplus(-margin);
      const double coeff = -C_ * y_[i] * sigmoid(-margin);
      for (std::size_t j = 0; j < d; ++j)
        if (x[j] != 0.0) grad[j] += coeff * x[j];
      grad[d] += coeff;
    }
    loss *= C_;
    for (std::size_t j = 0; j < d; ++j) {
      loss += 0.5 * w[j] * w[j];
      grad[j] += w[j];
    }
    return loss;
  }

 private:
  const Matrix& X_;
  std::vector<double> y_;
  double C_;
};

// One-vs-rest; a two-class problem trains a single machine for class 1.
struct Model {
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  Matrix weights;  // one row [w..., b] per machine
};

inline Model fit(const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes, double C,
                 const optim::OptimizerConfig& cfg) {
  if (!(C > 0.0)) throw InvalidArgument("logistic regression C must be > 0");
  Model m{n_classes, X.cols(), Matrix(n_classes == 2 ? 1 : n_classes, X.cols() + 1)};
  for (std::size_t k = 0; k < m.weights.rows(); ++k) {
    const std::size_t positive = n_classes == 2 ? 1 : k;
    std::vector<double> signs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) signs[i] = y[i] == positive ? 1.0 : -1.0;
    BinaryObjective objective(X, std::move(signs), C);
    const auto res = optim::lbfgs_minimize(objective, std::vector<double>(objective.dimension(), 0.0), cfg);
    std::copy(res.x.begin(), res.x.end(), m.weights.row(k).begin());
  }
  return m;
}

// Class probabilities: sigmoid for two classes, normalized one-vs-rest
// sigmoids otherwise.
inline std::vector<double> probabilities(const Model& m, std::span<const double> x) {
  std::vector<double> p(m.n_classes);
  auto decision = [&](std::size_t k) {
    const auto row = m.weights.row(k);
    return dot(row.first(m.n_features), x) + row[m.n_features];
  };
  if (m.n_classes == 2) {
    p[1] = sigmoid(decision(0));
    p[0] = 1.0 - p[1];
    return p;
  }
  double z = 0.0;
  for (std::size_t k = 0; k < m.n_classes; ++k) z += (p[k] = sigmoid(decision(k)));
  for (double& v : p) v /= z;
  return p;
}

}  // namespace maiclass::logistic
