#pragma once

#include <cmath>
#include <span>
#include <string_view>

#include "maiclass/error.hpp"
#include "maiclass/matrix.hpp"

namespace maiclass {

enum class KernelKind { linear, poly, rbf, sigmoid };

inline std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::linear: return "linear";
    case KernelKind::poly: return "poly";
    case KernelKind::rbf: return "rbf";
    case KernelKind::sigmoid: return "sigmoid";
  }
  return "?";
}

struct KernelParams {
  KernelKind kind = KernelKind::linear;
  double gamma = 1.0;
  int degree = 3;
  double coef0 = 0.0;

  void validate() const {
    if (!(gamma > 0.0)) throw InvalidArgument("kernel gamma must be > 0");
    if (degree < 1) throw InvalidArgument("kernel degree must be >= 1");
  }
};

inline double kernel_eval(const KernelParams& p, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("kernel arguments differ in length");
  switch (p.kind) {
    case KernelKind::linear: return dot(x, y);
    case KernelKind::poly: return std::pow(p.gamma * dot(x, y) + p.coef0, p.degree);
    case KernelKind::rbf: return std::exp(-p.gamma * squared_distance(x, y));
    case KernelKind::sigmoid: return std::tanh(p.gamma * dot(x, y) + p.coef0);
  }
  return 0.0;
}

inline Matrix kernel_matrix(const KernelParams& p, const Matrix& X) {
  Matrix K(X.rows(), X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = i; j < X.rows(); ++j) K(i, j) = K(j, i) = kernel_eval(p, X.row(i), X.row(j));
  return K;
}

}  // namespace maiclass
