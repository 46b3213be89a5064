#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maiclass/classifiers/kernel.hpp"
#include "maiclass/matrix.hpp"
#include "maiclass/optim.hpp"

namespace maiclass::svm {

// One binary machine separating class `positive` (+1) from `negative` (-1).
struct PairModel {
  std::size_t positive = 0;
  std::size_t negative = 0;
  Matrix support;            // support vectors, one per row
  std::vector<double> coef;  // alpha_i * y_i
  double bias = 0.0;
  bool converged = true;
};

struct Model {
  KernelParams kernel;
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<PairModel> pairs;  // (0,1), (0,2), ..., (1,2), ...
};

inline Model fit(const KernelParams& kernel, const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes,
                 double C, double tol) {
  kernel.validate();
  Model m{kernel, n_classes, X.cols(), {}};
  for (std::size_t a = 0; a < n_classes; ++a)
    for (std::size_t b = a + 1; b < n_classes; ++b) {
      std::vector<std::size_t> idx;
      std::vector<double> signs;
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == a) {
          idx.push_back(i);
          signs.push_back(1.0);
        } else if (y[i] == b) {
          idx.push_back(i);
          signs.push_back(-1.0);
        }
      }
      const Matrix sub = X.select_rows(idx);
      const auto sol = optim::smo_solve(kernel_matrix(kernel, sub), signs, C, tol);

      PairModel pm;
      pm.positive = a;
      pm.negative = b;
      pm.bias = sol.bias;
      pm.converged = sol.converged;
      for (auto s : sol.support_indices) {
        pm.support.push_row(sub.row(s));
        pm.coef.push_back(sol.alphas[s] * signs[s]);
      }
      m.pairs.push_back(std::move(pm));
    }
  return m;
}

inline double decision_value(const Model& m, const PairModel& pm, std::span<const double> x) {
  double f = pm.bias;
  for (std::size_t s = 0; s < pm.coef.size(); ++s) f += pm.coef[s] * kernel_eval(m.kernel, pm.support.row(s), x);
  return f;
}

// One-vs-one voting; ties go to the larger summed decision value, then to
// the earlier class.
inline std::size_t predict(const Model& m, std::span<const double> x) {
  std::vector<int> votes(m.n_classes, 0);
  std::vector<double> margin(m.n_classes, 0.0);
  for (const auto& pm : m.pairs) {
    const double f = decision_value(m, pm, x);
    ++votes[f > 0.0 ? pm.positive : pm.negative];
    margin[pm.positive] += f;
    margin[pm.negative] -= f;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < m.n_classes; ++c)
    if (votes[c] > votes[best] || (votes[c] == votes[best] && margin[c] > margin[best])) best = c;
  return best;
}

}  // namespace maiclass::svm
