#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "maiclass/error.hpp"
#include "maiclass/matrix.hpp"

namespace maiclass::nb {

enum class Event { bernoulli, multinomial, gaussian };

// Fitted naive Bayes state. For Bernoulli and multinomial events `log_prob`
// holds per-class feature log-likelihoods (and `log_prob_not` the Bernoulli
// complement); for Gaussian events `mean` and `var`.
struct Model {
  Event event = Event::multinomial;
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<double> log_prior;
  Matrix log_prob;
  Matrix log_prob_not;
  Matrix mean;
  Matrix var;
};

inline Model fit(Event event, const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes,
                 double alpha) {
  if (event != Event::gaussian && !(alpha > 0.0)) throw InvalidArgument("naive Bayes alpha must be > 0");
  const std::size_t n = X.rows(), d = X.cols();
  Model m;
  m.event = event;
  m.n_classes = n_classes;
  m.n_features = d;

  std::vector<double> class_count(n_classes, 0.0);
  for (auto c : y) class_count[c] += 1.0;
  m.log_prior.resize(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) m.log_prior[c] = std::log(class_count[c] / static_cast<double>(n));

  switch (event) {
    case Event::bernoulli: {
      Matrix present(n_classes, d);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (X(i, j) > 0.0) present(y[i], j) += 1.0;
      m.log_prob = Matrix(n_classes, d);
      m.log_prob_not = Matrix(n_classes, d);
      for (std::size_t c = 0; c < n_classes; ++c)
        for (std::size_t j = 0; j < d; ++j) {
          const double p = (present(c, j) + alpha) / (class_count[c] + 2.0 * alpha);
          m.log_prob(c, j) = std::log(p);
          m.log_prob_not(c, j) = std::log1p(-p);
        }
      break;
    }
    case Event::multinomial: {
      Matrix counts(n_classes, d);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          if (X(i, j) < 0.0) throw InvalidArgument("multinomial naive Bayes needs non-negative features");
          counts(y[i], j) += X(i, j);
        }
      m.log_prob = Matrix(n_classes, d);
      for (std::size_t c = 0; c < n_classes; ++c) {
        double total = 0.0;
        for (std::size_t j = 0; j < d; ++j) total += counts(c, j);
        const double denom = total + alpha * static_cast<double>(d);
        for (std::size_t j = 0; j < d; ++j) m.log_prob(c, j) = std::log((counts(c, j) + alpha) / denom);
      }
      break;
    }
    case Event::gaussian: {
      // Floor: 1e-9 times the largest per-feature variance over all rows.
      double max_var = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double mu = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += X(i, j);
        mu /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) sq += (X(i, j) - mu) * (X(i, j) - mu);
        max_var = std::max(max_var, sq / static_cast<double>(n));
      }
      const double floor = max_var > 0.0 ? 1e-9 * max_var : 1e-9;

      m.mean = Matrix(n_classes, d);
      m.var = Matrix(n_classes, d);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) m.mean(y[i], j) += X(i, j);
      for (std::size_t c = 0; c < n_classes; ++c)
        for (std::size_t j = 0; j < d; ++j) m.mean(c, j) /= class_count[c];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = X(i, j) - m.mean(y[i], j);
          m.var(y[i], j) += diff * diff;
        }
      for (std::size_t c = 0; c < n_classes; ++c)
        for (std::size_t j = 0; j < d; ++j) m.var(c, j) = m.var(c, j) / class_count[c] + floor;
      break;
    }
  }
  return m;
}

// Unnormalized joint log-likelihood log P(c) + log P(x | c) per class.
inline std::vector<double> joint_log_likelihood(const Model& m, std::span<const double> x) {
  std::vector<double> jll(m.log_prior);
  for (std::size_t c = 0; c < m.n_classes; ++c) {
    double s = 0.0;
    switch (m.event) {
      case Event::bernoulli:
        for (std::size_t j = 0; j < m.n_features; ++j) s += x[j] > 0.0 ? m.log_prob(c, j) : m.log_prob_not(c, j);
        break;
      case Event::multinomial:
        for (std::size_t j = 0; j < m.n_features; ++j)
          if (x[j] != 0.0) s += x[j] * m.log_prob(c, j);
        break;
      case Event::gaussian:
        for (std::size_t j = 0; j < m.n_features; ++j) {
          const double v = m.var(c, j), diff = x[j] - m.mean(c, j);
          s -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + diff * diff / v);
        }
        break;
    }
    jll[c] += s;
  }
  return jll;
}

inline std::vector<double> posteriors(const Model& m, std::span<const double> x) {
  auto p = joint_log_likelihood(m, x);
  const double top = *std::max_element(p.begin(), p.end());
  double z = 0.0;
  for (double& v : p) z += (v = std::exp(v - top));
  for (double& v : p) v /= z;
  return p;
}

}  // namespace maiclass::nb
