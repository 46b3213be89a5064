#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "maiclass/error.hpp"
#include "maiclass/matrix.hpp"

namespace maiclass::knn {

// k-nearest neighbours under Euclidean distance with a plain majority vote.
struct Model {
  std::size_t k = 5;
  std::size_t n_classes = 0;
  Matrix X;
  std::vector<std::size_t> y;
};

inline Model fit(const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes, std::size_t k) {
  if (k == 0) throw InvalidArgument("k-NN needs k >= 1");
  return Model{k, n_classes, X, std::vector<std::size_t>(y.begin(), y.end())};
}

// Indices of the k nearest training rows; equal distances keep the lower index first.
inline std::vector<std::size_t> neighbours(const Model& m, std::span<const double> x) {
  const std::size_t n = m.X.rows();
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = squared_distance(m.X.row(i), x);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t k = std::min(m.k, n);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) { return dist[a] != dist[b] ? dist[a] < dist[b] : a < b; });
  idx.resize(k);
  return idx;
}

inline std::size_t predict(const Model& m, std::span<const double> x) {
  std::vector<std::size_t> votes(m.n_classes, 0);
  for (auto i : neighbours(m, x)) ++votes[m.y[i]];
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace maiclass::knn
