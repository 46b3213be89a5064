#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "maiclass/matrix.hpp"

namespace maiclass::tree {

// CART with Gini impurity. Leaves have feature == kLeaf.
struct Node {
  static constexpr std::size_t kLeaf = static_cast<std::size_t>(-1);
  std::size_t feature = kLeaf;
  double threshold = 0.0;  // x[feature] <= threshold goes left
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t label = 0;
};

struct Model {
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<Node> nodes;  // nodes[0] is the root
};

namespace detail {

inline double gini(std::span<const double> counts, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += (c / total) * (c / total);
  return 1.0 - s;
}

inline std::size_t majority(std::span<const double> counts) {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

class Builder {
 public:
  Builder(const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes, std::size_t max_depth)
      : X_(X), y_(y), k_(n_classes), max_depth_(max_depth) {}

  Model build() {
    Model m{k_, X_.cols(), {}};
    std::vector<std::size_t> idx(X_.rows());
    std::iota(idx.begin(), idx.end(), 0);
    grow(m, idx, 0);
    return m;
  }

 private:
  struct Split {
    std::size_t feature = Node::kLeaf;
    double threshold = 0.0;
    double impurity = 0.0;  // weighted child impurity
  };

  std::size_t grow(Model& m, std::vector<std::size_t>& idx, std::size_t depth) {
    std::vector<double> counts(k_, 0.0);
    for (auto i : idx) counts[y_[i]] += 1.0;
    const std::size_t id = m.nodes.size();
    m.nodes.push_back(Node{Node::kLeaf, 0.0, 0, 0, majority(counts)});

    const double parent = gini(counts, static_cast<double>(idx.size()));
    if (parent == 0.0 || idx.size() < 2 || (max_depth_ != 0 && depth >= max_depth_)) return id;

    const Split best = find_split(idx, counts);
    if (best.feature == Node::kLeaf) return id;

    std::vector<std::size_t> left, right;
    for (auto i : idx) (X_(i, best.feature) <= best.threshold ? left : right).push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    const std::size_t l = grow(m, left, depth + 1);
    const std::size_t r = grow(m, right, depth + 1);
    Node& node = m.nodes[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  // Lowest weighted child impurity; earlier features and lower thresholds
  // win ties.
  Split find_split(const std::vector<std::size_t>& idx, std::span<const double> counts) const {
    Split best;
    best.impurity = std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(idx.size());
    std::vector<std::size_t> order(idx);
    std::vector<double> left(k_), right(k_);
    for (std::size_t f = 0; f < X_.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return X_(a, f) != X_(b, f) ? X_(a, f) < X_(b, f) : a < b;
      });
      if (X_(order.front(), f) == X_(order.back(), f)) continue;
      std::fill(left.begin(), left.end(), 0.0);
      std::copy(counts.begin(), counts.end(), right.begin());
      for (std::size_t p = 0; p + 1 < order.size(); ++p) {
        const std::size_t c = y_[order[p]];
        left[c] += 1.0;
        right[c] -= 1.0;
        const double lo = X_(order[p], f), hi = X_(order[p + 1], f);
        if (lo == hi) continue;
        const double nl = static_cast<double>(p + 1), nr = n - nl;
        const double imp = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
        if (imp < best.impurity) {
          best.impurity = imp;
          best.feature = f;
          best.threshold = lo + (hi - lo) / 2.0;
          if (!(best.threshold < hi)) best.threshold = lo;
        }
      }
    }
    return best;
  }

  const Matrix& X_;
  std::span<const std::size_t> y_;
  std::size_t k_;
  std::size_t max_depth_;
};

}  // namespace detail

// max_depth == 0 means unlimited.
inline Model fit(const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes, std::size_t max_depth = 0) {
  return detail::Builder(X, y, n_classes, max_depth).build();
}

inline std::size_t predict(const Model& m, std::span<const double> x) {
  std::size_t id = 0;
  while (m.nodes[id].feature != Node::kLeaf) {
    const Node& node = m.nodes[id];
    id = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return m.nodes[id].label;
}

}  // namespace maiclass::tree
