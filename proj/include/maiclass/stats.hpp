#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "maiclass/error.hpp"

namespace maiclass::stats {

enum class PValueMethod {
  automatic,   // exact when there are no ties and a sample has <= 8 values
  exact,       // null distribution by enumeration; requires no ties
  asymptotic,  // normal approximation with tie correction
};

struct UTestResult {
  double u1 = 0.0;  // U of the first sample
  double u2 = 0.0;
  double z = 0.0;   // signed, after continuity correction when applied
  double p_two_sided = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t tie_groups = 0;
  bool continuity_applied = false;
  bool exact = false;
};

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Neumaier-compensated sum.
inline double accurate_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

namespace detail {

// Two-sided exact p for U1 = u with sample sizes n1, n2 and no ties:
// counts rank subsets of size min(n1, n2) by rank sum.
inline double exact_p(double u, std::size_t n1, std::size_t n2) {
  const std::size_t m = std::min(n1, n2), n = n1 + n2;
  const std::size_t max_u = n1 * n2;
  // ways[k][s]: number of k-subsets of {1..i} whose rank sum minus k(k+1)/2 equals s.
  std::vector<std::vector<double>> ways(m + 1, std::vector<double>(max_u + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t k = std::min(m, i); k >= 1; --k) {
      // Adding rank i as the k-th element adds i - k to the shifted sum.
      const std::size_t shift = i - k;
      for (std::size_t s = max_u; s + 1 > shift; --s) {
        ways[k][s] += ways[k - 1][s - shift];
        if (s == 0) break;
      }
    }
  const auto& dist = ways[m];
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  // U is symmetric about n1 n2 / 2, so the tail of the smaller U suffices.
  const double u_small = std::min(u, static_cast<double>(max_u) - u);
  double tail = 0.0;
  for (std::size_t s = 0; s <= max_u && static_cast<double>(s) <= u_small + 1e-9; ++s) tail += dist[s];
  return std::min(1.0, 2.0 * tail / total);
}

}  // namespace detail

// Mann-Whitney U with midranks. The reported statistic is u1, the U of x.
inline UTestResult mann_whitney_u(std::span<const double> x, std::span<const double> y, bool continuity = true,
                                  PValueMethod method = PValueMethod::automatic) {
  if (x.empty() || y.empty()) throw EmptySample("Mann-Whitney U needs two non-empty samples");
  UTestResult r;
  r.n1 = x.size();
  r.n2 = y.size();
  const std::size_t n = r.n1 + r.n2;

  struct Item {
    double value;
    bool first;
  };
  std::vector<Item> pooled;
  pooled.reserve(n);
  for (double v : x) pooled.push_back({v, true});
  for (double v : y) pooled.push_back({v, false});
  std::stable_sort(pooled.begin(), pooled.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

  double rank_sum = 0.0, tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[j + 1].value == pooled[i].value) ++j;
    const double t = static_cast<double>(j - i + 1);
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      if (pooled[k].first) rank_sum += midrank;
    if (t > 1.0) {
      ++r.tie_groups;
      tie_term += t * t * t - t;
    }
    i = j + 1;
  }

  const double n1 = static_cast<double>(r.n1), n2 = static_cast<double>(r.n2), nn = static_cast<double>(n);
  r.u1 = rank_sum - n1 * (n1 + 1.0) / 2.0;
  r.u2 = n1 * n2 - r.u1;

  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((nn + 1.0) - (n > 1 ? tie_term / (nn * (nn - 1.0)) : 0.0));
  const double sd = var > 0.0 ? std::sqrt(var) : 0.0;

  const bool use_exact = method == PValueMethod::exact ||
                         (method == PValueMethod::automatic && r.tie_groups == 0 && std::min(r.n1, r.n2) <= 8);
  if (method == PValueMethod::exact && r.tie_groups > 0)
    throw InvalidArgument("exact Mann-Whitney p-values require untied data");

  double dev = r.u1 - mu;
  if (continuity && !use_exact) {
    r.continuity_applied = true;
    dev = std::copysign(std::max(std::abs(dev) - 0.5, 0.0), dev);
  }
  r.z = sd > 0.0 ? dev / sd : 0.0;

  if (use_exact) {
    r.exact = true;
    r.p_two_sided = detail::exact_p(r.u1, r.n1, r.n2);
  } else {
    r.p_two_sided = sd > 0.0 ? std::min(1.0, 2.0 * normal_cdf(-std::abs(r.z))) : 1.0;
  }
  return r;
}

// 100 * column mean of a 0/1 table given as rows.
inline std::vector<double> percent_agreement(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty()) throw EmptyTable("agreement table has no cells");
  const std::size_t cols = rows.front().size();
  std::vector<double> hits(cols, 0.0);
  for (const auto& row : rows) {
    if (row.size() != cols) throw DimensionMismatch("agreement table rows differ in width");
    for (std::size_t c = 0; c < cols; ++c) {
      if (row[c] != 0 && row[c] != 1) throw RangeError("agreement cells must be 0 or 1");
      hits[c] += row[c];
    }
  }
  for (double& h : hits) h = 100.0 * h / static_cast<double>(rows.size());
  return hits;
}

struct AgreementTable {
  std::vector<std::string> raters;
  std::vector<std::string> columns;
  std::vector<std::vector<int>> cells;  // one row per rater

  std::vector<double> percent() const { return percent_agreement(cells); }
};

struct Description {
  double sum = 0.0;
  double mean = 0.0;
  double median = 0.0;
  std::vector<double> sorted;

  std::size_t count_of(double v) const {
    const auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), v);
    return static_cast<std::size_t>(hi - lo);
  }
};

inline Description describe(std::span<const double> scores) {
  if (scores.empty()) throw EmptySample("cannot describe an empty sample");
  Description d;
  d.sorted.assign(scores.begin(), scores.end());
  std::sort(d.sorted.begin(), d.sorted.end());
  d.sum = accurate_sum(scores);
  d.mean = d.sum / static_cast<double>(scores.size());
  const std::size_t n = d.sorted.size();
  d.median = n % 2 == 1 ? d.sorted[n / 2] : 0.5 * (d.sorted[n / 2 - 1] + d.sorted[n / 2]);
  return d;
}

}  // namespace maiclass::stats
