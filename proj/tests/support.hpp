#pragma once

// Shared generators and independent oracles for the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>

#include "maiclass/maiclass.hpp"

namespace testing_support {

using maiclass::Corpus;
using maiclass::Document;
using maiclass::Matrix;
using maiclass::Rng;

inline std::filesystem::path tables_dir() { return MAICLASS_TABLES_DIR; }

// Scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            fmt::format("maiclass-{}-{}-{}", tag, static_cast<long>(::getpid()), counter++);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Three interest classes, disjoint 50-token class vocabularies, 200 noise
// tokens shared by every class. Each document uses every token of its class
// 1-3 times and draws 60 noise tokens.
inline std::vector<Document> synthetic_documents(std::uint64_t seed, std::size_t per_class = 30) {
  static const char* classes[] = {"football", "rock", "vegetarianism"};
  Rng rng(seed);
  std::vector<Document> docs;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<std::string> words;
      for (int t = 0; t < 50; ++t) {
        const auto reps = 1 + rng.below(3);
        for (std::uint64_t r = 0; r < reps; ++r) words.push_back(fmt::format("{}{:02}", classes[c], t));
      }
      for (int t = 0; t < 60; ++t) words.push_back(fmt::format("noise{:03}", rng.below(200)));
      rng.shuffle(words);
      std::string text;
      for (const auto& w : words) text += w + ' ';
      Document d;
      d.id = fmt::format("{}-{}", classes[c], i);
      d.network = i % 2 ? maiclass::Network::twitter : maiclass::Network::vkontakte;
      d.language = maiclass::Language::en;
      d.label = classes[c];
      d.raw_text = text;
      docs.push_back(std::move(d));
    }
  return docs;
}

inline Corpus synthetic_corpus(std::uint64_t seed, std::size_t per_class = 30) {
  return maiclass::make_corpus("synthetic", synthetic_documents(seed, per_class));
}

inline std::string to_jsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& d : docs) {
    nlohmann::json j{{"id", d.id},
                     {"network", std::string(maiclass::to_string(d.network))},
                     {"language", std::string(maiclass::to_string(d.language))},
                     {"label", d.label},
                     {"text", d.raw_text}};
    out += j.dump() + '\n';
  }
  return out;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

// Relative error |g - fd| / max(|g|, |fd|) between an analytic gradient
// and central differences, over the whole vector.
inline double gradient_error(const std::function<double(std::span<const double>, std::span<double>)>& f,
                             std::vector<double> x, double h = 1e-6) {
  std::vector<double> g(x.size()), fd(x.size()), scratch(x.size());
  f(x, g);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double fp = f(x, scratch);
    x[i] = keep - h;
    const double fm = f(x, scratch);
    x[i] = keep;
    fd[i] = (fp - fm) / (2.0 * h);
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) diff += (g[i] - fd[i]) * (g[i] - fd[i]);
  const double scale = std::max({maiclass::norm(g), maiclass::norm(fd), 1e-12});
  return std::sqrt(diff) / scale;
}

// Brute-force k nearest neighbours: full distance scan, stable on index.
inline std::size_t knn_oracle(const Matrix& X, std::span<const std::size_t> y, std::size_t n_classes, std::size_t k,
                              std::span<const double> q) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) s += (X(i, j) - q[j]) * (X(i, j) - q[j]);
    d.emplace_back(s, i);
  }
  std::sort(d.begin(), d.end());
  std::vector<int> votes(n_classes, 0);
  for (std::size_t i = 0; i < std::min(k, d.size()); ++i) ++votes[y[d[i].second]];
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

// Exact two-sided Mann-Whitney p by listing every assignment of ranks
// 1..n1+n2 to the first sample.
inline double exact_p_oracle(double u1, std::size_t n1, std::size_t n2) {
  const std::size_t n = n1 + n2;
  const double mean = static_cast<double>(n1 * n2) / 2.0;
  const double dev = std::abs(u1 - mean);
  std::size_t total = 0, extreme = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) rank_sum += static_cast<double>(i + 1);
    const double u = rank_sum - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    ++total;
    if (std::abs(u - mean) >= dev - 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

// Minimum of the SVM dual (min form) over a grid on the feasible set
// {0 <= a_i <= C, sum a_i y_i = 0}: the last coordinate is solved from the
// equality constraint, the rest are swept on `steps` points. A coordinate
// search refines the best grid point while staying feasible.
inline double dual_grid_oracle(const Matrix& K, std::span<const double> y, double C, int steps) {
  const std::size_t n = y.size();
  std::vector<double> a(n, 0.0), best_a(n, 0.0);
  double best = 0.0;  // a = 0 is feasible
  std::vector<int> idx(n - 1, 0);
  auto complete = [&](std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += v[i] * y[i];
    v[n - 1] = -s * y[n - 1];
    return v[n - 1] >= -1e-12 && v[n - 1] <= C + 1e-12;
  };
  while (true) {
    for (std::size_t i = 0; i + 1 < n; ++i) a[i] = C * idx[i] / steps;
    if (complete(a)) {
      const double v = maiclass::optim::dual_objective(K, y, a);
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    std::size_t p = 0;
    while (p < n - 1 && ++idx[p] > steps) idx[p++] = 0;
    if (p == n - 1) break;
  }
  // Pairwise moves preserve the equality: a_i += y_i t, a_j -= y_j t.
  for (double step = C / steps; step > 1e-7; step /= 2.0) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          auto trial = best_a;
          trial[i] += y[i] * step;
          trial[j] -= y[j] * step;
          if (trial[i] < 0 || trial[i] > C || trial[j] < 0 || trial[j] > C) continue;
          const double v = maiclass::optim::dual_objective(K, y, trial);
          if (v < best - 1e-12) {
            best = v;
            best_a = trial;
            improved = true;
          }
        }
    }
  }
  return best;
}

inline std::vector<double> random_labels(Rng& rng, std::size_t n) {
  std::vector<double> y(n);
  for (auto& v : y) v = rng.below(2) ? 1.0 : -1.0;
  y[0] = 1.0;
  y[1] = -1.0;
  return y;
}

}  // namespace testing_support
