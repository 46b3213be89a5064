#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "maiclass/corpus.hpp"
#include "maiclass/error.hpp"
#include "maiclass/matrix.hpp"

namespace maiclass {

enum class VectorModel { bernoulli, plain_freq, norm_freq };

inline std::string_view to_string(VectorModel m) {
  switch (m) {
    case VectorModel::bernoulli: return "bernoulli";
    case VectorModel::plain_freq: return "plain";
    case VectorModel::norm_freq: return "norm";
  }
  return "?";
}

// Accepts both the short CLI names and the long enum names.
inline VectorModel parse_vector_model(std::string_view s) {
  if (s == "bernoulli") return VectorModel::bernoulli;
  if (s == "plain" || s == "plain_freq") return VectorModel::plain_freq;
  if (s == "norm" || s == "norm_freq" || s == "normalized") return VectorModel::norm_freq;
  throw InvalidArgument("unknown vector model '" + std::string(s) + "'");
}

inline constexpr VectorModel kAllVectorModels[] = {VectorModel::bernoulli, VectorModel::plain_freq,
                                                   VectorModel::norm_freq};

// Top-k tokens by corpus frequency; descending count, ties lexicographic.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary from_counts(const std::unordered_map<std::string, std::size_t>& counts, std::size_t k) {
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);

    Vocabulary v;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      v.tokens_.push_back(ranked[i].first);
      v.counts_.push_back(ranked[i].second);
      v.index_.emplace(ranked[i].first, i);
    }
    return v;
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t count(std::size_t i) const { return counts_.at(i); }

  // Position of a token, or size() when absent.
  std::size_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? size() : it->second;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Vocabulary build_vocabulary(std::span<const Document> docs, std::size_t k) {
  if (k == 0) throw InvalidArgument("vocabulary size must be >= 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& d : docs)
    for (const auto& t : d.tokens) ++counts[t];
  if (counts.empty()) throw EmptyCorpus("no tokens to build a vocabulary from");
  return Vocabulary::from_counts(counts, k);
}

inline std::vector<double> vectorize(std::span<const std::string> tokens, const Vocabulary& vocab,
                                     VectorModel model) {
  if (vocab.empty()) throw InvalidArgument("empty vocabulary");
  std::vector<double> v(vocab.size(), 0.0);
  for (const auto& t : tokens) {
    const std::size_t i = vocab.index_of(t);
    if (i < vocab.size()) v[i] += 1.0;
  }
  switch (model) {
    case VectorModel::bernoulli:
      for (double& x : v) x = x > 0.0 ? 1.0 : 0.0;
      break;
    case VectorModel::plain_freq:
      break;
    case VectorModel::norm_freq:
      if (!tokens.empty())
        for (double& x : v) x /= static_cast<double>(tokens.size());
      break;
  }
  return v;
}

struct FeatureMatrix {
  VectorModel model = VectorModel::bernoulli;
  Vocabulary vocab;
  Matrix rows;
  std::vector<std::string> labels;
};

inline FeatureMatrix build_matrix(std::span<const Document> docs, const Vocabulary& vocab, VectorModel model) {
  if (docs.empty()) throw EmptyCorpus("no documents to vectorize");
  FeatureMatrix fm{model, vocab, Matrix(docs.size(), vocab.size()), {}};
  fm.labels.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto v = vectorize(docs[i].tokens, vocab, model);
    std::copy(v.begin(), v.end(), fm.rows.row(i).begin());
    fm.labels.push_back(docs[i].label);
  }
  return fm;
}

namespace detail {

inline void write_csv_field(std::ostream& os, std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    os << s;
    return;
  }
  os << '"';
  for (char c : s) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

}  // namespace detail

// Debug dump: vocabulary header, one row per document, trailing label column.
inline void write_matrix_csv(std::ostream& os, const FeatureMatrix& fm) {
  for (const auto& t : fm.vocab.tokens()) {
    detail::write_csv_field(os, t);
    os << ',';
  }
  os << "label\n";
  for (std::size_t r = 0; r < fm.rows.rows(); ++r) {
    for (double x : fm.rows.row(r)) os << x << ',';
    detail::write_csv_field(os, fm.labels[r]);
    os << '\n';
  }
}

}  // namespace maiclass
