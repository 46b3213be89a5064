#pragma once

// Repeated stratified half splits, per-class F1, and averaging over runs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "maiclass/classifiers/classifier.hpp"
#include "maiclass/corpus.hpp"
#include "maiclass/error.hpp"
#include "maiclass/features.hpp"
#include "maiclass/random.hpp"

namespace maiclass {

struct SplitPlan {
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<std::size_t>> train;  // class -> corpus indices
  std::map<std::string, std::vector<std::size_t>> test;

  std::vector<std::size_t> all_train() const { return flatten(train); }
  std::vector<std::size_t> all_test() const { return flatten(test); }

  bool operator==(const SplitPlan&) const = default;

 private:
  static std::vector<std::size_t> flatten(const std::map<std::string, std::vector<std::size_t>>& m) {
    std::vector<std::size_t> out;
    for (const auto& [cls, idx] : m) out.insert(out.end(), idx.begin(), idx.end());
    return out;
  }
};

// Per class: shuffle that class's indices, first ceil(n/2) train, rest test.
inline SplitPlan stratified_split(const Corpus& corpus, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> members;
  for (const auto& cls : corpus.classes) members[cls];
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) members[corpus.documents[i].label].push_back(i);

  SplitPlan plan;
  plan.seed = seed;
  Rng rng(seed);
  for (auto& [cls, idx] : members) {
    if (idx.size() < 2) throw ClassTooSmall(cls);
    rng.shuffle(idx);
    const std::size_t n_train = (idx.size() + 1) / 2;
    plan.train[cls].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    plan.test[cls].assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  return plan;
}

struct ClassF1 {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool degenerate = false;  // precision or recall was 0/0
};

// One-vs-rest F1 per class from the multiclass confusion counts.
inline std::map<std::string, ClassF1> f1_scores(const std::vector<std::string>& gold,
                                                const std::vector<std::string>& pred,
                                                const std::vector<std::string>& classes) {
  if (gold.size() != pred.size()) throw LengthMismatch("gold and predicted label lists differ in length");
  std::map<std::string, ClassF1> out;
  for (const auto& c : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool g = gold[i] == c, p = pred[i] == c;
      tp += g && p;
      fp += !g && p;
      fn += g && !p;
    }
    ClassF1 r;
    if (tp + fp == 0 || tp + fn == 0) r.degenerate = true;
    r.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    r.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (r.precision + r.recall > 0.0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    out[c] = r;
  }
  return out;
}

struct EvalResult {
  ClassifierSpec spec;
  VectorModel model = VectorModel::bernoulli;
  std::vector<std::string> classes;
  std::vector<std::map<std::string, double>> runs;  // per run: class -> F1
  std::map<std::string, double> mean_f1;

  bool operator==(const EvalResult&) const = default;
};

// Seed of run r under a master seed.
inline std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run) {
  return Rng({master_seed, static_cast<std::uint64_t>(run)}).next();
}

inline EvalResult run_experiment(const Corpus& corpus, VectorModel model, const ClassifierSpec& spec, std::size_t runs,
                                 std::size_t vocab_k, std::uint64_t master_seed) {
  if (runs == 0) throw InvalidArgument("runs must be >= 1");
  EvalResult result{spec, model, corpus.classes, {}, {}};
  for (std::size_t r = 0; r < runs; ++r) {
    try {
      const std::uint64_t seed = run_seed(master_seed, r);
      const SplitPlan plan = stratified_split(corpus, seed);

      std::vector<Document> train_docs, test_docs;
      for (auto i : plan.all_train()) train_docs.push_back(corpus.documents[i]);
      for (auto i : plan.all_test()) test_docs.push_back(corpus.documents[i]);

      const Vocabulary vocab = build_vocabulary(train_docs, vocab_k);
      const FeatureMatrix train_fm = build_matrix(train_docs, vocab, model);
      const FeatureMatrix test_fm = build_matrix(test_docs, vocab, model);
      const TrainedModel fitted = train(spec, train_fm, seed);
      const auto predicted = predict(fitted, test_fm.rows);

      std::map<std::string, double> per_class;
      for (const auto& [cls, s] : f1_scores(test_fm.labels, predicted, corpus.classes)) per_class[cls] = s.f1;
      result.runs.push_back(std::move(per_class));
    } catch (const RunError&) {
      throw;
    } catch (const Error& e) {
      throw RunError(r, e);
    }
  }
  for (const auto& cls : corpus.classes) {
    double s = 0.0;
    for (const auto& run : result.runs) s += run.at(cls);
    result.mean_f1[cls] = s / static_cast<double>(runs);
  }
  return result;
}

inline void write_eval_csv_header(std::ostream& os, std::size_t runs) {
  os << "spec,model,class";
  for (std::size_t r = 1; r <= runs; ++r) os << ",run_" << r;
  os << ",mean\n";
}

// Rows: spec, model, class, run_1..run_n, mean. Six decimals, '.' separator.
inline void write_eval_csv_rows(std::ostream& os, const EvalResult& res) {
  for (const auto& cls : res.classes) {
    os << to_string(res.spec.algorithm) << ',' << to_string(res.model) << ',';
    detail::write_csv_field(os, cls);
    for (const auto& run : res.runs) os << fmt::format(",{:.6f}", run.at(cls));
    os << fmt::format(",{:.6f}\n", res.mean_f1.at(cls));
  }
}

}  // namespace maiclass
