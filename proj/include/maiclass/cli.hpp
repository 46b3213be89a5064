#pragma once

// maiclass command line: validate | eval | utest | agreement | reproduce.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "maiclass/corpus.hpp"
#include "maiclass/eval.hpp"
#include "maiclass/report.hpp"
#include "maiclass/stats.hpp"

namespace maiclass::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

// Writes text to --out when given, stdout otherwise.
inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError("cannot write " + out_path);
  f << text;
  if (!f) throw IoError("write failure on " + out_path);
}

inline std::string render_eval(const std::vector<EvalResult>& results, std::size_t runs, report::Format format) {
  std::ostringstream os;
  if (format == report::Format::csv) {
    write_eval_csv_header(os, runs);
    for (const auto& r : results) write_eval_csv_rows(os, r);
    return os.str();
  }
  os << "| Classifier | Model | Class |";
  for (std::size_t r = 1; r <= runs; ++r) os << " Run " << r << " |";
  os << " Mean F1 |\n|---|---|---|";
  for (std::size_t r = 0; r <= runs; ++r) os << "---|";
  os << '\n';
  for (const auto& res : results)
    for (const auto& cls : res.classes) {
      os << "| " << to_string(res.spec.algorithm) << " | " << to_string(res.model) << " | " << cls << " |";
      for (const auto& run : res.runs) os << fmt::format(" {:.6f} |", run.at(cls));
      os << fmt::format(" {:.6f} |\n", res.mean_f1.at(cls));
    }
  return os.str();
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interest classification of community pages: corpora, experiments, statistics", "maiclass"};
  app.require_subcommand(1);

  // validate
  std::string validate_path;
  std::size_t per_class = 30;
  auto* validate = app.add_subcommand("validate", "Check class balance and empty documents of a JSONL corpus");
  validate->add_option("corpus", validate_path, "JSONL corpus file")->required();
  validate->add_option("--per-class", per_class, "Expected documents per class")->capture_default_str();

  // eval
  std::string eval_path, model_name = "bernoulli", algo_name = "all", eval_out, eval_format = "csv";
  std::size_t runs = 5, vocab = 1000;
  std::uint64_t seed = 0;
  std::vector<std::string> model_choices = {"bernoulli", "plain", "norm", "all"};
  std::vector<std::string> algo_choices;
  for (auto a : kAllAlgorithms) algo_choices.emplace_back(to_string(a));
  algo_choices.emplace_back("all");
  auto* eval = app.add_subcommand("eval", "Repeated split evaluation of classifiers on a corpus");
  eval->add_option("corpus", eval_path, "JSONL corpus file")->required();
  eval->add_option("--model", model_name, "Vector model")->check(CLI::IsMember(model_choices))->capture_default_str();
  eval->add_option("--algo", algo_name, "Classifier id or 'all'")->check(CLI::IsMember(algo_choices))->capture_default_str();
  eval->add_option("--runs", runs, "Number of random splits")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--seed", seed, "Master seed")->capture_default_str();
  eval->add_option("--vocab", vocab, "Vocabulary size")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--out", eval_out, "Output file (default stdout)");
  eval->add_option("--format", eval_format, "Output format")->check(CLI::IsMember({"csv", "markdown"}))->capture_default_str();

  // utest
  std::string sample_a, sample_b;
  bool no_continuity = false;
  auto* utest = app.add_subcommand("utest", "Two-sided Mann-Whitney U test of two numeric samples");
  utest->add_option("csv-a", sample_a, "First sample")->required();
  utest->add_option("csv-b", sample_b, "Second sample")->required();
  utest->add_flag("--no-continuity", no_continuity, "Disable the 0.5 continuity correction");

  // agreement
  std::string agreement_path;
  auto* agreement = app.add_subcommand("agreement", "Percent agreement per column of a 0/1 rater table");
  agreement->add_option("csv", agreement_path, "Rater table")->required();

  // reproduce
  std::string fixture, knn_name = "plain", reproduce_out, reproduce_format = "markdown";
  bool continuity = false;
  auto* reproduce = app.add_subcommand("reproduce", "Recompute every aggregate of the published score table");
  reproduce->add_option("--fixture", fixture, "Score table fixture (TSV)")->required();
  reproduce->add_option("--knn", knn_name, "Frequency block used for K-N")
      ->check(CLI::IsMember({"plain", "normalized"}))
      ->capture_default_str();
  reproduce->add_option("--out", reproduce_out, "Output file (default stdout)");
  reproduce->add_option("--format", reproduce_format, "Output format")
      ->check(CLI::IsMember({"markdown", "csv"}))
      ->capture_default_str();
  reproduce->add_flag("--continuity", continuity, "Apply the 0.5 continuity correction to p-values");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) {
      const Corpus c = load_corpus(validate_path);
      const auto rep = validate_corpus(c, per_class);
      out << "corpus: " << c.name << " (" << c.documents.size() << " documents, " << c.classes.size() << " classes)\n";
      for (const auto& [cls, n] : rep.per_class) out << "  " << cls << ": " << n << '\n';
      for (const auto& cls : rep.unbalanced_classes)
        out << "unbalanced class: " << cls << " (expected " << per_class << ")\n";
      for (const auto& id : rep.empty_documents) out << "empty document: " << id << '\n';
      out << (rep.pass ? "PASS" : "FAIL") << '\n';
      return rep.pass ? kExitOk : kExitDomain;
    }

    if (*eval) {
      const Corpus c = load_corpus(eval_path);
      std::vector<VectorModel> models;
      if (model_name == "all") models.assign(std::begin(kAllVectorModels), std::end(kAllVectorModels));
      else models.push_back(parse_vector_model(model_name));
      std::vector<Algorithm> algos;
      if (algo_name == "all") algos.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
      else algos.push_back(parse_algorithm(algo_name));

      std::vector<EvalResult> results;
      for (auto m : models)
        for (auto a : algos) results.push_back(run_experiment(c, m, ClassifierSpec{a, {}}, runs, vocab, seed));
      detail::emit(detail::render_eval(results, runs, report::parse_format(eval_format)), eval_out, out);
      return kExitOk;
    }

    if (*utest) {
      const auto a = report::load_sample_csv(sample_a);
      const auto b = report::load_sample_csv(sample_b);
      const auto r = stats::mann_whitney_u(a, b, !no_continuity);
      out << fmt::format("statistic=U1={:.1f} U2={:.1f} n1={} n2={}\n", r.u1, r.u2, r.n1, r.n2);
      out << fmt::format("z={:.6f} pvalue={:.6f} two-sided method={} continuity={} tie_groups={}\n", r.z, r.p_two_sided,
                         r.exact ? "exact" : "asymptotic", r.continuity_applied ? "on" : "off", r.tie_groups);
      return kExitOk;
    }

    if (*agreement) {
      const auto t = report::load_agreement_csv(agreement_path);
      const auto pct = t.percent();
      out << "sample,agreement_percent\n";
      for (std::size_t c = 0; c < t.columns.size(); ++c) out << t.columns[c] << ',' << fmt::format("{:g}", pct[c]) << '\n';
      return kExitOk;
    }

    if (*reproduce) {
      const auto table = report::load_fixture(fixture);
      const auto rule =
          report::SelectionRule::published(knn_name == "plain" ? report::Variant::plain : report::Variant::normalized);
      const auto rep = report::reproduce_paper_stats(table, rule, continuity);
      detail::emit(report::render(rep, report::parse_format(reproduce_format)), reproduce_out, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace maiclass::cli
