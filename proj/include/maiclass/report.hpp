#pragma once

// Published score table as a fixture, and every aggregate derived from it:
// block statistics, row sums, per-interest sums and means, medians and the
// Mann-Whitney comparisons between selected score sets.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "maiclass/classifiers/classifier.hpp"
#include "maiclass/error.hpp"
#include "maiclass/features.hpp"
#include "maiclass/stats.hpp"

namespace maiclass::report {

enum class CorpusId { vk_ru, t_ru, t_en };
enum class Mai { football, rock, vegetarianism };

inline constexpr std::array<CorpusId, 3> kCorpora = {CorpusId::vk_ru, CorpusId::t_ru, CorpusId::t_en};
inline constexpr std::array<Mai, 3> kMais = {Mai::football, Mai::rock, Mai::vegetarianism};

inline std::string_view to_string(CorpusId c) {
  switch (c) {
    case CorpusId::vk_ru: return "vk_ru";
    case CorpusId::t_ru: return "t_ru";
    case CorpusId::t_en: return "t_en";
  }
  return "?";
}

inline std::string_view column_label(CorpusId c) {
  switch (c) {
    case CorpusId::vk_ru: return "Vk Ru";
    case CorpusId::t_ru: return "T Ru";
    case CorpusId::t_en: return "T En";
  }
  return "?";
}

inline std::string_view to_string(Mai m) {
  switch (m) {
    case Mai::football: return "F";
    case Mai::rock: return "R";
    case Mai::vegetarianism: return "V";
  }
  return "?";
}

inline std::string_view mai_name(Mai m) {
  switch (m) {
    case Mai::football: return "Football";
    case Mai::rock: return "Rock";
    case Mai::vegetarianism: return "Vegetarianism";
  }
  return "?";
}

inline std::size_t index_of(VectorModel m) { return static_cast<std::size_t>(m); }
inline std::size_t index_of(Algorithm a) { return static_cast<std::size_t>(a); }
inline std::size_t index_of(CorpusId c) { return static_cast<std::size_t>(c); }
inline std::size_t index_of(Mai m) { return static_cast<std::size_t>(m); }

// 3 vector models x 12 classifiers x 3 corpora x 3 interests.
class ScoreTable {
 public:
  double at(VectorModel m, Algorithm a, CorpusId c, Mai i) const {
    return cells_[index_of(m)][index_of(a)][index_of(c)][index_of(i)];
  }
  void set(VectorModel m, Algorithm a, CorpusId c, Mai i, double v) {
    cells_[index_of(m)][index_of(a)][index_of(c)][index_of(i)] = v;
  }

  // The nine cells of one row, corpus-major like the printed table.
  std::vector<double> row(VectorModel m, Algorithm a) const {
    std::vector<double> out;
    for (auto c : kCorpora)
      for (auto i : kMais) out.push_back(at(m, a, c, i));
    return out;
  }

  std::vector<double> block(VectorModel m) const {
    std::vector<double> out;
    for (auto a : kAllAlgorithms) {
      const auto r = row(m, a);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }

 private:
  std::array<std::array<std::array<std::array<double, 3>, 3>, 12>, 3> cells_{};
};

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

inline std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

inline CorpusId parse_corpus(const std::string& s, std::size_t line) {
  for (auto c : kCorpora)
    if (to_string(c) == s) return c;
  throw ParseError(line, "unknown corpus '" + s + "'");
}

inline Mai parse_mai(const std::string& s, std::size_t line) {
  for (auto m : kMais)
    if (to_string(m) == s) return m;
  throw ParseError(line, "unknown interest '" + s + "'");
}

}  // namespace detail

// Tab-separated fixture: header "model classifier corpus mai f1" and one line
// per cell. All 324 cells must be present with values in [0, 1].
inline ScoreTable load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  ScoreTable table;
  std::array<bool, 324> seen{};
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (header) {
      header = false;
      if (line.rfind("model", 0) == 0) continue;
    }
    const auto f = detail::split(line, '\t');
    if (f.size() != 5) throw ParseError(line_no, "expected 5 tab-separated fields");
    VectorModel model;
    Algorithm algo;
    try {
      model = parse_vector_model(f[0]);
      algo = parse_algorithm(f[1]);
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
    const CorpusId corpus = detail::parse_corpus(f[2], line_no);
    const Mai mai = detail::parse_mai(f[3], line_no);
    const std::string where = fmt::format("{}/{}/{}/{}", to_string(model), to_string(algo), to_string(corpus), to_string(mai));
    if (f[4].empty()) throw MissingCell(where);
    const auto value = detail::parse_double(f[4]);
    if (!value) throw ParseError(line_no, "not a number: '" + f[4] + "'");
    if (!(*value >= 0.0 && *value <= 1.0)) throw RangeError(where + " = " + f[4] + " outside [0,1]");

    const std::size_t key = ((index_of(model) * 12 + index_of(algo)) * 3 + index_of(corpus)) * 3 + index_of(mai);
    if (seen[key]) throw ParseError(line_no, "duplicate cell " + where);
    seen[key] = true;
    table.set(model, algo, corpus, mai, *value);
  }
  for (auto m : kAllVectorModels)
    for (auto a : kAllAlgorithms)
      for (auto c : kCorpora)
        for (auto i : kMais) {
          const std::size_t key = ((index_of(m) * 12 + index_of(a)) * 3 + index_of(c)) * 3 + index_of(i);
          if (!seen[key])
            throw MissingCell(fmt::format("{}/{}/{}/{}", to_string(m), to_string(a), to_string(c), to_string(i)));
        }
  return table;
}

// Which frequency block contributes each classifier's second score.
enum class Variant { plain, normalized, either };

struct SelectionRule {
  std::map<Algorithm, Variant> assignment;

  // The stated choice: plain for SVM lin., Bern. NB, LR, DT; normalized for
  // the other SVM kernels and both networks; either for Mult./Gaus. NB. K-N
  // is not named, hence the parameter.
  static SelectionRule published(Variant knn = Variant::plain) {
    SelectionRule r;
    for (auto a : {Algorithm::svm_linear, Algorithm::nb_bernoulli, Algorithm::logistic_regression,
                   Algorithm::decision_tree})
      r.assignment[a] = Variant::plain;
    for (auto a : {Algorithm::svm_poly, Algorithm::svm_sigmoid, Algorithm::svm_rbf, Algorithm::mlp_lbfgs,
                   Algorithm::mlp_adam})
      r.assignment[a] = Variant::normalized;
    r.assignment[Algorithm::nb_multinomial] = Variant::either;
    r.assignment[Algorithm::nb_gaussian] = Variant::either;
    r.assignment[Algorithm::knn] = knn;
    return r;
  }
};

// scores[mai][corpus]: 12 Bernoulli scores followed by the 12 selected
// frequency-block scores, classifiers in table order.
struct ScoreSets {
  std::array<std::array<std::vector<double>, 3>, 3> scores;

  const std::vector<double>& of(Mai m, CorpusId c) const { return scores[index_of(m)][index_of(c)]; }

  std::vector<double> of(Mai m) const {
    std::vector<double> out;
    for (auto c : kCorpora) out.insert(out.end(), of(m, c).begin(), of(m, c).end());
    return out;
  }
};

inline ScoreSets select_scores(const ScoreTable& table, const SelectionRule& rule) {
  for (auto a : kAllAlgorithms)
    if (!rule.assignment.contains(a)) throw IncompleteRule(std::string(to_string(a)) + " has no frequency variant");
  ScoreSets sets;
  for (auto m : kMais)
    for (auto c : kCorpora) {
      auto& v = sets.scores[index_of(m)][index_of(c)];
      for (auto a : kAllAlgorithms) v.push_back(table.at(VectorModel::bernoulli, a, c, m));
      for (auto a : kAllAlgorithms) {
        const Variant variant = rule.assignment.at(a);
        const VectorModel src = variant == Variant::normalized ? VectorModel::norm_freq : VectorModel::plain_freq;
        v.push_back(table.at(src, a, c, m));
      }
    }
  return sets;
}

struct MaiRow {
  double total = 0.0;
  std::array<double, 3> corpus_sum{};  // vk_ru, t_ru, t_en
  double vk_mean = 0.0;
  double twitter_mean = 0.0;
  double ru_mean = 0.0;
  double en_mean = 0.0;
};

struct MaiSummary {
  std::array<MaiRow, 3> rows;
  const MaiRow& of(Mai m) const { return rows[index_of(m)]; }
};

inline MaiSummary mai_summary(const ScoreSets& sets) {
  MaiSummary s;
  for (auto m : kMais) {
    MaiRow& r = s.rows[index_of(m)];
    std::array<double, 3> size{};
    for (auto c : kCorpora) {
      r.corpus_sum[index_of(c)] = stats::accurate_sum(sets.of(m, c));
      size[index_of(c)] = static_cast<double>(sets.of(m, c).size());
    }
    const auto [vk, tru, ten] = r.corpus_sum;
    r.total = stats::accurate_sum(sets.of(m));
    r.vk_mean = vk / size[0];
    r.twitter_mean = (tru + ten) / (size[1] + size[2]);
    r.ru_mean = (vk + tru) / (size[0] + size[1]);
    r.en_mean = ten / size[2];
  }
  return s;
}

struct Comparison {
  std::string name;
  std::string first;
  std::string second;
  stats::UTestResult result;
};

struct BlockStats {
  VectorModel model;
  double mean = 0.0;
  std::size_t ones = 0;
};

struct RowSum {
  VectorModel model;
  Algorithm algorithm;
  double sum = 0.0;
};

struct ScoreReport {
  Variant knn_variant = Variant::plain;
  bool continuity = false;
  std::vector<BlockStats> blocks;
  std::vector<RowSum> row_sums;  // every (model, classifier) row, table order
  MaiSummary summary;
  std::array<double, 3> medians{};
  std::array<std::size_t, 3> set_sizes{};
  std::vector<Comparison> comparisons;

  double row_sum(VectorModel m, Algorithm a) const {
    for (const auto& r : row_sums)
      if (r.model == m && r.algorithm == a) return r.sum;
    throw InvalidArgument("no such row");
  }
  const Comparison& comparison(std::string_view name) const {
    for (const auto& c : comparisons)
      if (c.name == name) return c;
    throw InvalidArgument("no comparison named " + std::string(name));
  }
};

// The six published comparisons. The published statistic is U of the first
// argument, which for three of them is the sample named second in prose.
inline std::vector<Comparison> published_comparisons(const ScoreSets& sets, bool continuity) {
  auto run = [&](std::string name, std::string first, const std::vector<double>& a, std::string second,
                 const std::vector<double>& b) {
    return Comparison{std::move(name), std::move(first), std::move(second),
                      stats::mann_whitney_u(a, b, continuity, stats::PValueMethod::asymptotic)};
  };
  const auto F = sets.of(Mai::football), R = sets.of(Mai::rock), V = sets.of(Mai::vegetarianism);
  std::vector<Comparison> out;
  out.push_back(run("rock_vs_vegetarianism", "Rock", R, "Vegetarianism", V));
  out.push_back(run("rock_vs_football", "Football", F, "Rock", R));
  out.push_back(run("vegetarianism_vs_football", "Football", F, "Vegetarianism", V));
  out.push_back(run("football_vk_ru_vs_t_ru", "Football Vk Ru", sets.of(Mai::football, CorpusId::vk_ru),
                    "Football T Ru", sets.of(Mai::football, CorpusId::t_ru)));
  out.push_back(run("football_t_ru_vs_t_en", "Football T En", sets.of(Mai::football, CorpusId::t_en),
                    "Football T Ru", sets.of(Mai::football, CorpusId::t_ru)));
  out.push_back(run("rock_vk_ru_vs_t_ru", "Rock Vk Ru", sets.of(Mai::rock, CorpusId::vk_ru), "Rock T Ru",
                    sets.of(Mai::rock, CorpusId::t_ru)));
  return out;
}

inline ScoreReport reproduce_paper_stats(const ScoreTable& table, const SelectionRule& rule, bool continuity = false) {
  ScoreReport rep;
  rep.knn_variant = rule.assignment.contains(Algorithm::knn) ? rule.assignment.at(Algorithm::knn) : Variant::plain;
  rep.continuity = continuity;
  for (auto m : kAllVectorModels) {
    const auto d = stats::describe(table.block(m));
    rep.blocks.push_back({m, d.mean, d.count_of(1.0)});
    for (auto a : kAllAlgorithms) rep.row_sums.push_back({m, a, stats::accurate_sum(table.row(m, a))});
  }
  const ScoreSets sets = select_scores(table, rule);
  rep.summary = mai_summary(sets);
  for (auto m : kMais) {
    const auto all = sets.of(m);
    rep.medians[index_of(m)] = stats::describe(all).median;
    rep.set_sizes[index_of(m)] = all.size();
  }
  rep.comparisons = published_comparisons(sets, continuity);
  return rep;
}

enum class Format { markdown, csv };

inline Format parse_format(std::string_view s) {
  if (s == "markdown" || s == "md") return Format::markdown;
  if (s == "csv") return Format::csv;
  throw InvalidArgument("unknown format '" + std::string(s) + "'");
}

inline std::string_view model_title(VectorModel m) {
  switch (m) {
    case VectorModel::bernoulli: return "Bernoulli";
    case VectorModel::plain_freq: return "Plain frequency";
    case VectorModel::norm_freq: return "Normalized frequency";
  }
  return "?";
}

// Three-decimal display with half-up rounding. Inputs are sums and means of
// three-decimal scores, so exact decimal ties (0.9055) are nudged past the
// binary representation error before rounding.
inline std::string fixed3(double x) {
  const double scaled = std::floor(x * 1000.0 + 0.5 + 1e-7);
  return fmt::format("{:.3f}", scaled / 1000.0);
}

// Interest sums and means in the published column order.
inline std::string render(const MaiSummary& s, Format format) {
  auto cells = [](const MaiRow& r) {
    return std::vector<std::string>{fixed3(r.total),        fixed3(r.corpus_sum[0]), fixed3(r.corpus_sum[1]),
                                    fixed3(r.corpus_sum[2]), fixed3(r.vk_mean),       fixed3(r.twitter_mean),
                                    fixed3(r.ru_mean),       fixed3(r.en_mean)};
  };
  std::string out;
  if (format == Format::markdown) {
    out += "| MaI | Total | Vk Ru | T Ru | T En | Vk, mean | T, mean | Ru, mean | En, mean |\n";
    out += "|---|---|---|---|---|---|---|---|---|\n";
    for (auto m : kMais) {
      const auto& r = s.of(m);
      out += fmt::format("| {} | {} |\n", to_string(m), fmt::join(cells(r), " | "));
    }
  } else {
    out += "mai,total,vk_ru,t_ru,t_en,vk_mean,t_mean,ru_mean,en_mean\n";
    for (auto m : kMais) {
      const auto& r = s.of(m);
      out += fmt::format("{},{}\n", to_string(m), fmt::join(cells(r), ","));
    }
  }
  return out;
}

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::plain: return "plain";
    case Variant::normalized: return "normalized";
    case Variant::either: return "either";
  }
  return "?";
}

inline std::string render(const ScoreReport& rep, Format format) {
  std::string out;
  if (format == Format::csv) {
    out += "section,item,value\n";
    for (const auto& b : rep.blocks) {
      out += fmt::format("block_mean,{},{}\n", to_string(b.model), fixed3(b.mean));
      out += fmt::format("block_ones,{},{}\n", to_string(b.model), b.ones);
    }
    for (const auto& r : rep.row_sums)
      out += fmt::format("row_sum,{}/{},{}\n", to_string(r.model), to_string(r.algorithm), fixed3(r.sum));
    for (auto m : kMais) {
      const auto& r = rep.summary.of(m);
      const auto k = to_string(m);
      out += fmt::format("mai_total,{},{}\n", k, fixed3(r.total));
      for (auto c : kCorpora) out += fmt::format("mai_sum,{}/{},{}\n", k, to_string(c), fixed3(r.corpus_sum[index_of(c)]));
      out += fmt::format("mai_mean,{}/vk,{}\n", k, fixed3(r.vk_mean));
      out += fmt::format("mai_mean,{}/t,{}\n", k, fixed3(r.twitter_mean));
      out += fmt::format("mai_mean,{}/ru,{}\n", k, fixed3(r.ru_mean));
      out += fmt::format("mai_mean,{}/en,{}\n", k, fixed3(r.en_mean));
      out += fmt::format("set_size,{},{}\n", k, rep.set_sizes[index_of(m)]);
      out += fmt::format("median,{},{}\n", k, fixed3(rep.medians[index_of(m)]));
    }
    for (const auto& c : rep.comparisons) {
      out += fmt::format("mann_whitney_u,{},{}\n", c.name, fixed3(c.result.u1));
      out += fmt::format("mann_whitney_p,{},{}\n", c.name, fixed3(c.result.p_two_sided));
    }
    return out;
  }

  out += "# Score table reproduction\n\n";
  out += fmt::format("K-N frequency variant: {}. Continuity correction: {}.\n\n", to_string(rep.knn_variant),
                     rep.continuity ? "on" : "off");

  out += "## Vector model blocks\n\n| Model | Mean | Cells equal to 1.0 |\n|---|---|---|\n";
  for (const auto& b : rep.blocks) out += fmt::format("| {} | {} | {} |\n", model_title(b.model), fixed3(b.mean), b.ones);

  out += "\n## Row sums over nine columns\n\n| Classifier | Bernoulli | Plain frequency | Normalized frequency |\n";
  out += "|---|---|---|---|\n";
  for (auto a : kAllAlgorithms)
    out += fmt::format("| {} | {} | {} | {} |\n", display_name(a), fixed3(rep.row_sum(VectorModel::bernoulli, a)),
                       fixed3(rep.row_sum(VectorModel::plain_freq, a)), fixed3(rep.row_sum(VectorModel::norm_freq, a)));

  out += "\n## Sums of MaI scores\n\n";
  out += render(rep.summary, Format::markdown);

  out += "\n## Selected score sets\n\n| MaI | Size | Median |\n|---|---|---|\n";
  for (auto m : kMais)
    out += fmt::format("| {} | {} | {} |\n", mai_name(m), rep.set_sizes[index_of(m)], fixed3(rep.medians[index_of(m)]));

  out += "\n## Mann-Whitney U (two-sided)\n\n| First | Second | n1 | n2 | Statistic | p-value |\n";
  out += "|---|---|---|---|---|---|\n";
  for (const auto& c : rep.comparisons)
    out += fmt::format("| {} | {} | {} | {} | U={:.1f} | p={} |\n", c.first, c.second, c.result.n1, c.result.n2,
                       c.result.u1, fixed3(c.result.p_two_sided));
  return out;
}

// ---------------------------------------------------------------------------
// Small CSV inputs for the statistics commands.

// Numeric sample: values separated by commas and/or newlines. A non-numeric
// first line is treated as a header.
inline std::vector<double> load_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split(line, ',');
    bool header_line = false;
    for (const auto& f : fields) {
      if (f.empty()) continue;
      const auto v = detail::parse_double(f);
      if (!v) {
        if (line_no == 1 && values.empty()) {
          header_line = true;
          break;
        }
        throw ParseError(line_no, "not a number: '" + f + "'");
      }
      values.push_back(*v);
    }
    if (header_line) continue;
  }
  return values;
}

// Rater table: header "rater,<sample>,..." then one 0/1 row per rater.
inline stats::AgreementTable load_agreement_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  stats::AgreementTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = detail::split(line, ',');
    if (t.columns.empty()) {
      if (f.size() < 2) throw ParseError(line_no, "header needs a rater column and at least one sample");
      t.columns.assign(f.begin() + 1, f.end());
      continue;
    }
    if (f.size() != t.columns.size() + 1) throw ParseError(line_no, "row width differs from header");
    t.raters.push_back(f[0]);
    std::vector<int> row;
    for (std::size_t c = 1; c < f.size(); ++c) {
      if (f[c] != "0" && f[c] != "1") throw ParseError(line_no, "cell '" + f[c] + "' is not 0 or 1");
      row.push_back(f[c] == "1");
    }
    t.cells.push_back(std::move(row));
  }
  if (t.cells.empty()) throw EmptyTable("agreement table has no rows");
  return t;
}

}  // namespace maiclass::report
