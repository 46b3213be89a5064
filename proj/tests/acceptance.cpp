// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "maiclass/cli.hpp"
#include "support.hpp"

using namespace maiclass;
using namespace testing_support;

namespace {

int failures = 0;

void verdict(const char* id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  fmt::print("{} {} {}{}\n", ok ? "PASS" : "FAIL", id, what, detail.empty() ? "" : " [" + detail + "]");
  std::fflush(stdout);
}

// Runs a check, turning an escaped exception into a failure.
template <class F>
void check(const char* id, const std::string& what, F&& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  verdict(id, ok, what, detail);
}

const report::ScoreTable& table() {
  static const auto t = report::load_fixture(tables_dir() / "table2.tsv");
  return t;
}

const report::ScoreReport& reproduced() {
  static const auto r = report::reproduce_paper_stats(table(), report::SelectionRule::published(report::Variant::plain));
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool row_sums(std::string& d) {
  using report::fixed3;
  const std::tuple<VectorModel, Algorithm, const char*> want[] = {
      {VectorModel::bernoulli, Algorithm::logistic_regression, "8.976"},
      {VectorModel::bernoulli, Algorithm::mlp_lbfgs, "8.950"},
      {VectorModel::bernoulli, Algorithm::nb_multinomial, "8.938"},
      {VectorModel::plain_freq, Algorithm::svm_rbf, "5.324"},
      {VectorModel::plain_freq, Algorithm::svm_sigmoid, "2.156"},
  };
  bool ok = true;
  for (const auto& [m, a, v] : want) {
    const auto got = fixed3(reproduced().row_sum(m, a));
    d += fmt::format("{}/{}={} ", to_string(m), to_string(a), got);
    ok = ok && got == v;
  }
  return ok;
}

bool blocks(std::string& d) {
  const double want[] = {0.958, 0.819, 0.872};
  bool ok = reproduced().blocks[0].ones == 29;
  d = fmt::format("ones={}", reproduced().blocks[0].ones);
  for (std::size_t i = 0; i < 3; ++i) {
    d += fmt::format(" mean[{}]={:.4f}", to_string(reproduced().blocks[i].model), reproduced().blocks[i].mean);
    ok = ok && std::abs(reproduced().blocks[i].mean - want[i]) <= 0.001;
  }
  return ok;
}

bool interest_sums(std::string& d) {
  using report::fixed3;
  const auto& s = reproduced().summary;
  const auto& f = s.of(report::Mai::football);
  const std::pair<double, const char*> want[] = {
      {f.total, "67.040"},        {f.corpus_sum[0], "20.570"}, {f.corpus_sum[1], "22.816"},
      {f.corpus_sum[2], "23.654"}, {f.vk_mean, "0.857"},        {f.twitter_mean, "0.968"},
      {f.ru_mean, "0.904"},        {f.en_mean, "0.986"},
      {s.of(report::Mai::rock).total, "66.700"},
      {s.of(report::Mai::vegetarianism).total, "66.810"},
  };
  bool ok = true;
  for (const auto& [v, w] : want) {
    const auto got = fixed3(v);
    if (got != w) d += fmt::format("got {} want {} ", got, w);
    ok = ok && got == w;
  }
  if (ok) d = "football row, rock and vegetarianism totals";
  return ok;
}

bool medians(std::string& d) {
  const char* want[] = {"0.982", "0.971", "0.968"};
  bool ok = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto got = report::fixed3(reproduced().medians[i]);
    d += got + " ";
    ok = ok && got == want[i] && reproduced().set_sizes[i] == 72;
  }
  return ok;
}

bool mann_whitney(std::string& d) {
  const std::tuple<const char*, double, double> want[] = {
      {"rock_vs_vegetarianism", 2562.0, 0.904},   {"rock_vs_football", 3130.5, 0.03},
      {"vegetarianism_vs_football", 3107.5, 0.038}, {"football_vk_ru_vs_t_ru", 151.5, 0.004},
      {"football_t_ru_vs_t_en", 334.5, 0.3},        {"rock_vk_ru_vs_t_ru", 269.0, 0.695},
  };
  bool ok = true;
  for (const auto& [name, u, p] : want) {
    const auto& r = reproduced().comparison(name).result;
    d += fmt::format("U={:.1f} p={:.4f}; ", r.u1, r.p_two_sided);
    ok = ok && r.u1 == u && std::abs(r.p_two_sided - p) <= 0.02;
  }
  d += "K-N plain, no continuity";
  return ok;
}

bool agreement(std::string& d) {
  const auto pct = report::load_agreement_csv(tables_dir() / "table1.csv").percent();
  for (double v : pct) d += fmt::format("{:g} ", v);
  return pct == std::vector<double>{50, 100, 100, 100, 90};
}

bool synthetic(std::string& d) {
  const auto start = std::chrono::steady_clock::now();
  const Corpus c = synthetic_corpus(2024);
  int bern_perfect = 0, plain_good = 0;
  std::string misses;
  for (auto a : kAllAlgorithms) {
    const auto rb = run_experiment(c, VectorModel::bernoulli, {a, {}}, 5, 1000, 7);
    const auto rp = run_experiment(c, VectorModel::plain_freq, {a, {}}, 5, 1000, 7);
    bool b_ok = true, p_ok = true;
    for (const auto& cls : c.classes) {
      b_ok = b_ok && rb.mean_f1.at(cls) == 1.0;
      p_ok = p_ok && rp.mean_f1.at(cls) >= 0.95;
    }
    bern_perfect += b_ok;
    plain_good += p_ok;
    if (!b_ok) misses += fmt::format(" bernoulli:{}", to_string(a));
    if (!p_ok) misses += fmt::format(" plain:{}", to_string(a));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  d = fmt::format("bernoulli F1=1.0: {}/12, plain F1>=0.95: {}/12, {:.1f}s{}", bern_perfect, plain_good, secs, misses);
  return bern_perfect == 12 && plain_good >= 10 && secs < 60.0;
}

bool gradients(std::string& d) {
  Rng rng(314);
  double worst_lr = 0.0, worst_mlp = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix X = random_matrix(rng, 12, 5);
    std::vector<double> signs(12);
    for (auto& s : signs) s = rng.below(2) ? 1.0 : -1.0;
    const logistic::BinaryObjective lr(X, signs, rng.uniform(0.1, 10.0));
    std::vector<double> w(lr.dimension());
    for (auto& v : w) v = rng.uniform(-2, 2);
    worst_lr = std::max(worst_lr, gradient_error(lr, w));

    std::vector<std::size_t> y(12);
    for (auto& v : y) v = rng.below(3);
    const mlp::Objective net(X, y, mlp::Shape{5, 7, 3}, 1e-2);
    const auto params = mlp::initial_params(net.shape(), rng);
    worst_mlp = std::max(worst_mlp, gradient_error(net, params));
  }
  d = fmt::format("max relative error LR {:.2e}, MLP {:.2e}", worst_lr, worst_mlp);
  return worst_lr < 1e-5 && worst_mlp < 1e-5;
}

bool smo(std::string& d) {
  Rng rng(50);
  double worst_kkt = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(19);
    const Matrix X = random_matrix(rng, n, 3);
    const auto y = random_labels(rng, n);
    const double C = rng.uniform(0.1, 10.0), tol = 1e-3;
    const Matrix K = kernel_matrix(KernelParams{KernelKind::rbf, 0.5}, X);
    const auto sol = optim::smo_solve(K, y, C, tol);
    const double v = optim::kkt_violation(K, y, sol.alphas, C);
    worst_kkt = std::max(worst_kkt, v);
    ok = ok && sol.converged && v <= tol;
  }
  double worst_gap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.below(4);
    const Matrix X = random_matrix(rng, n, 2);
    const auto y = random_labels(rng, n);
    const Matrix K = kernel_matrix(KernelParams{KernelKind::linear}, X);
    const auto sol = optim::smo_solve(K, y, 1.0, 1e-8);
    const double gap = std::abs(optim::dual_objective(K, y, sol.alphas) - dual_grid_oracle(K, y, 1.0, n <= 4 ? 40 : 12));
    worst_gap = std::max(worst_gap, gap);
  }
  d = fmt::format("max KKT violation {:.2e} (tol 1e-3), max gap to grid oracle {:.2e}", worst_kkt, worst_gap);
  return ok && worst_gap <= 1e-3;
}

bool knn_and_u(std::string& d) {
  Rng rng(100);
  int knn_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng.below(20), dim = 1 + rng.below(4), k = 1 + rng.below(7);
    const Matrix X = random_matrix(rng, n, dim);
    std::vector<std::size_t> y(n);
    for (auto& v : y) v = rng.below(3);
    const auto m = knn::fit(X, y, 3, k);
    const Matrix q = random_matrix(rng, 1, dim);
    knn_bad += knn::predict(m, q.row(0)) != knn_oracle(X, y, 3, k, q.row(0));
  }

  int sum_bad = 0, mono_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n1 = 1 + rng.below(30), n2 = 1 + rng.below(30);
    std::vector<double> x(n1), y(n2);
    const bool ties = trial % 2 == 0;
    for (auto& v : x) v = ties ? static_cast<double>(rng.below(6)) : rng.uniform(-5, 5);
    for (auto& v : y) v = ties ? static_cast<double>(rng.below(6)) : rng.uniform(-5, 5);
    const auto r = stats::mann_whitney_u(x, y);
    sum_bad += r.u1 + r.u2 != static_cast<double>(n1 * n2);
    std::vector<double> fx, fy;
    for (double v : x) fx.push_back(std::exp(v) * 3.0 - 1.0);
    for (double v : y) fy.push_back(std::exp(v) * 3.0 - 1.0);
    const auto t = stats::mann_whitney_u(fx, fy);
    mono_bad += t.u1 != r.u1 || std::abs(t.p_two_sided - r.p_two_sided) > 1e-12;
  }

  double worst_p = 0.0;
  for (std::size_t n1 = 1; n1 <= 8; ++n1)
    for (std::size_t n2 = 1; n2 <= 8; ++n2)
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> x(n1), y(n2);
        for (auto& v : x) v = rng.uniform();
        for (auto& v : y) v = rng.uniform();
        const auto r = stats::mann_whitney_u(x, y);
        worst_p = std::max(worst_p, std::abs(r.p_two_sided - exact_p_oracle(r.u1, n1, n2)));
      }
  d = fmt::format("knn mismatches {}/100, U1+U2 failures {}/1000, monotone failures {}/1000, max exact-p gap {:.2e}",
                  knn_bad, sum_bad, mono_bad, worst_p);
  return knn_bad == 0 && sum_bad == 0 && mono_bad == 0 && worst_p <= 0.005;
}

bool determinism(std::string& d) {
  TempDir dir("acceptance");
  const auto corpus = dir.file("synthetic.jsonl", to_jsonl(synthetic_documents(99)));
  const std::vector<std::vector<std::string>> commands = {
      {"eval", corpus.string(), "--runs", "2", "--seed", "5"},
      {"eval", corpus.string(), "--model", "all", "--algo", "mlp_adam", "--runs", "2", "--seed", "6", "--format",
       "markdown"},
  };
  bool ok = true;
  int idx = 0;
  for (const auto& cmd : commands) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto args = cmd;
      const auto path = dir.path() / fmt::format("out{}-{}.txt", idx, rep);
      args.insert(args.end(), {"--out", path.string()});
      std::ostringstream out, err;
      ok = ok && cli::run_cli(args, out, err) == 0;
      outputs[rep] = slurp(path);
    }
    ok = ok && !outputs[0].empty() && outputs[0] == outputs[1];
    d += fmt::format("command {}: {} bytes; ", ++idx, outputs[0].size());
  }
  return ok;
}

}  // namespace

int main() {
  check("fixture.row_sums", "row sums 8.976 / 8.95 / 8.938 / 5.324 / 2.156", row_sums);
  check("fixture.blocks", "Bernoulli block has 29 ones; block means 0.958 / 0.819 / 0.872", blocks);
  check("fixture.interest_sums", "interest sums and means to 3 decimals", interest_sums);
  check("fixture.medians", "72-score set medians 0.982 / 0.971 / 0.968", medians);
  check("fixture.mann_whitney", "six U statistics exact, p within 0.02", mann_whitney);
  check("fixture.agreement", "percent agreement [50, 100, 100, 100, 90]", agreement);
  check("synthetic.classifiers", "all 12 perfect under Bernoulli, >= 10 of 12 at 0.95 under plain, < 60 s",
        synthetic);
  check("property.gradients", "LR and MLP gradients match central differences, 20 points each", gradients);
  check("property.smo", "SMO meets KKT on 50 problems and matches the grid oracle", smo);
  check("property.knn_and_u", "k-NN oracle, U1+U2, monotone invariance, exact p", knn_and_u);
  check("property.determinism", "repeated eval commands are byte-identical", determinism);

  // Informational: every mean of the interest-sum table, including the one
  // cell whose printed value disagrees with its own row sum.
  const auto& s = reproduced().summary;
  for (auto m : report::kMais) {
    const auto& r = s.of(m);
    fmt::print("INFO interest {} total={} vk={} t={} ru={} en={}\n", report::to_string(m), report::fixed3(r.total),
               report::fixed3(r.vk_mean), report::fixed3(r.twitter_mean), report::fixed3(r.ru_mean),
               report::fixed3(r.en_mean));
  }
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
