#pragma once

// The twelve classifier configurations behind one train / predict surface.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "maiclass/classifiers/decision_tree.hpp"
#include "maiclass/classifiers/kernel.hpp"
#include "maiclass/classifiers/knn.hpp"
#include "maiclass/classifiers/logistic.hpp"
#include "maiclass/classifiers/mlp.hpp"
#include "maiclass/classifiers/naive_bayes.hpp"
#include "maiclass/classifiers/svm.hpp"
#include "maiclass/error.hpp"
#include "maiclass/features.hpp"

namespace maiclass {

enum class Algorithm {
  svm_linear,
  svm_poly,
  svm_rbf,
  svm_sigmoid,
  mlp_lbfgs,
  mlp_adam,
  nb_bernoulli,
  nb_multinomial,
  nb_gaussian,
  logistic_regression,
  decision_tree,
  knn,
};

// Row order of the published score table.
inline constexpr std::array<Algorithm, 12> kAllAlgorithms = {
    Algorithm::svm_linear,   Algorithm::svm_poly,       Algorithm::svm_rbf,     Algorithm::svm_sigmoid,
    Algorithm::mlp_lbfgs,    Algorithm::mlp_adam,       Algorithm::nb_bernoulli, Algorithm::nb_multinomial,
    Algorithm::nb_gaussian,  Algorithm::logistic_regression, Algorithm::decision_tree, Algorithm::knn,
};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::svm_linear: return "svm_linear";
    case Algorithm::svm_poly: return "svm_poly";
    case Algorithm::svm_rbf: return "svm_rbf";
    case Algorithm::svm_sigmoid: return "svm_sigmoid";
    case Algorithm::mlp_lbfgs: return "mlp_lbfgs";
    case Algorithm::mlp_adam: return "mlp_adam";
    case Algorithm::nb_bernoulli: return "nb_bernoulli";
    case Algorithm::nb_multinomial: return "nb_multinomial";
    case Algorithm::nb_gaussian: return "nb_gaussian";
    case Algorithm::logistic_regression: return "logistic_regression";
    case Algorithm::decision_tree: return "decision_tree";
    case Algorithm::knn: return "knn";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : kAllAlgorithms)
    if (to_string(a) == s) return a;
  throw InvalidArgument("unknown algorithm '" + std::string(s) + "'");
}

// Display names as they appear in the score table legend.
inline std::string_view display_name(Algorithm a) {
  switch (a) {
    case Algorithm::svm_linear: return "SVM lin.";
    case Algorithm::svm_poly: return "SVM pol.";
    case Algorithm::svm_rbf: return "SVM rad.";
    case Algorithm::svm_sigmoid: return "SVM sig.";
    case Algorithm::mlp_lbfgs: return "Neur. lbfgs";
    case Algorithm::mlp_adam: return "Neur. adam";
    case Algorithm::nb_bernoulli: return "Bern. NB";
    case Algorithm::nb_multinomial: return "Mult. NB";
    case Algorithm::nb_gaussian: return "Gaus. NB";
    case Algorithm::logistic_regression: return "LR";
    case Algorithm::decision_tree: return "DT";
    case Algorithm::knn: return "K-N";
  }
  return "?";
}

// Algorithm plus optional hyperparameter overrides. Missing entries take the
// defaults below; unknown names are rejected at train time.
//
//   svm_*         C=1, gamma=1/n_features, degree=3, coef0=0, tol=1e-3
//   mlp_*         hidden=100, alpha=1e-4, max_iter=200, tol=1e-4,
//                 learning_rate=1e-3, batch_size=200
//   nb_bernoulli, nb_multinomial  alpha=1
//   logistic_regression  C=1, max_iter=200, tol=1e-5
//   decision_tree max_depth=0 (unlimited)
//   knn           k=5
struct ClassifierSpec {
  Algorithm algorithm = Algorithm::nb_multinomial;
  std::map<std::string, double> hyperparams;

  double param(const std::string& name, double fallback) const {
    auto it = hyperparams.find(name);
    return it == hyperparams.end() ? fallback : it->second;
  }

  bool operator==(const ClassifierSpec&) const = default;
};

inline std::span<const std::string_view> allowed_hyperparams(Algorithm a) {
  static constexpr std::string_view svm[] = {"C", "gamma", "degree", "coef0", "tol"};
  static constexpr std::string_view mlp[] = {"hidden", "alpha", "max_iter", "tol", "learning_rate", "batch_size"};
  static constexpr std::string_view nb[] = {"alpha"};
  static constexpr std::string_view lr[] = {"C", "max_iter", "tol"};
  static constexpr std::string_view dt[] = {"max_depth"};
  static constexpr std::string_view kn[] = {"k"};
  switch (a) {
    case Algorithm::svm_linear:
    case Algorithm::svm_poly:
    case Algorithm::svm_rbf:
    case Algorithm::svm_sigmoid: return svm;
    case Algorithm::mlp_lbfgs:
    case Algorithm::mlp_adam: return mlp;
    case Algorithm::nb_bernoulli:
    case Algorithm::nb_multinomial: return nb;
    case Algorithm::nb_gaussian: return {};
    case Algorithm::logistic_regression: return lr;
    case Algorithm::decision_tree: return dt;
    case Algorithm::knn: return kn;
  }
  return {};
}

using ModelState = std::variant<nb::Model, svm::Model, logistic::Model, mlp::Model, tree::Model, knn::Model>;

struct TrainedModel {
  ClassifierSpec spec;
  std::vector<std::string> classes;
  std::size_t n_features = 0;
  ModelState state;
};

namespace detail {

inline std::size_t count_param(const ClassifierSpec& spec, const std::string& name, double fallback) {
  const double v = spec.param(name, fallback);
  if (!(v >= 0.0) || v != std::floor(v)) throw InvalidArgument("hyperparameter '" + name + "' must be a count");
  return static_cast<std::size_t>(v);
}

inline KernelParams kernel_params(const ClassifierSpec& spec, std::size_t n_features) {
  KernelParams p;
  switch (spec.algorithm) {
    case Algorithm::svm_linear: p.kind = KernelKind::linear; break;
    case Algorithm::svm_poly: p.kind = KernelKind::poly; break;
    case Algorithm::svm_rbf: p.kind = KernelKind::rbf; break;
    default: p.kind = KernelKind::sigmoid; break;
  }
  p.gamma = spec.param("gamma", 1.0 / static_cast<double>(std::max<std::size_t>(n_features, 1)));
  p.degree = static_cast<int>(count_param(spec, "degree", 3));
  p.coef0 = spec.param("coef0", 0.0);
  p.validate();
  return p;
}

inline mlp::Options mlp_options(const ClassifierSpec& spec) {
  mlp::Options o;
  o.solver = spec.algorithm == Algorithm::mlp_lbfgs ? mlp::Solver::lbfgs : mlp::Solver::adam;
  o.hidden = count_param(spec, "hidden", 100);
  o.alpha = spec.param("alpha", 1e-4);
  o.max_iter = count_param(spec, "max_iter", 200);
  o.tol = spec.param("tol", 1e-4);
  o.learning_rate = spec.param("learning_rate", 1e-3);
  o.batch_size = count_param(spec, "batch_size", 200);
  return o;
}

inline std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace detail

// Fits one configuration. Classes are the sorted distinct labels; only the
// MLP consumes the seed (initialization and batch order).
inline TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& data, std::uint64_t seed) {
  const Matrix& X = data.rows;
  if (X.rows() == 0) throw EmptyCorpus("no training rows");
  if (data.labels.size() != X.rows()) throw LengthMismatch("labels and rows differ in length");
  for (const auto& [name, value] : spec.hyperparams) {
    const auto allowed = allowed_hyperparams(spec.algorithm);
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw InvalidArgument("hyperparameter '" + name + "' does not apply to " + std::string(to_string(spec.algorithm)));
    if (!std::isfinite(value)) throw InvalidArgument("hyperparameter '" + name + "' is not finite");
  }

  std::set<std::string> distinct(data.labels.begin(), data.labels.end());
  if (distinct.size() < 2) throw DegenerateLabels("training data holds fewer than two classes");
  TrainedModel m{spec, {distinct.begin(), distinct.end()}, X.cols(), {}};
  std::vector<std::size_t> y(X.rows());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = static_cast<std::size_t>(std::lower_bound(m.classes.begin(), m.classes.end(), data.labels[i]) -
                                    m.classes.begin());
  const std::size_t k = m.classes.size();

  switch (spec.algorithm) {
    case Algorithm::svm_linear:
    case Algorithm::svm_poly:
    case Algorithm::svm_rbf:
    case Algorithm::svm_sigmoid:
      m.state = svm::fit(detail::kernel_params(spec, X.cols()), X, y, k, spec.param("C", 1.0), spec.param("tol", 1e-3));
      break;
    case Algorithm::mlp_lbfgs:
    case Algorithm::mlp_adam:
      m.state = mlp::fit(X, y, k, detail::mlp_options(spec), seed);
      break;
    case Algorithm::nb_bernoulli:
      m.state = nb::fit(nb::Event::bernoulli, X, y, k, spec.param("alpha", 1.0));
      break;
    case Algorithm::nb_multinomial:
      m.state = nb::fit(nb::Event::multinomial, X, y, k, spec.param("alpha", 1.0));
      break;
    case Algorithm::nb_gaussian:
      m.state = nb::fit(nb::Event::gaussian, X, y, k, 0.0);
      break;
    case Algorithm::logistic_regression: {
      optim::OptimizerConfig cfg;
      cfg.max_iterations = detail::count_param(spec, "max_iter", 200);
      cfg.tolerance = spec.param("tol", 1e-5);
      m.state = logistic::fit(X, y, k, spec.param("C", 1.0), cfg);
      break;
    }
    case Algorithm::decision_tree:
      m.state = tree::fit(X, y, k, detail::count_param(spec, "max_depth", 0));
      break;
    case Algorithm::knn:
      m.state = knn::fit(X, y, k, detail::count_param(spec, "k", 5));
      break;
  }
  return m;
}

inline bool supports_scores(const TrainedModel& m) {
  return std::holds_alternative<nb::Model>(m.state) || std::holds_alternative<logistic::Model>(m.state) ||
         std::holds_alternative<mlp::Model>(m.state);
}

// Class index for one row.
inline std::size_t predict_index(const TrainedModel& m, std::span<const double> x) {
  if (x.size() != m.n_features)
    throw DimensionMismatch("row has " + std::to_string(x.size()) + " features, model expects " +
                            std::to_string(m.n_features));
  return std::visit(
      [&](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, nb::Model>) return detail::argmax(nb::joint_log_likelihood(s, x));
        else if constexpr (std::is_same_v<T, logistic::Model>) return detail::argmax(logistic::probabilities(s, x));
        else if constexpr (std::is_same_v<T, mlp::Model>) return detail::argmax(mlp::probabilities(s, x));
        else if constexpr (std::is_same_v<T, svm::Model>) return svm::predict(s, x);
        else if constexpr (std::is_same_v<T, tree::Model>) return tree::predict(s, x);
        else return knn::predict(s, x);
      },
      m.state);
}

inline std::vector<std::string> predict(const TrainedModel& m, const Matrix& rows) {
  if (rows.rows() > 0 && rows.cols() != m.n_features)
    throw DimensionMismatch("rows have " + std::to_string(rows.cols()) + " features, model expects " +
                            std::to_string(m.n_features));
  std::vector<std::string> out;
  out.reserve(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) out.push_back(m.classes[predict_index(m, rows.row(i))]);
  return out;
}

// Per-class posteriors in m.classes order; NB, LR and MLP only.
inline Matrix predict_scores(const TrainedModel& m, const Matrix& rows) {
  if (!supports_scores(m))
    throw Unsupported(std::string(to_string(m.spec.algorithm)) + " does not produce class scores");
  if (rows.rows() > 0 && rows.cols() != m.n_features) throw DimensionMismatch("row width differs from model");
  Matrix out(rows.rows(), m.classes.size());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const auto x = rows.row(i);
    const std::vector<double> p = std::visit(
        [&](const auto& s) -> std::vector<double> {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, nb::Model>) return nb::posteriors(s, x);
          else if constexpr (std::is_same_v<T, logistic::Model>) return logistic::probabilities(s, x);
          else if constexpr (std::is_same_v<T, mlp::Model>) return mlp::probabilities(s, x);
          else return {};
        },
        m.state);
    std::copy(p.begin(), p.end(), out.row(i).begin());
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON model files. Doubles are written with round-trip precision, so a
// reloaded model predicts identically.

inline constexpr int kModelFormatVersion = 1;

namespace detail {

using nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

inline Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows() * m.cols()) throw InvalidArgument("matrix data has the wrong length");
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

inline json state_to_json(const ModelState& state) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, nb::Model>) {
          return {{"kind", "nb"},
                  {"event", static_cast<int>(s.event)},
                  {"n_classes", s.n_classes},
                  {"n_features", s.n_features},
                  {"log_prior", s.log_prior},
                  {"log_prob", matrix_to_json(s.log_prob)},
                  {"log_prob_not", matrix_to_json(s.log_prob_not)},
                  {"mean", matrix_to_json(s.mean)},
                  {"var", matrix_to_json(s.var)}};
        } else if constexpr (std::is_same_v<T, svm::Model>) {
          json pairs = json::array();
          for (const auto& p : s.pairs)
            pairs.push_back({{"positive", p.positive},
                             {"negative", p.negative},
                             {"support", matrix_to_json(p.support)},
                             {"coef", p.coef},
                             {"bias", p.bias},
                             {"converged", p.converged}});
          return {{"kind", "svm"},
                  {"kernel", {{"kind", static_cast<int>(s.kernel.kind)},
                              {"gamma", s.kernel.gamma},
                              {"degree", s.kernel.degree},
                              {"coef0", s.kernel.coef0}}},
                  {"n_classes", s.n_classes},
                  {"n_features", s.n_features},
                  {"pairs", pairs}};
        } else if constexpr (std::is_same_v<T, logistic::Model>) {
          return {{"kind", "logistic"},
                  {"n_classes", s.n_classes},
                  {"n_features", s.n_features},
                  {"weights", matrix_to_json(s.weights)}};
        } else if constexpr (std::is_same_v<T, mlp::Model>) {
          return {{"kind", "mlp"},
                  {"inputs", s.shape.inputs},
                  {"hidden", s.shape.hidden},
                  {"outputs", s.shape.outputs},
                  {"params", s.params},
                  {"final_loss", s.final_loss}};
        } else if constexpr (std::is_same_v<T, tree::Model>) {
          json nodes = json::array();
          for (const auto& n : s.nodes)
            nodes.push_back({n.feature == tree::Node::kLeaf ? json(nullptr) : json(n.feature), n.threshold, n.left,
                             n.right, n.label});
          return {{"kind", "tree"}, {"n_classes", s.n_classes}, {"n_features", s.n_features}, {"nodes", nodes}};
        } else {
          return {{"kind", "knn"}, {"k", s.k}, {"n_classes", s.n_classes}, {"X", matrix_to_json(s.X)}, {"y", s.y}};
        }
      },
      state);
}

inline ModelState state_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "nb") {
    nb::Model s;
    s.event = static_cast<nb::Event>(j.at("event").get<int>());
    s.n_classes = j.at("n_classes").get<std::size_t>();
    s.n_features = j.at("n_features").get<std::size_t>();
    s.log_prior = j.at("log_prior").get<std::vector<double>>();
    s.log_prob = matrix_from_json(j.at("log_prob"));
    s.log_prob_not = matrix_from_json(j.at("log_prob_not"));
    s.mean = matrix_from_json(j.at("mean"));
    s.var = matrix_from_json(j.at("var"));
    return s;
  }
  if (kind == "svm") {
    svm::Model s;
    const auto& k = j.at("kernel");
    s.kernel.kind = static_cast<KernelKind>(k.at("kind").get<int>());
    s.kernel.gamma = k.at("gamma").get<double>();
    s.kernel.degree = k.at("degree").get<int>();
    s.kernel.coef0 = k.at("coef0").get<double>();
    s.n_classes = j.at("n_classes").get<std::size_t>();
    s.n_features = j.at("n_features").get<std::size_t>();
    for (const auto& p : j.at("pairs"))
      s.pairs.push_back({p.at("positive").get<std::size_t>(), p.at("negative").get<std::size_t>(),
                         matrix_from_json(p.at("support")), p.at("coef").get<std::vector<double>>(),
                         p.at("bias").get<double>(), p.at("converged").get<bool>()});
    return s;
  }
  if (kind == "logistic") {
    return logistic::Model{j.at("n_classes").get<std::size_t>(), j.at("n_features").get<std::size_t>(),
                           matrix_from_json(j.at("weights"))};
  }
  if (kind == "mlp") {
    mlp::Model s;
    s.shape = {j.at("inputs").get<std::size_t>(), j.at("hidden").get<std::size_t>(), j.at("outputs").get<std::size_t>()};
    s.params = j.at("params").get<std::vector<double>>();
    s.final_loss = j.at("final_loss").get<double>();
    if (s.params.size() != s.shape.size()) throw InvalidArgument("MLP parameter vector has the wrong length");
    return s;
  }
  if (kind == "tree") {
    tree::Model s;
    s.n_classes = j.at("n_classes").get<std::size_t>();
    s.n_features = j.at("n_features").get<std::size_t>();
    for (const auto& n : j.at("nodes"))
      s.nodes.push_back({n.at(0).is_null() ? tree::Node::kLeaf : n.at(0).get<std::size_t>(), n.at(1).get<double>(),
                         n.at(2).get<std::size_t>(), n.at(3).get<std::size_t>(), n.at(4).get<std::size_t>()});
    return s;
  }
  if (kind == "knn") {
    return knn::Model{j.at("k").get<std::size_t>(), j.at("n_classes").get<std::size_t>(), matrix_from_json(j.at("X")),
                      j.at("y").get<std::vector<std::size_t>>()};
  }
  throw InvalidArgument("unknown model kind '" + kind + "'");
}

}  // namespace detail

inline nlohmann::json to_json(const TrainedModel& m) {
  return {{"format", "maiclass-model"},
          {"version", kModelFormatVersion},
          {"algorithm", std::string(to_string(m.spec.algorithm))},
          {"hyperparams", m.spec.hyperparams},
          {"classes", m.classes},
          {"n_features", m.n_features},
          {"state", detail::state_to_json(m.state)}};
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "maiclass-model") throw InvalidArgument("not a model file");
    if (j.at("version").get<int>() != kModelFormatVersion)
      throw InvalidArgument("unsupported model format version " + std::to_string(j.at("version").get<int>()));
    TrainedModel m;
    m.spec.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    m.spec.hyperparams = j.at("hyperparams").get<std::map<std::string, double>>();
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.state = detail::state_from_json(j.at("state"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace maiclass
