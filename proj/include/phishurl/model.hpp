#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phishurl/boosting.hpp"
#include "phishurl/dataset.hpp"
#include "phishurl/errors.hpp"
#include "phishurl/features.hpp"
#include "phishurl/forest.hpp"
#include "phishurl/knn.hpp"
#include "phishurl/linear.hpp"
#include "phishurl/metrics.hpp"
#include "phishurl/mlp.hpp"
#include "phishurl/numeric.hpp"
#include "phishurl/svm.hpp"

namespace phishurl {

enum class Algorithm {
  random_forest,
  gradient_boosting,
  mlp,
  svm_rbf,
  logistic_regression,
  knn,
};

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::random_forest, Algorithm::gradient_boosting,  Algorithm::mlp,
    Algorithm::svm_rbf,       Algorithm::logistic_regression, Algorithm::knn,
};

inline std::string_view algorithm_id(Algorithm a) {
  switch (a) {
    case Algorithm::random_forest: return "random_forest";
    case Algorithm::gradient_boosting: return "gradient_boosting";
    case Algorithm::mlp: return "mlp";
    case Algorithm::svm_rbf: return "svm_rbf";
    case Algorithm::logistic_regression: return "logistic_regression";
    case Algorithm::knn: return "knn";
  }
  return "unknown";
}

inline std::string_view algorithm_display_name(Algorithm a) {
  switch (a) {
    case Algorithm::random_forest: return "Random Forest";
    case Algorithm::gradient_boosting: return "Gradient Boosting";
    case Algorithm::mlp: return "MLP";
    case Algorithm::svm_rbf: return "SVM";
    case Algorithm::logistic_regression: return "Logistic Regression";
    case Algorithm::knn: return "kNN";
  }
  return "unknown";
}

inline std::optional<Algorithm> algorithm_from_id(std::string_view id) {
  for (auto a : kAllAlgorithms) {
    if (algorithm_id(a) == id) return a;
  }
  return std::nullopt;
}

// Ordered map so iteration (and therefore serialization and any seeded use)
// is deterministic.
using Hyperparameters = std::map<std::string, double>;

struct ClassifierSpec {
  Algorithm algorithm = Algorithm::random_forest;
  Hyperparameters params;  // full set: defaults overlaid with user overrides
  std::uint64_t seed = 42;
  bool standardize = false;
};

inline Hyperparameters default_hyperparameters(Algorithm a) {
  switch (a) {
    case Algorithm::random_forest:
      return {{"trees", 200}, {"max_depth", 0}, {"min_samples_split", 2}, {"mtry", 0}};
    case Algorithm::gradient_boosting:
      return {{"trees", 200}, {"max_depth", 4}, {"learning_rate", 0.1}, {"lambda", 1.0}};
    case Algorithm::mlp:
      return {{"hidden1", 40}, {"hidden2", 20},      {"hidden3", 10}, {"learning_rate", 0.01},
              {"momentum", 0.9}, {"batch_size", 32}, {"epochs", 200}};
    case Algorithm::svm_rbf:
      return {{"c", 1.0}, {"gamma", 0}, {"tol", 1e-3}, {"max_steps", 0}};
    case Algorithm::logistic_regression:
      return {{"l2", 1e-4}, {"tol", 1e-6}, {"max_iters", 10000}};
    case Algorithm::knn:
      return {{"k", 5}};
  }
  return {};
}

// distance and margin models standardize by default; tree splits are
// scale-invariant so the ensembles skip it
inline bool default_standardize(Algorithm a) {
  return a == Algorithm::mlp || a == Algorithm::svm_rbf ||
         a == Algorithm::logistic_regression || a == Algorithm::knn;
}

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidHyperparameter(message);
}

inline void validate_hyperparameters(Algorithm a, const Hyperparameters& p) {
  const auto get = [&](const char* key) { return p.at(key); };
  switch (a) {
    case Algorithm::random_forest:
      require(get("trees") >= 1, "random_forest: trees must be >= 1");
      require(get("max_depth") >= 0, "random_forest: max_depth must be >= 0");
      require(get("min_samples_split") >= 2, "random_forest: min_samples_split must be >= 2");
      require(get("mtry") >= 0, "random_forest: mtry must be >= 0");
      break;
    case Algorithm::gradient_boosting:
      require(get("trees") >= 1, "gradient_boosting: trees must be >= 1");
      require(get("max_depth") >= 1, "gradient_boosting: max_depth must be >= 1");
      require(get("learning_rate") > 0, "gradient_boosting: learning_rate must be > 0");
      require(get("lambda") >= 0, "gradient_boosting: lambda must be >= 0");
      break;
    case Algorithm::mlp:
      require(get("hidden1") >= 1 && get("hidden2") >= 1 && get("hidden3") >= 1,
              "mlp: layer sizes must be positive");
      require(get("learning_rate") > 0, "mlp: learning_rate must be > 0");
      require(get("momentum") >= 0 && get("momentum") < 1, "mlp: momentum must be in [0, 1)");
      require(get("batch_size") >= 1, "mlp: batch_size must be >= 1");
      require(get("epochs") >= 1, "mlp: epochs must be >= 1");
      break;
    case Algorithm::svm_rbf:
      require(get("c") > 0, "svm_rbf: c must be > 0");
      require(get("gamma") >= 0, "svm_rbf: gamma must be >= 0");
      require(get("tol") > 0, "svm_rbf: tol must be > 0");
      break;
    case Algorithm::logistic_regression:
      require(get("l2") >= 0, "logistic_regression: l2 must be >= 0");
      require(get("tol") > 0, "logistic_regression: tol must be > 0");
      require(get("max_iters") >= 1, "logistic_regression: max_iters must be >= 1");
      break;
    case Algorithm::knn:
      require(get("k") >= 1, "knn: k must be >= 1");
      break;
  }
}

}  // namespace detail

/// Build a validated spec: defaults for the algorithm overlaid with
/// `overrides`. Unknown keys and out-of-range values throw
/// InvalidHyperparameter.
inline ClassifierSpec make_spec(Algorithm algorithm, const Hyperparameters& overrides = {},
                                std::uint64_t seed = 42,
                                std::optional<bool> standardize = std::nullopt) {
  ClassifierSpec spec;
  spec.algorithm = algorithm;
  spec.params = default_hyperparameters(algorithm);
  for (const auto& [key, value] : overrides) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) {
      throw InvalidHyperparameter(std::string(algorithm_id(algorithm)) +
                                  ": unknown hyperparameter '" + key + "'");
    }
    it->second = value;
  }
  detail::validate_hyperparameters(algorithm, spec.params);
  spec.seed = seed;
  spec.standardize = standardize.value_or(default_standardize(algorithm));
  return spec;
}

struct Prediction {
  Label label = Label::legitimate;
  double score = 0.0;  // positive-class probability or margin proxy in [0, 1]
};

inline constexpr double kDecisionThreshold = 0.5;

/// One trained classifier behind the uniform predict surface. Holds the
/// algorithm state, the feature columns it was trained on and the fitted
/// standardization, so a saved model is self-contained.
class TrainedModel {
 public:
  using State = std::variant<RandomForestModel, GradientBoostingModel, MlpModel, SvmModel,
                             LogisticRegressionModel, KnnModel>;

  ClassifierSpec spec;
  std::string schema_version;
  FeatureMode mode = FeatureMode::both;
  std::vector<std::size_t> feature_indices;  // columns of the full schema
  std::vector<std::string> feature_names;
  std::optional<Standardizer> standardizer;
  State state;
  double train_seconds = 0.0;
  bool converged = true;

  Prediction predict(const FeatureVector& x) const {
    if (x.schema_version != schema_version) {
      throw SchemaMismatch("vector schema " + x.schema_version + " != model schema " +
                           schema_version);
    }
    std::vector<double> row(feature_indices.size());
    for (std::size_t j = 0; j < feature_indices.size(); ++j) {
      row[j] = static_cast<double>(x.values[feature_indices[j]]);
    }
    if (standardizer) standardizer->apply(row);
    const double s = raw_score(row);
    return {s >= kDecisionThreshold ? Label::phishing : Label::legitimate, s};
  }

  std::vector<Prediction> predict(const LabeledDataset& data) const {
    std::vector<Prediction> out;
    out.reserve(data.size());
    for (const auto& row : data.rows()) out.push_back(predict(row.features));
    return out;
  }

  /// Gain importances normalized to sum to 1, descending, ties broken by
  /// schema index. Tree ensembles only.
  std::vector<std::pair<std::string, double>> feature_importance() const {
    const std::vector<double>* gain = nullptr;
    if (const auto* forest = std::get_if<RandomForestModel>(&state)) {
      gain = &forest->importance_gain;
    } else if (const auto* boosted = std::get_if<GradientBoostingModel>(&state)) {
      gain = &boosted->importance_gain;
    } else {
      throw UnsupportedAlgorithm(std::string(algorithm_id(spec.algorithm)) +
                                 " has no gain-based feature importance");
    }
    double total = 0.0;
    for (double g : *gain) total += g;
    std::vector<std::pair<std::string, double>> out;
    out.reserve(gain->size());
    for (std::size_t j = 0; j < gain->size(); ++j) {
      out.emplace_back(feature_names[j], total > 0.0 ? (*gain)[j] / total : 0.0);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
  }

 private:
  double raw_score(std::span<const double> row) const {
    return std::visit([&](const auto& m) { return m.score(row); }, state);
  }
};

namespace detail {

inline Matrix feature_matrix(const LabeledDataset& data,
                             const std::vector<std::size_t>& columns) {
  Matrix x(data.size(), columns.size());
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto& values = data.row(r).features.values;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const double v = static_cast<double>(values[columns[j]]);
      if (!std::isfinite(v)) throw NonFiniteFeature("row " + std::to_string(r));
      x.at(r, j) = v;
    }
  }
  return x;
}

inline std::vector<int> label_vector(const LabeledDataset& data) {
  std::vector<int> y;
  y.reserve(data.size());
  for (const auto& row : data.rows()) y.push_back(row.label == Label::phishing ? 1 : 0);
  return y;
}

inline std::size_t as_count(const Hyperparameters& p, const char* key) {
  return static_cast<std::size_t>(p.at(key));
}

}  // namespace detail

/// Train a classifier on the dataset's columns selected by `mode`.
/// Deterministic given (spec, data): two identical fits predict identically.
inline TrainedModel fit(const ClassifierSpec& spec, const LabeledDataset& train,
                        FeatureMode mode = FeatureMode::both) {
  detail::validate_hyperparameters(spec.algorithm, spec.params);
  if (train.empty()) throw TooFewRows("training set is empty");
  if (train.phishing_count() == 0 || train.legitimate_count() == 0) {
    throw SingleClassTraining{};
  }

  TrainedModel model;
  model.spec = spec;
  model.schema_version = train.schema_version();
  model.mode = mode;
  model.feature_indices = FeatureSchema::v1().indices(mode);
  for (auto j : model.feature_indices) {
    model.feature_names.push_back(FeatureSchema::v1().names()[j]);
  }

  Matrix x = detail::feature_matrix(train, model.feature_indices);
  const std::vector<int> y = detail::label_vector(train);
  if (spec.standardize) {
    model.standardizer = Standardizer::fit(x);
    model.standardizer->apply(x);
  }

  const auto& p = spec.params;
  model.train_seconds = timed([&] {
    switch (spec.algorithm) {
      case Algorithm::random_forest: {
        RandomForestModel::Params params;
        params.n_trees = detail::as_count(p, "trees");
        params.max_depth = detail::as_count(p, "max_depth");
        params.min_samples_split = detail::as_count(p, "min_samples_split");
        params.mtry = detail::as_count(p, "mtry");
        RandomForestModel forest;
        forest.fit(x, y, params, spec.seed);
        model.state = std::move(forest);
        break;
      }
      case Algorithm::gradient_boosting: {
        GradientBoostingModel::Params params;
        params.n_trees = detail::as_count(p, "trees");
        params.max_depth = detail::as_count(p, "max_depth");
        params.learning_rate = p.at("learning_rate");
        params.lambda = p.at("lambda");
        GradientBoostingModel boosted;
        boosted.fit(x, y, params);
        model.state = std::move(boosted);
        break;
      }
      case Algorithm::mlp: {
        MlpModel::Params params;
        params.hidden = {detail::as_count(p, "hidden1"), detail::as_count(p, "hidden2"),
                         detail::as_count(p, "hidden3")};
        params.learning_rate = p.at("learning_rate");
        params.momentum = p.at("momentum");
        params.batch_size = detail::as_count(p, "batch_size");
        params.epochs = detail::as_count(p, "epochs");
        MlpModel mlp = fit_mlp(x, y, params, spec.seed);
        model.converged = mlp.converged;
        model.state = std::move(mlp);
        break;
      }
      case Algorithm::svm_rbf: {
        SvmModel::Params params;
        params.c = p.at("c");
        params.gamma = p.at("gamma");
        params.tol = p.at("tol");
        params.max_steps = detail::as_count(p, "max_steps");
        SmoResult result = fit_svm(x, y, params, spec.seed);
        model.converged = result.model.converged;
        model.state = std::move(result.model);
        break;
      }
      case Algorithm::logistic_regression: {
        LogisticRegressionModel::Params params;
        params.l2 = p.at("l2");
        params.tol = p.at("tol");
        params.max_iters = detail::as_count(p, "max_iters");
        LogisticRegressionModel lr;
        lr.fit(x, y, params);
        model.converged = lr.converged;
        model.state = std::move(lr);
        break;
      }
      case Algorithm::knn: {
        KnnModel::Params params;
        params.k = detail::as_count(p, "k");
        KnnModel knn;
        knn.fit(std::move(x), std::vector<int>(y), params);
        model.state = std::move(knn);
        break;
      }
    }
  });
  return model;
}

}  // namespace phishurl
