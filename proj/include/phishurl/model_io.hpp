#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phishurl/errors.hpp"
#include "phishurl/model.hpp"

namespace phishurl {

// write-then-rename so readers never observe a half-written file
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

using nlohmann::json;

inline json nodes_to_json(const std::vector<TreeNode>& nodes) {
  json j;
  auto& feature = j["feature"] = json::array();
  auto& threshold = j["threshold"] = json::array();
  auto& left = j["left"] = json::array();
  auto& right = j["right"] = json::array();
  auto& value = j["value"] = json::array();
  for (const auto& n : nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return j;
}

inline std::vector<TreeNode> nodes_from_json(const json& j) {
  std::vector<TreeNode> nodes(j.at("feature").size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].feature = j.at("feature")[i].get<std::int32_t>();
    nodes[i].threshold = j.at("threshold")[i].get<double>();
    nodes[i].left = j.at("left")[i].get<std::int32_t>();
    nodes[i].right = j.at("right")[i].get<std::int32_t>();
    nodes[i].value = j.at("value")[i].get<double>();
  }
  return nodes;
}

inline json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data() = j.at("data").get<std::vector<double>>();
  return m;
}

inline json state_to_json(const TrainedModel& model) {
  json j;
  if (const auto* forest = std::get_if<RandomForestModel>(&model.state)) {
    j["importance_gain"] = forest->importance_gain;
    auto& trees = j["trees"] = json::array();
    for (const auto& t : forest->trees) trees.push_back(nodes_to_json(t.nodes()));
  } else if (const auto* boosted = std::get_if<GradientBoostingModel>(&model.state)) {
    j["base_score"] = boosted->base_score;
    j["importance_gain"] = boosted->importance_gain;
    j["train_loss_curve"] = boosted->train_loss_curve;
    auto& trees = j["trees"] = json::array();
    for (const auto& t : boosted->trees) trees.push_back(nodes_to_json(t.nodes()));
  } else if (const auto* mlp = std::get_if<MlpModel>(&model.state)) {
    auto& layers = j["layers"] = json::array();
    for (const auto& layer : mlp->layers) {
      layers.push_back({{"w", matrix_to_json(layer.w)}, {"b", layer.b}});
    }
  } else if (const auto* svm = std::get_if<SvmModel>(&model.state)) {
    j["gamma"] = svm->gamma;
    j["bias"] = svm->bias;
    j["dual_coef"] = svm->dual_coef;
    j["support_vectors"] = matrix_to_json(svm->support_x);
  } else if (const auto* lr = std::get_if<LogisticRegressionModel>(&model.state)) {
    j["weights"] = lr->weights;
    j["bias"] = lr->bias;
  } else if (const auto* knn = std::get_if<KnnModel>(&model.state)) {
    j["k"] = knn->k;
    j["train_x"] = matrix_to_json(knn->train_x);
    j["train_y"] = knn->train_y;
  }
  return j;
}

inline TrainedModel::State state_from_json(Algorithm algorithm, const json& j) {
  switch (algorithm) {
    case Algorithm::random_forest: {
      RandomForestModel forest;
      forest.importance_gain = j.at("importance_gain").get<std::vector<double>>();
      for (const auto& t : j.at("trees")) {
        ClassificationTree tree;
        tree.nodes() = nodes_from_json(t);
        forest.trees.push_back(std::move(tree));
      }
      return forest;
    }
    case Algorithm::gradient_boosting: {
      GradientBoostingModel boosted;
      boosted.base_score = j.at("base_score").get<double>();
      boosted.importance_gain = j.at("importance_gain").get<std::vector<double>>();
      boosted.train_loss_curve = j.at("train_loss_curve").get<std::vector<double>>();
      for (const auto& t : j.at("trees")) {
        GradientTree tree;
        tree.nodes() = nodes_from_json(t);
        boosted.trees.push_back(std::move(tree));
      }
      return boosted;
    }
    case Algorithm::mlp: {
      MlpModel mlp;
      for (const auto& l : j.at("layers")) {
        MlpModel::Layer layer;
        layer.w = matrix_from_json(l.at("w"));
        layer.b = l.at("b").get<std::vector<double>>();
        mlp.layers.push_back(std::move(layer));
      }
      return mlp;
    }
    case Algorithm::svm_rbf: {
      SvmModel svm;
      svm.gamma = j.at("gamma").get<double>();
      svm.bias = j.at("bias").get<double>();
      svm.dual_coef = j.at("dual_coef").get<std::vector<double>>();
      svm.support_x = matrix_from_json(j.at("support_vectors"));
      return svm;
    }
    case Algorithm::logistic_regression: {
      LogisticRegressionModel lr;
      lr.weights = j.at("weights").get<std::vector<double>>();
      lr.bias = j.at("bias").get<double>();
      return lr;
    }
    case Algorithm::knn: {
      KnnModel knn;
      knn.k = j.at("k").get<std::size_t>();
      knn.train_x = matrix_from_json(j.at("train_x"));
      knn.train_y = j.at("train_y").get<std::vector<int>>();
      return knn;
    }
  }
  throw Error("unknown algorithm in model file");
}

}  // namespace detail

inline constexpr int kModelFormatVersion = 1;

/// Serialize a trained model to a self-describing JSON document.
/// Numbers round-trip exactly, so load(save(m)) predicts identically to m.
inline std::string model_to_json(const TrainedModel& model) {
  detail::json j;
  j["format"] = "phishurl-model";
  j["format_version"] = kModelFormatVersion;
  j["algorithm"] = algorithm_id(model.spec.algorithm);
  j["schema_version"] = model.schema_version;
  j["feature_mode"] = feature_mode_id(model.mode);
  j["feature_names"] = model.feature_names;
  j["seed"] = model.spec.seed;
  j["standardize"] = model.spec.standardize;
  j["hyperparameters"] = model.spec.params;
  if (model.standardizer) {
    j["standardization"] = {{"mean", model.standardizer->mean},
                            {"stddev", model.standardizer->stddev}};
  } else {
    j["standardization"] = nullptr;
  }
  j["train_seconds"] = model.train_seconds;
  j["converged"] = model.converged;
  j["state"] = detail::state_to_json(model);
  return j.dump(2);
}

inline TrainedModel model_from_json(const std::string& text) {
  const auto j = detail::json::parse(text);
  if (j.value("format", "") != "phishurl-model") throw Error("not a phishurl model file");
  if (j.at("format_version").get<int>() != kModelFormatVersion) {
    throw Error("unsupported model format version");
  }
  const auto algorithm = algorithm_from_id(j.at("algorithm").get<std::string>());
  if (!algorithm) throw Error("unknown algorithm: " + j.at("algorithm").get<std::string>());

  TrainedModel model;
  model.spec.algorithm = *algorithm;
  model.spec.seed = j.at("seed").get<std::uint64_t>();
  model.spec.standardize = j.at("standardize").get<bool>();
  model.spec.params = j.at("hyperparameters").get<Hyperparameters>();
  model.schema_version = j.at("schema_version").get<std::string>();
  const auto mode_id = j.at("feature_mode").get<std::string>();
  for (auto mode : {FeatureMode::traditional, FeatureMode::keyword, FeatureMode::both}) {
    if (feature_mode_id(mode) == mode_id) model.mode = mode;
  }
  model.feature_indices = FeatureSchema::v1().indices(model.mode);
  model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  if (!j.at("standardization").is_null()) {
    Standardizer s;
    s.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    s.stddev = j.at("standardization").at("stddev").get<std::vector<double>>();
    model.standardizer = std::move(s);
  }
  model.train_seconds = j.at("train_seconds").get<double>();
  model.converged = j.at("converged").get<bool>();
  model.state = detail::state_from_json(*algorithm, j.at("state"));
  return model;
}

inline void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  write_text_atomic(path, model_to_json(model));
}

inline TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace phishurl
