// phishurl command line: feature extraction, training, prediction,
// evaluation and the paired keyword-feature experiment.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phishurl/phishurl.hpp"

namespace {

using namespace phishurl;

FeatureMode parse_mode(const std::string& value) {
  if (value == "traditional") return FeatureMode::traditional;
  if (value == "keyword") return FeatureMode::keyword;
  if (value == "both") return FeatureMode::both;
  throw InvalidConfig("unknown feature mode: " + value + " (traditional|keyword|both)");
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& ids) {
  std::vector<Algorithm> out;
  for (const auto& id : ids) {
    const auto algorithm = algorithm_from_id(id);
    if (!algorithm) throw InvalidConfig("unknown algorithm: " + id);
    out.push_back(*algorithm);
  }
  return out;
}

// CSV rows with a url column and no (or an ignored) label column
std::vector<std::string> load_url_column(const std::string& path, const std::string& url_col) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw EmptyDataset("empty file: " + path);
  std::size_t url_idx = fields.size();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == url_col) url_idx = i;
  }
  if (url_idx == fields.size()) throw MissingColumn(url_col);
  std::vector<std::string> urls;
  while (reader.next(fields)) {
    if (url_idx >= fields.size()) continue;
    if (fields[url_idx].empty()) continue;
    urls.push_back(fields[url_idx]);
  }
  if (urls.empty()) throw EmptyDataset(path + ": 0 valid rows");
  return urls;
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_text_atomic(out_path, content);
  }
}

int cmd_extract_features(const std::string& data, const std::string& url_col,
                         const std::string& label_col, const std::string& out) {
  std::string content;
  if (!label_col.empty()) {
    const auto loaded = load_csv(data, url_col, label_col);
    std::cerr << "loaded " << loaded.rows.size() << " rows, skipped " << loaded.skipped << "\n";
    content = features_csv(loaded.rows, true);
  } else {
    std::vector<LabeledUrl> rows;
    for (auto& url : load_url_column(data, url_col)) {
      rows.push_back({std::move(url), Label::legitimate});  // label unused below
    }
    content = features_csv(rows, false);
  }
  write_output(content, out);
  return 0;
}

int cmd_train(const std::string& data, const std::string& url_col, const std::string& label_col,
              const std::string& algorithm_id_str, const std::string& mode_str,
              std::uint64_t seed, const std::string& model_path) {
  const auto algorithm = algorithm_from_id(algorithm_id_str);
  if (!algorithm) throw InvalidConfig("unknown algorithm: " + algorithm_id_str);
  const auto loaded = load_csv(data, url_col, label_col);
  std::cerr << "loaded " << loaded.rows.size() << " rows, skipped " << loaded.skipped << "\n";

  const auto dataset = LabeledDataset::from_urls(loaded.rows, data);
  std::cerr << "classes: " << dataset.legitimate_count() << " legitimate, "
            << dataset.phishing_count() << " phishing\n";
  const auto model = fit(make_spec(*algorithm, {}, seed), dataset, parse_mode(mode_str));
  save_model(model, model_path);
  std::cerr << "trained " << algorithm_display_name(*algorithm) << " in " << model.train_seconds
            << "s" << (model.converged ? "" : " (did not converge)") << ", saved to "
            << model_path << "\n";
  return model.converged ? 0 : 1;
}

int cmd_predict(const std::string& model_path, const std::string& data,
                const std::string& url_col, const std::string& out) {
  const auto model = load_model(model_path);
  const auto urls = load_url_column(data, url_col);
  std::string content = "url,predicted_label,score\n";
  char buf[64];
  for (const auto& url : urls) {
    const auto prediction = model.predict(extract(parse_url(url)));
    std::snprintf(buf, sizeof(buf), "%.10g", prediction.score);
    content += csv_escape(normalize(url)) + ',' + std::string(label_name(prediction.label)) +
               ',' + buf + '\n';
  }
  write_output(content, out);
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data,
                 const std::string& url_col, const std::string& label_col,
                 const std::string& out) {
  const auto model = load_model(model_path);
  const auto loaded = load_csv(data, url_col, label_col);
  const auto dataset = LabeledDataset::from_urls(loaded.rows, data);

  auto [predictions, test_seconds] = timed([&] { return model.predict(dataset); });
  std::vector<Label> predicted, truth;
  for (const auto& p : predictions) predicted.push_back(p.label);
  for (const auto& row : dataset.rows()) truth.push_back(row.label);

  const auto matrix = confusion(predicted, truth);
  const auto scores = metrics(matrix);

  nlohmann::json j;
  j["model"] = model_path;
  j["data"] = data;
  j["rows"] = dataset.size();
  j["confusion"] = {{"tp", matrix.tp}, {"fp", matrix.fp}, {"fn", matrix.fn}, {"tn", matrix.tn}};
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["metrics"] = {{"tpr", opt(scores.tpr)},       {"fnr", opt(scores.fnr)},
                  {"tnr", opt(scores.tnr)},       {"fpr", opt(scores.fpr)},
                  {"precision", opt(scores.precision)}, {"recall", opt(scores.recall)},
                  {"accuracy", opt(scores.accuracy)}};
  j["train_seconds"] = model.train_seconds;
  j["test_seconds"] = test_seconds;

  const auto pct = [](const std::optional<double>& v) {
    return v ? std::to_string(*v * 100.0) + "%" : std::string("NA");
  };
  std::cerr << "accuracy " << pct(scores.accuracy) << ", tpr " << pct(scores.tpr) << ", tnr "
            << pct(scores.tnr) << "\n";
  write_output(j.dump(2) + "\n", out);
  return 0;
}

int cmd_importance(const std::string& model_path, const std::string& out) {
  const auto model = load_model(model_path);
  write_output(detail::importance_csv(model.feature_importance()), out);
  return 0;
}

int cmd_experiment(const ExperimentConfig& config) {
  const auto rows = run_experiment(config);

  std::vector<std::string> datasets = {"large"};
  if (config.run_small) datasets.push_back("small");
  for (const auto& dataset : datasets) {
    std::cout << "== " << dataset << " dataset ==\n"
              << detail::results_csv(rows, dataset) << "\n";
  }

  bool any_failed = false;
  for (const auto& row : rows) {
    if (row.failed) {
      any_failed = true;
      std::cerr << "FAILED " << row.dataset_name << "/" << algorithm_id(row.algorithm) << "/"
                << feature_mode_id(row.mode) << ": " << row.error << "\n";
    }
  }
  std::cerr << "reports written to " << config.out_dir.string() << "\n";
  return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"URL-string-only phishing detection with lexical + keyword features"};
  app.require_subcommand(1);

  std::string data, url_col = "url", label_col = "label", out, model_path;
  std::string algorithm_one, features_mode = "both", config_path;
  std::string phishing_urls, legitimate_urls;
  std::vector<std::string> algorithm_list;
  std::uint64_t seed = 42;
  double train_fraction = 0.8, small_fraction = 0.10;
  std::size_t balance_target = 10000;
  bool run_small = false, keyword_only_mode = false;

  auto* extract_cmd = app.add_subcommand("extract-features", "emit the 26-column feature CSV");
  extract_cmd->add_option("--data", data, "input CSV")->required();
  extract_cmd->add_option("--url-col", url_col, "URL column name");
  auto* extract_label = extract_cmd->add_option("--label-col", label_col, "label column name");
  extract_cmd->add_option("--out", out, "output CSV path (default stdout)");

  auto* train_cmd = app.add_subcommand("train", "fit one classifier and save the model");
  train_cmd->add_option("--data", data, "labeled CSV")->required();
  train_cmd->add_option("--url-col", url_col, "URL column name");
  train_cmd->add_option("--label-col", label_col, "label column name");
  train_cmd->add_option("--algorithms", algorithm_one, "algorithm id")->required();
  train_cmd->add_option("--features", features_mode, "traditional|keyword|both");
  train_cmd->add_option("--seed", seed, "random seed");
  train_cmd->add_option("--model", model_path, "output model path")->required();

  auto* predict_cmd = app.add_subcommand("predict", "score URLs with a saved model");
  predict_cmd->add_option("--model", model_path, "model file")->required();
  predict_cmd->add_option("--data", data, "CSV with a URL column")->required();
  predict_cmd->add_option("--url-col", url_col, "URL column name");
  predict_cmd->add_option("--out", out, "output CSV path (default stdout)");

  auto* eval_cmd = app.add_subcommand("evaluate", "confusion matrix and metrics on labeled data");
  eval_cmd->add_option("--model", model_path, "model file")->required();
  eval_cmd->add_option("--data", data, "labeled CSV")->required();
  eval_cmd->add_option("--url-col", url_col, "URL column name");
  eval_cmd->add_option("--label-col", label_col, "label column name");
  eval_cmd->add_option("--out", out, "report JSON path (default stdout)");

  auto* imp_cmd = app.add_subcommand("importance", "gain importance ranking of a tree model");
  imp_cmd->add_option("--model", model_path, "model file")->required();
  imp_cmd->add_option("--out", out, "output CSV path (default stdout)");

  auto* exp_cmd = app.add_subcommand("experiment", "paired with/without-keyword protocol");
  exp_cmd->add_option("--config", config_path, "JSON config file (flags override it)");
  auto* exp_data = exp_cmd->add_option("--data", data, "labeled CSV");
  auto* exp_url = exp_cmd->add_option("--url-col", url_col, "URL column name");
  auto* exp_label = exp_cmd->add_option("--label-col", label_col, "label column name");
  auto* exp_phish = exp_cmd->add_option("--phishing-urls", phishing_urls, "one-URL-per-line file");
  auto* exp_legit =
      exp_cmd->add_option("--legitimate-urls", legitimate_urls, "one-URL-per-line file");
  auto* exp_seed = exp_cmd->add_option("--seed", seed, "random seed");
  auto* exp_frac = exp_cmd->add_option("--train-fraction", train_fraction, "train share in (0,1)");
  auto* exp_bal =
      exp_cmd->add_option("--balance-target", balance_target, "majority subsample size, 0 = off");
  auto* exp_small = exp_cmd->add_flag("--small", run_small, "also run the small subsample");
  auto* exp_sfrac = exp_cmd->add_option("--small-fraction", small_fraction, "small share");
  auto* exp_algos = exp_cmd->add_option("--algorithms", algorithm_list, "algorithm ids")
                        ->delimiter(',');
  auto* exp_kw = exp_cmd->add_flag("--keyword-only-mode", keyword_only_mode,
                                   "also run the keyword-only diagnostic");
  auto* exp_out = exp_cmd->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract_cmd->parsed()) {
      return cmd_extract_features(data, url_col, extract_label->count() ? label_col : "", out);
    }
    if (train_cmd->parsed()) {
      return cmd_train(data, url_col, label_col, algorithm_one, features_mode, seed, model_path);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(model_path, data, url_col, out);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(model_path, data, url_col, label_col, out);
    }
    if (imp_cmd->parsed()) {
      return cmd_importance(model_path, out);
    }
    if (exp_cmd->parsed()) {
      ExperimentConfig config;
      if (!config_path.empty()) config = load_config(config_path);
      if (exp_data->count()) config.data.csv_path = data;
      if (exp_url->count()) config.data.url_column = url_col;
      if (exp_label->count()) config.data.label_column = label_col;
      if (exp_phish->count()) config.data.phishing_path = phishing_urls;
      if (exp_legit->count()) config.data.legitimate_path = legitimate_urls;
      if (exp_seed->count()) config.seed = seed;
      if (exp_frac->count()) config.train_fraction = train_fraction;
      if (exp_bal->count()) config.balance_target = balance_target;
      if (exp_small->count()) config.run_small = run_small;
      if (exp_sfrac->count()) config.small_fraction = small_fraction;
      if (exp_algos->count()) config.algorithms = parse_algorithms(algorithm_list);
      if (exp_kw->count()) config.include_keyword_only = keyword_only_mode;
      if (exp_out->count()) config.out_dir = out;
      return cmd_experiment(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
