#pragma once

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phishurl/dataset.hpp"
#include "phishurl/errors.hpp"
#include "phishurl/metrics.hpp"
#include "phishurl/model.hpp"
#include "phishurl/model_io.hpp"

namespace phishurl {

// Labeled input, either one CSV with url/label columns or two one-URL-per-
// line files (per-category corpus layout).
struct DataSource {
  std::string csv_path;
  std::string url_column = "url";
  std::string label_column = "label";
  std::string phishing_path;
  std::string legitimate_path;

  bool from_csv() const { return !csv_path.empty(); }
  bool from_line_files() const { return !phishing_path.empty() && !legitimate_path.empty(); }
};

struct ExperimentConfig {
  DataSource data;
  std::uint64_t seed = 42;
  double train_fraction = 0.8;
  std::size_t balance_target = 10000;  // 0 keeps the pool as-is
  bool run_small = false;
  double small_fraction = 0.10;
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::map<Algorithm, Hyperparameters> overrides;  // per-algorithm, on top of defaults
  bool include_keyword_only = false;  // adds the keyword-only diagnostic mode
  std::filesystem::path out_dir = "results";

  ClassifierSpec spec_for(Algorithm algorithm) const {
    const auto it = overrides.find(algorithm);
    return make_spec(algorithm, it != overrides.end() ? it->second : Hyperparameters{}, seed);
  }
};

inline void validate_config(const ExperimentConfig& config) {
  if (config.algorithms.empty()) throw InvalidConfig("no algorithms selected");
  if (!(config.train_fraction > 0.0) || !(config.train_fraction < 1.0)) {
    throw InvalidConfig("train_fraction must be in (0, 1)");
  }
  if (!(config.small_fraction > 0.0) || config.small_fraction > 1.0) {
    throw InvalidConfig("small_fraction must be in (0, 1]");
  }
  if (!config.data.from_csv() && !config.data.from_line_files()) {
    throw InvalidConfig("no data source: need a CSV or both per-class URL files");
  }
  if (config.out_dir.empty()) throw InvalidConfig("output directory not set");
}

/// One (dataset, algorithm, feature mode) evaluation. `error_delta` is the
/// signed relative error change against the same algorithm's traditional
/// run on the identical split: negative means the keyword features helped.
struct ComparisonRow {
  std::string dataset_name;
  Algorithm algorithm = Algorithm::random_forest;
  FeatureMode mode = FeatureMode::both;
  EvalReport report;
  std::optional<double> error_delta_vs_traditional;
  std::uint64_t split_fingerprint = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  bool converged = true;
  bool failed = false;
  std::string error;
};

struct ErrorSummaryRow {
  std::string dataset_name;
  Algorithm algorithm = Algorithm::random_forest;
  double error_traditional = 0.0;
  double error_keyword = 0.0;
  std::optional<double> fnr_traditional, fnr_keyword;
  std::optional<double> fpr_traditional, fpr_keyword;
  std::optional<double> relative_error_reduction;  // (e_trad - e_kw) / e_trad
  std::string better;                              // "traditional", "keyword" or "tie"
};

/// Pair each algorithm's traditional and keyword-augmented runs into the
/// error table behind the error plots. Throws MissingPair when an algorithm
/// lacks one side.
inline std::vector<ErrorSummaryRow> summarize_errors(const std::vector<ComparisonRow>& rows) {
  std::map<std::pair<std::string, Algorithm>, std::map<FeatureMode, const ComparisonRow*>> pairs;
  for (const auto& row : rows) {
    if (row.failed) continue;
    pairs[{row.dataset_name, row.algorithm}][row.mode] = &row;
  }
  std::vector<ErrorSummaryRow> out;
  for (const auto& row : rows) {
    if (row.failed || row.mode != FeatureMode::traditional) continue;
    const auto& by_mode = pairs.at({row.dataset_name, row.algorithm});
    const auto both_it = by_mode.find(FeatureMode::both);
    if (both_it == by_mode.end()) {
      throw MissingPair(std::string(algorithm_id(row.algorithm)) + " (" + row.dataset_name +
                        "): no keyword-mode run to pair with");
    }
    const ComparisonRow& trad = row;
    const ComparisonRow& keyed = *both_it->second;

    ErrorSummaryRow s;
    s.dataset_name = row.dataset_name;
    s.algorithm = row.algorithm;
    const double acc_t = trad.report.scores.accuracy.value();
    const double acc_k = keyed.report.scores.accuracy.value();
    s.error_traditional = 1.0 - acc_t;
    s.error_keyword = 1.0 - acc_k;
    s.fnr_traditional = trad.report.scores.fnr;
    s.fnr_keyword = keyed.report.scores.fnr;
    s.fpr_traditional = trad.report.scores.fpr;
    s.fpr_keyword = keyed.report.scores.fpr;
    if (s.error_traditional > 0.0) {
      s.relative_error_reduction = (s.error_traditional - s.error_keyword) / s.error_traditional;
    }
    s.better = acc_k > acc_t ? "keyword" : acc_t > acc_k ? "traditional" : "tie";
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

using nlohmann::json;

inline std::uint64_t fnv1a(const std::vector<std::size_t>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto v : values) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (byte * 8)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string percent_or_na(const std::optional<double>& v, int decimals) {
  return v ? fixed(*v * 100.0, decimals) : std::string("NA");
}

inline std::string mode_row_name(Algorithm algorithm, FeatureMode mode) {
  std::string name(algorithm_display_name(algorithm));
  if (mode == FeatureMode::both) name += " (keyword)";
  if (mode == FeatureMode::keyword) name += " (keyword only)";
  return name;
}

inline json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json metrics_to_json(const Metrics& m) {
  return {{"tpr", optional_to_json(m.tpr)},
          {"fnr", optional_to_json(m.fnr)},
          {"tnr", optional_to_json(m.tnr)},
          {"fpr", optional_to_json(m.fpr)},
          {"precision", optional_to_json(m.precision)},
          {"recall", optional_to_json(m.recall)},
          {"accuracy", optional_to_json(m.accuracy)}};
}

inline json run_to_json(const ComparisonRow& row, std::uint64_t seed,
                        const Hyperparameters& params) {
  json j;
  j["dataset"] = row.dataset_name;
  j["algorithm"] = algorithm_id(row.algorithm);
  j["feature_mode"] = feature_mode_id(row.mode);
  j["seed"] = seed;
  j["failed"] = row.failed;
  if (row.failed) {
    j["error"] = row.error;
    return j;
  }
  j["hyperparameters"] = params;
  j["rows"] = {{"train", row.train_rows}, {"test", row.test_rows}};
  j["split_fingerprint"] = row.split_fingerprint;
  j["confusion"] = {{"tp", row.report.matrix.tp},
                    {"fp", row.report.matrix.fp},
                    {"fn", row.report.matrix.fn},
                    {"tn", row.report.matrix.tn}};
  j["metrics"] = metrics_to_json(row.report.scores);
  j["error_delta_vs_traditional"] = optional_to_json(row.error_delta_vs_traditional);
  j["train_seconds"] = row.report.train_seconds;
  j["test_seconds"] = row.report.test_seconds;
  j["converged"] = row.converged;
  return j;
}

// Table-style results CSV: two (or three) rows per algorithm, rates as
// percentages with the table's display precision.
inline std::string results_csv(const std::vector<ComparisonRow>& rows,
                               const std::string& dataset_name) {
  std::string out = "Algorithm,TPR (%),FNR (%),TNR (%),FPR (%),Recall (%),Accuracy (%)\n";
  for (const auto& row : rows) {
    if (row.dataset_name != dataset_name || row.failed) continue;
    const auto& m = row.report.scores;
    out += mode_row_name(row.algorithm, row.mode) + ',' + percent_or_na(m.tpr, 2) + ',' +
           percent_or_na(m.fnr, 3) + ',' + percent_or_na(m.tnr, 2) + ',' +
           percent_or_na(m.fpr, 3) + ',' + percent_or_na(m.recall, 2) + ',' +
           percent_or_na(m.accuracy, 2) + '\n';
  }
  return out;
}

inline std::string errors_csv(const std::vector<ErrorSummaryRow>& summary,
                              const std::string& dataset_name) {
  std::string out =
      "Algorithm,Error traditional (%),Error keyword (%),FNR traditional (%),FNR keyword (%),"
      "FPR traditional (%),FPR keyword (%),Relative error reduction (%),Better\n";
  for (const auto& s : summary) {
    if (s.dataset_name != dataset_name) continue;
    out += std::string(algorithm_display_name(s.algorithm)) + ',' +
           fixed(s.error_traditional * 100.0, 4) + ',' + fixed(s.error_keyword * 100.0, 4) + ',' +
           percent_or_na(s.fnr_traditional, 4) + ',' + percent_or_na(s.fnr_keyword, 4) + ',' +
           percent_or_na(s.fpr_traditional, 4) + ',' + percent_or_na(s.fpr_keyword, 4) + ',' +
           percent_or_na(s.relative_error_reduction, 2) + ',' + s.better + '\n';
  }
  return out;
}

inline std::string importance_csv(const std::vector<std::pair<std::string, double>>& importances) {
  std::string out = "feature,importance\n";
  char buf[64];
  for (const auto& [name, value] : importances) {
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    out += name + ',' + buf + '\n';
  }
  return out;
}

}  // namespace detail

/// Run every configured algorithm over the dataset in the paired feature
/// modes, all against one fixed train/test split so the deltas isolate the
/// feature effect. Per-run failures are recorded, not fatal.
inline std::vector<ComparisonRow> run_paired_evaluations(const LabeledDataset& data,
                                                         const std::string& dataset_name,
                                                         const ExperimentConfig& config) {
  const auto split_idx = split_indices(data.labels(), {config.train_fraction, config.seed, true});
  const std::uint64_t fingerprint = detail::fnv1a(split_idx.train);
  const LabeledDataset train = data.subset(split_idx.train);
  const LabeledDataset test = data.subset(split_idx.test);
  const std::vector<Label> truth = test.labels();

  std::vector<FeatureMode> modes = {FeatureMode::traditional, FeatureMode::both};
  if (config.include_keyword_only) modes.push_back(FeatureMode::keyword);

  std::vector<ComparisonRow> rows;
  for (const auto algorithm : config.algorithms) {
    std::optional<double> traditional_error;
    for (const auto mode : modes) {
      ComparisonRow row;
      row.dataset_name = dataset_name;
      row.algorithm = algorithm;
      row.mode = mode;
      row.split_fingerprint = fingerprint;
      row.train_rows = train.size();
      row.test_rows = test.size();
      try {
        const auto spec = config.spec_for(algorithm);
        TrainedModel model = fit(spec, train, mode);
        auto [predictions, test_seconds] = timed([&] { return model.predict(test); });
        std::vector<Label> predicted;
        predicted.reserve(predictions.size());
        for (const auto& p : predictions) predicted.push_back(p.label);

        row.report.matrix = confusion(predicted, truth);
        row.report.scores = metrics(row.report.matrix);
        row.report.train_seconds = model.train_seconds;
        row.report.test_seconds = test_seconds;
        row.converged = model.converged;
        if (algorithm == Algorithm::random_forest || algorithm == Algorithm::gradient_boosting) {
          row.report.importances = model.feature_importance();
        }

        const double error = 1.0 - row.report.scores.accuracy.value();
        if (mode == FeatureMode::traditional) {
          traditional_error = error;
          row.error_delta_vs_traditional = 0.0;
        } else if (traditional_error && *traditional_error > 0.0) {
          row.error_delta_vs_traditional = (error - *traditional_error) / *traditional_error;
        }
      } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

/// Full protocol: load, optionally balance, extract features, evaluate all
/// algorithm/mode pairs on the large dataset and optionally on the
/// stratified small subsample, and write the report files.
inline std::vector<ComparisonRow> run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  std::vector<LabeledUrl> pool;
  std::string provenance;
  if (config.data.from_csv()) {
    pool = load_csv(config.data.csv_path, config.data.url_column, config.data.label_column).rows;
    provenance = config.data.csv_path;
  } else {
    pool = load_url_lines(config.data.legitimate_path, Label::legitimate).rows;
    auto phishing = load_url_lines(config.data.phishing_path, Label::phishing).rows;
    pool.insert(pool.end(), phishing.begin(), phishing.end());
    provenance = "legitimate=" + config.data.legitimate_path +
                 ";phishing=" + config.data.phishing_path;
  }
  if (config.balance_target > 0) {
    pool = balance(pool, config.balance_target, config.seed);
  }

  const LabeledDataset large = LabeledDataset::from_urls(pool, provenance);
  std::vector<ComparisonRow> rows = run_paired_evaluations(large, "large", config);

  if (config.run_small) {
    const auto small_rows = subsample(pool, config.small_fraction, mix_seed(config.seed, 0x736d616c6cULL));
    const LabeledDataset small = LabeledDataset::from_urls(small_rows, provenance + " (subsample)");
    auto small_results = run_paired_evaluations(small, "small", config);
    rows.insert(rows.end(), std::make_move_iterator(small_results.begin()),
                std::make_move_iterator(small_results.end()));
  }

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir / "runs");

  std::vector<std::string> datasets = {"large"};
  if (config.run_small) datasets.push_back("small");

  for (const auto& dataset : datasets) {
    write_text_atomic(config.out_dir / ("results_" + dataset + ".csv"),
                      detail::results_csv(rows, dataset));
  }
  // error summary only covers algorithms whose pair completed
  std::vector<ComparisonRow> paired;
  for (const auto& row : rows) {
    if (!row.failed) paired.push_back(row);
  }
  const auto summary = summarize_errors(paired);
  for (const auto& dataset : datasets) {
    write_text_atomic(config.out_dir / ("errors_" + dataset + ".csv"),
                      detail::errors_csv(summary, dataset));
  }

  for (const auto& row : rows) {
    const std::string stem = row.dataset_name + "_" + std::string(algorithm_id(row.algorithm)) +
                             "_" + std::string(feature_mode_id(row.mode));
    write_text_atomic(config.out_dir / "runs" / (stem + ".json"),
                      detail::run_to_json(row, config.seed, config.spec_for(row.algorithm).params).dump(2));
    if (row.report.importances) {
      write_text_atomic(config.out_dir / ("importance_" + stem + ".csv"),
                        detail::importance_csv(*row.report.importances));
    }
  }
  return rows;
}

/// One CSV row per URL: url, optional label, then the 26 feature columns in
/// schema order. Header is always present.
inline std::string features_csv(const std::vector<LabeledUrl>& rows, bool with_labels) {
  std::string out = "url";
  if (with_labels) out += ",label";
  for (const auto& name : FeatureSchema::v1().names()) out += "," + name;
  out += '\n';
  for (const auto& row : rows) {
    out += csv_escape(normalize(row.url));
    if (with_labels) out += ',' + std::string(label_name(row.label));
    const FeatureVector fv = extract(parse_url(row.url));
    for (const auto v : fv.values) out += ',' + std::to_string(v);
    out += '\n';
  }
  return out;
}

// ---- experiment config file (JSON), CLI flags override file values ----

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  if (j.contains("data")) {
    const auto& d = j.at("data");
    config.data.csv_path = d.value("csv", "");
    config.data.url_column = d.value("url_column", "url");
    config.data.label_column = d.value("label_column", "label");
    config.data.phishing_path = d.value("phishing_urls", "");
    config.data.legitimate_path = d.value("legitimate_urls", "");
  }
  config.seed = j.value("seed", std::uint64_t{42});
  config.train_fraction = j.value("train_fraction", 0.8);
  config.balance_target = j.value("balance_target", std::size_t{10000});
  config.run_small = j.value("small", false);
  config.small_fraction = j.value("small_fraction", 0.10);
  config.include_keyword_only = j.value("keyword_only_mode", false);
  config.out_dir = j.value("out", std::string("results"));
  if (j.contains("algorithms")) {
    config.algorithms.clear();
    for (const auto& id : j.at("algorithms")) {
      const auto algorithm = algorithm_from_id(id.get<std::string>());
      if (!algorithm) throw InvalidConfig("unknown algorithm: " + id.get<std::string>());
      config.algorithms.push_back(*algorithm);
    }
  }
  if (j.contains("hyperparameters")) {
    for (const auto& [id, params] : j.at("hyperparameters").items()) {
      const auto algorithm = algorithm_from_id(id);
      if (!algorithm) throw InvalidConfig("unknown algorithm: " + id);
      config.overrides[*algorithm] = params.get<Hyperparameters>();
    }
  }
  return config;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

}  // namespace phishurl
