#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phishurl/csv.hpp"
#include "phishurl/errors.hpp"
#include "phishurl/features.hpp"
#include "phishurl/random.hpp"
#include "phishurl/url.hpp"

namespace phishurl {

// phishing is the positive class everywhere
enum class Label : std::uint8_t { legitimate = 0, phishing = 1 };

inline std::string_view label_name(Label label) {
  return label == Label::phishing ? "phishing" : "legitimate";
}

// accepted spellings: {phishing, legitimate, 1, 0}, case-insensitive
inline std::optional<Label> parse_label(std::string_view text) {
  std::string lower;
  lower.reserve(text.size());
  for (char c : text) {
    lower.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  if (lower == "phishing" || lower == "1") return Label::phishing;
  if (lower == "legitimate" || lower == "0") return Label::legitimate;
  return std::nullopt;
}

struct LabeledUrl {
  std::string url;
  Label label;
};

struct LoadResult {
  std::vector<LabeledUrl> rows;
  std::size_t skipped = 0;
};

namespace detail {
inline std::string trim_copy(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return std::string(s.substr(b, e - b));
}
}  // namespace detail

/// Load labeled URLs from a CSV with a header row. Rows with an empty URL,
/// an unrecognized label or the wrong field count are skipped and counted.
inline LoadResult load_csv(const std::string& path, const std::string& url_column,
                           const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);

  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw EmptyDataset("empty file: " + path);

  std::size_t url_idx = fields.size(), label_idx = fields.size();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string name = detail::trim_copy(fields[i]);
    if (name == url_column) url_idx = i;
    if (name == label_column) label_idx = i;
  }
  if (url_idx == fields.size()) throw MissingColumn(url_column);
  if (label_idx == fields.size()) throw MissingColumn(label_column);

  LoadResult result;
  const std::size_t width = fields.size();
  while (reader.next(fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != width) {
      ++result.skipped;
      continue;
    }
    const std::string url = detail::trim_copy(fields[url_idx]);
    const auto label = parse_label(detail::trim_copy(fields[label_idx]));
    if (url.empty() || !label) {
      ++result.skipped;
      continue;
    }
    result.rows.push_back({url, *label});
  }
  if (result.rows.empty()) {
    throw EmptyDataset(path + ": 0 valid rows, " + std::to_string(result.skipped) + " skipped");
  }
  return result;
}

/// Load a plain text file of one URL per line, all rows sharing one label.
/// Matches per-category corpus layouts. Blank lines are ignored.
inline LoadResult load_url_lines(const std::string& path, Label label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);

  LoadResult result;
  std::string line;
  while (std::getline(in, line)) {
    const std::string url = detail::trim_copy(line);
    if (url.empty()) continue;
    result.rows.push_back({url, label});
  }
  if (result.rows.empty()) throw EmptyDataset(path + ": 0 valid rows");
  return result;
}

/// Keep every minority-class row and a seeded uniform sample of
/// `majority_target` majority-class rows. Input order is preserved.
inline std::vector<LabeledUrl> balance(const std::vector<LabeledUrl>& pool,
                                       std::size_t majority_target, std::uint64_t seed) {
  std::size_t phishing = 0;
  for (const auto& row : pool) {
    if (row.label == Label::phishing) ++phishing;
  }
  const std::size_t legitimate = pool.size() - phishing;
  const Label majority = phishing > legitimate ? Label::phishing : Label::legitimate;
  const std::size_t majority_count = std::max(phishing, legitimate);
  if (majority_count < majority_target) {
    throw InsufficientMajority("majority class has " + std::to_string(majority_count) +
                               " rows, need " + std::to_string(majority_target));
  }

  Rng rng(mix_seed(seed, 0x62616c616e6365ULL));  // "balance" stream
  const auto picks = rng.sample_indices(majority_count, majority_target);

  std::vector<LabeledUrl> out;
  out.reserve(pool.size() - majority_count + majority_target);
  std::size_t majority_seen = 0, pick_pos = 0;
  for (const auto& row : pool) {
    if (row.label != majority) {
      out.push_back(row);
      continue;
    }
    if (pick_pos < picks.size() && picks[pick_pos] == majority_seen) {
      out.push_back(row);
      ++pick_pos;
    }
    ++majority_seen;
  }
  return out;
}

namespace detail {

// Largest-remainder allocation of per-class take counts for a stratified
// sample: totals come out to floor(n * fraction) and every class is within
// one row of its exact share.
inline std::vector<std::size_t> stratified_take_counts(const std::vector<std::size_t>& class_sizes,
                                                       double fraction) {
  std::size_t n = 0;
  for (auto s : class_sizes) n += s;
  const auto total = static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 1e-9));

  std::vector<std::size_t> take(class_sizes.size());
  std::vector<std::pair<double, std::size_t>> remainders;  // (-remainder, class) for sorting
  std::size_t allocated = 0;
  for (std::size_t c = 0; c < class_sizes.size(); ++c) {
    const double exact = static_cast<double>(class_sizes[c]) * fraction;
    take[c] = std::min(class_sizes[c], static_cast<std::size_t>(std::floor(exact + 1e-9)));
    allocated += take[c];
    remainders.emplace_back(-(exact - static_cast<double>(take[c])), c);
  }
  std::sort(remainders.begin(), remainders.end());
  for (const auto& [neg_rem, c] : remainders) {
    if (allocated >= total) break;
    if (take[c] < class_sizes[c]) {
      ++take[c];
      ++allocated;
    }
  }
  return take;
}

// Seeded stratified index sample over a label sequence; output ascending.
inline std::vector<std::size_t> stratified_sample_indices(const std::vector<Label>& labels,
                                                          double fraction, std::uint64_t seed) {
  std::vector<std::size_t> legit, phish;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::phishing ? phish : legit).push_back(i);
  }
  const auto take = stratified_take_counts({legit.size(), phish.size()}, fraction);

  std::vector<std::size_t> out;
  out.reserve(take[0] + take[1]);
  Rng legit_rng(mix_seed(seed, 1));
  for (auto k : legit_rng.sample_indices(legit.size(), take[0])) out.push_back(legit[k]);
  Rng phish_rng(mix_seed(seed, 2));
  for (auto k : phish_rng.sample_indices(phish.size(), take[1])) out.push_back(phish[k]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Seeded stratified subsample preserving the class ratio up to
/// largest-remainder rounding. fraction == 1 returns the input unchanged.
inline std::vector<LabeledUrl> subsample(const std::vector<LabeledUrl>& data, double fraction,
                                         std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw InvalidConfig("subsample fraction must be in (0, 1]");
  }
  if (fraction == 1.0) return data;
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const auto& row : data) labels.push_back(row.label);
  std::vector<LabeledUrl> out;
  for (auto i : detail::stratified_sample_indices(labels, fraction, seed)) {
    out.push_back(data[i]);
  }
  return out;
}

struct DatasetRow {
  FeatureVector features;
  Label label;
  std::string source_url;
};

/// Feature matrix plus labels plus provenance. Immutable once built; all
/// rows share one schema version.
class LabeledDataset {
 public:
  LabeledDataset(std::string schema_version, std::string provenance)
      : schema_version_(std::move(schema_version)), provenance_(std::move(provenance)) {}

  static LabeledDataset from_urls(const std::vector<LabeledUrl>& rows, std::string provenance) {
    LabeledDataset ds(std::string(kSchemaVersion), std::move(provenance));
    ds.rows_.reserve(rows.size());
    for (const auto& row : rows) {
      ds.add(extract(parse_url(row.url)), row.label, row.url);
    }
    return ds;
  }

  void add(FeatureVector features, Label label, std::string source_url) {
    if (features.schema_version != schema_version_) {
      throw SchemaMismatch("row schema " + features.schema_version + " != dataset schema " +
                           schema_version_);
    }
    if (label == Label::phishing) ++phishing_;
    rows_.push_back({std::move(features), label, std::move(source_url)});
  }

  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const DatasetRow& row(std::size_t i) const { return rows_[i]; }
  const std::vector<DatasetRow>& rows() const { return rows_; }
  const std::string& schema_version() const { return schema_version_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t phishing_count() const { return phishing_; }
  std::size_t legitimate_count() const { return rows_.size() - phishing_; }

  std::vector<Label> labels() const {
    std::vector<Label> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.label);
    return out;
  }

  LabeledDataset subset(const std::vector<std::size_t>& indices) const {
    LabeledDataset out(schema_version_, provenance_);
    out.rows_.reserve(indices.size());
    for (auto i : indices) {
      out.add(rows_[i].features, rows_[i].label, rows_[i].source_url);
    }
    return out;
  }

 private:
  std::vector<DatasetRow> rows_;
  std::string schema_version_;
  std::string provenance_;
  std::size_t phishing_ = 0;
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Disjoint, exhaustive train/test partition of row indices; deterministic
/// given the seed, stratified per class when requested. Both sides keep the
/// original row order.
inline SplitIndices split_indices(const std::vector<Label>& labels, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0) || !(spec.train_fraction < 1.0)) {
    throw InvalidConfig("train_fraction must be in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> classes;
  if (spec.stratified) {
    std::vector<std::size_t> legit, phish;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      (labels[i] == Label::phishing ? phish : legit).push_back(i);
    }
    if (legit.size() < 2 || phish.size() < 2) {
      throw TooFewRows("stratified split needs at least 2 rows of each class");
    }
    classes = {std::move(legit), std::move(phish)};
  } else {
    if (labels.size() < 2) throw TooFewRows("split needs at least 2 rows");
    std::vector<std::size_t> all(labels.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    classes = {std::move(all)};
  }

  std::vector<std::size_t> sizes;
  for (const auto& c : classes) sizes.push_back(c.size());
  auto take = detail::stratified_take_counts(sizes, spec.train_fraction);

  SplitIndices out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    // both sides must see every class
    take[c] = std::clamp<std::size_t>(take[c], 1, classes[c].size() - 1);
    Rng rng(mix_seed(spec.seed, 0x73706c6974ULL + c));  // "split" stream per class
    auto order = classes[c];
    rng.shuffle(order);
    out.train.insert(out.train.end(), order.begin(), order.begin() + take[c]);
    out.test.insert(out.test.end(), order.begin() + take[c], order.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

inline std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data,
                                                       const SplitSpec& spec) {
  const auto idx = split_indices(data.labels(), spec);
  return {data.subset(idx.train), data.subset(idx.test)};
}

}  // namespace phishurl
