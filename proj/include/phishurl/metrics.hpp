#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phishurl/dataset.hpp"
#include "phishurl/errors.hpp"

namespace phishurl {

// phishing is the positive class: tp = phishing predicted as phishing
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
};

inline ConfusionMatrix confusion(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) {
    throw LengthMismatch("predictions: " + std::to_string(predicted.size()) +
                         ", truth: " + std::to_string(truth.size()));
  }
  if (predicted.empty()) throw EmptyInput("no rows to evaluate");

  ConfusionMatrix m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool pred_phish = predicted[i] == Label::phishing;
    const bool is_phish = truth[i] == Label::phishing;
    if (is_phish) {
      pred_phish ? ++m.tp : ++m.fn;
    } else {
      pred_phish ? ++m.fp : ++m.tn;
    }
  }
  return m;
}

// Ratios in [0, 1]; nullopt means the denominator was zero. A degenerate
// test set is reported as undefined, never masked as 0 or 1.
struct Metrics {
  std::optional<double> tpr, fnr, tnr, fpr, precision, recall, accuracy;
};

inline Metrics metrics(const ConfusionMatrix& m) {
  const auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics out;
  out.tpr = ratio(m.tp, m.tp + m.fn);
  out.fnr = ratio(m.fn, m.tp + m.fn);
  out.tnr = ratio(m.tn, m.tn + m.fp);
  out.fpr = ratio(m.fp, m.tn + m.fp);
  out.precision = ratio(m.tp, m.tp + m.fp);
  out.recall = out.tpr;  // same ratio, same bits
  out.accuracy = ratio(m.tp + m.tn, m.total());
  return out;
}

struct EvalReport {
  ConfusionMatrix matrix;
  Metrics scores;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  std::optional<std::vector<std::pair<std::string, double>>> importances;
};

/// Wall time of an action on the monotonic clock, in seconds.
template <typename F>
auto timed(F&& action) {
  const auto start = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
    std::forward<F>(action)();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } else {
    auto result = std::forward<F>(action)();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::pair{std::move(result), seconds};
  }
}

}  // namespace phishurl
