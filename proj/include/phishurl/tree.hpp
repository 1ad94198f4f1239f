#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "phishurl/numeric.hpp"
#include "phishurl/random.hpp"

namespace phishurl {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // leaf payload: positive fraction or boosting weight
};

namespace detail {

struct NodeTask {
  std::size_t begin, end;  // range into the shared sample-index buffer
  std::size_t depth;
  std::int32_t node;
};

// midpoint of two distinct sorted values; falls back to the lower value when
// rounding would make `x <= threshold` swallow both sides
inline double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

}  // namespace detail

/// Binary classification tree grown greedily on the Gini criterion.
/// `mtry` features are drawn per node (0 means all); leaves store the
/// positive-class fraction. Gain per split is accumulated into
/// `importance` (n-weighted impurity decrease) when provided.
class ClassificationTree {
 public:
  struct Params {
    std::size_t max_depth = 0;  // 0 = unlimited
    std::size_t min_samples_split = 2;
    std::size_t mtry = 0;  // 0 = all features
  };

  void fit(const Matrix& x, const std::vector<int>& y, std::vector<std::size_t> samples,
           const Params& params, Rng& rng, std::vector<double>* importance = nullptr) {
    nodes_.clear();
    if (samples.empty()) {
      nodes_.push_back({});
      return;
    }
    const std::size_t n_features = x.cols();
    const std::size_t mtry =
        params.mtry == 0 ? n_features : std::min(params.mtry, n_features);

    std::vector<std::pair<double, int>> sorted;  // (value, label) scratch
    std::vector<detail::NodeTask> stack;
    nodes_.push_back({});
    stack.push_back({0, samples.size(), 0, 0});

    while (!stack.empty()) {
      const auto task = stack.back();
      stack.pop_back();
      const std::size_t n = task.end - task.begin;

      std::size_t pos = 0;
      for (std::size_t i = task.begin; i < task.end; ++i) pos += static_cast<std::size_t>(y[samples[i]]);
      nodes_[task.node].value = static_cast<double>(pos) / static_cast<double>(n);

      const bool depth_capped = params.max_depth != 0 && task.depth >= params.max_depth;
      if (pos == 0 || pos == n || n < params.min_samples_split || depth_capped) continue;

      // candidate features in ascending order so gain ties resolve to the
      // lowest schema index
      auto candidates = rng.sample_indices(n_features, mtry);

      const double parent_impurity = static_cast<double>(n) * gini(n, pos);
      double best_gain = 0.0;
      std::size_t best_feature = 0;
      double best_threshold = 0.0;

      for (auto f : candidates) {
        sorted.clear();
        for (std::size_t i = task.begin; i < task.end; ++i) {
          sorted.emplace_back(x.at(samples[i], f), y[samples[i]]);
        }
        std::sort(sorted.begin(), sorted.end());
        std::size_t left_n = 0, left_pos = 0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          ++left_n;
          left_pos += static_cast<std::size_t>(sorted[i].second);
          if (sorted[i].first == sorted[i + 1].first) continue;
          const std::size_t right_n = n - left_n;
          const double child_impurity = static_cast<double>(left_n) * gini(left_n, left_pos) +
                                        static_cast<double>(right_n) * gini(right_n, pos - left_pos);
          const double gain = parent_impurity - child_impurity;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = f;
            best_threshold = detail::split_threshold(sorted[i].first, sorted[i + 1].first);
          }
        }
      }
      if (best_gain <= 0.0) continue;  // all candidates constant: stay a leaf

      if (importance) (*importance)[best_feature] += best_gain;

      const auto mid = std::partition(samples.begin() + static_cast<std::ptrdiff_t>(task.begin),
                                      samples.begin() + static_cast<std::ptrdiff_t>(task.end),
                                      [&](std::size_t s) { return x.at(s, best_feature) <= best_threshold; });
      const auto split_at = static_cast<std::size_t>(mid - samples.begin());

      auto& node = nodes_[task.node];
      node.feature = static_cast<std::int32_t>(best_feature);
      node.threshold = best_threshold;
      node.left = static_cast<std::int32_t>(nodes_.size());
      node.right = node.left + 1;
      nodes_.push_back({});
      nodes_.push_back({});
      stack.push_back({split_at, task.end, task.depth + 1, node.right});
      stack.push_back({task.begin, split_at, task.depth + 1, node.left});
    }
  }

  // positive-class fraction at the leaf x falls into
  double predict_fraction(std::span<const double> row) const {
    std::int32_t i = 0;
    while (nodes_[i].feature >= 0) {
      i = row[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold
              ? nodes_[i].left
              : nodes_[i].right;
    }
    return nodes_[i].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& nodes() { return nodes_; }

 private:
  static double gini(std::size_t n, std::size_t pos) {
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);
  }

  std::vector<TreeNode> nodes_;
};

/// Regression tree on second-order gradient statistics: splits maximize
/// G^2/(H+lambda) gain, leaves store -G/(H+lambda). Used as the boosting
/// base learner; importance accumulates the split gain.
class GradientTree {
 public:
  struct Params {
    std::size_t max_depth = 4;
    std::size_t min_samples_split = 2;
    double lambda = 1.0;
    double min_gain = 1e-12;
  };

  void fit(const Matrix& x, const std::vector<double>& grad, const std::vector<double>& hess,
           const Params& params, std::vector<double>* importance = nullptr) {
    nodes_.clear();
    std::vector<std::size_t> samples(x.rows());
    std::iota(samples.begin(), samples.end(), std::size_t{0});
    if (samples.empty()) {
      nodes_.push_back({});
      return;
    }

    std::vector<std::pair<double, std::size_t>> sorted;  // (value, sample) scratch
    std::vector<detail::NodeTask> stack;
    nodes_.push_back({});
    stack.push_back({0, samples.size(), 0, 0});

    while (!stack.empty()) {
      const auto task = stack.back();
      stack.pop_back();
      const std::size_t n = task.end - task.begin;

      double g_sum = 0.0, h_sum = 0.0;
      for (std::size_t i = task.begin; i < task.end; ++i) {
        g_sum += grad[samples[i]];
        h_sum += hess[samples[i]];
      }
      nodes_[task.node].value = -g_sum / (h_sum + params.lambda);

      if (n < params.min_samples_split || task.depth >= params.max_depth) continue;

      const double parent_score = score(g_sum, h_sum, params.lambda);
      double best_gain = params.min_gain;
      std::size_t best_feature = 0;
      double best_threshold = 0.0;

      for (std::size_t f = 0; f < x.cols(); ++f) {
        sorted.clear();
        for (std::size_t i = task.begin; i < task.end; ++i) {
          sorted.emplace_back(x.at(samples[i], f), samples[i]);
        }
        std::sort(sorted.begin(), sorted.end());
        double gl = 0.0, hl = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          gl += grad[sorted[i].second];
          hl += hess[sorted[i].second];
          if (sorted[i].first == sorted[i + 1].first) continue;
          const double gain = 0.5 * (score(gl, hl, params.lambda) +
                                     score(g_sum - gl, h_sum - hl, params.lambda) - parent_score);
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = f;
            best_threshold = detail::split_threshold(sorted[i].first, sorted[i + 1].first);
          }
        }
      }
      if (best_gain <= params.min_gain) continue;

      if (importance) (*importance)[best_feature] += best_gain;

      const auto mid = std::partition(samples.begin() + static_cast<std::ptrdiff_t>(task.begin),
                                      samples.begin() + static_cast<std::ptrdiff_t>(task.end),
                                      [&](std::size_t s) { return x.at(s, best_feature) <= best_threshold; });
      const auto split_at = static_cast<std::size_t>(mid - samples.begin());

      auto& node = nodes_[task.node];
      node.feature = static_cast<std::int32_t>(best_feature);
      node.threshold = best_threshold;
      node.left = static_cast<std::int32_t>(nodes_.size());
      node.right = node.left + 1;
      nodes_.push_back({});
      nodes_.push_back({});
      stack.push_back({split_at, task.end, task.depth + 1, node.right});
      stack.push_back({task.begin, split_at, task.depth + 1, node.left});
    }
  }

  double predict(std::span<const double> row) const {
    std::int32_t i = 0;
    while (nodes_[i].feature >= 0) {
      i = row[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold
              ? nodes_[i].left
              : nodes_[i].right;
    }
    return nodes_[i].value;
  }

  void scale_leaves(double factor) {
    for (auto& node : nodes_) {
      if (node.feature < 0) node.value *= factor;
    }
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& nodes() { return nodes_; }

 private:
  static double score(double g, double h, double lambda) { return g * g / (h + lambda); }

  std::vector<TreeNode> nodes_;
};

}  // namespace phishurl
