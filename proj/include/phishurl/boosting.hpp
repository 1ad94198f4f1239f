#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "phishurl/numeric.hpp"
#include "phishurl/tree.hpp"

namespace phishurl {

/// Gradient boosted trees on the logistic loss with second-order splits.
/// Each round fits a GradientTree to the current gradients/hessians and adds
/// it scaled by the learning rate; if an added tree ever fails to lower the
/// training loss the step is halved until it does (or the tree is dropped),
/// so the recorded loss curve is non-increasing by construction. The stored
/// leaves already include the step scale: decision = base + sum of trees.
struct GradientBoostingModel {
  struct Params {
    std::size_t n_trees = 200;
    std::size_t max_depth = 4;
    double learning_rate = 0.1;
    double lambda = 1.0;
  };

  double base_score = 0.0;  // initial log-odds
  std::vector<GradientTree> trees;
  std::vector<double> importance_gain;   // per feature, unnormalized
  std::vector<double> train_loss_curve;  // mean logistic loss after each round

  void fit(const Matrix& x, const std::vector<int>& y, const Params& params) {
    const std::size_t n = x.rows();

    std::size_t pos = 0;
    for (int label : y) pos += static_cast<std::size_t>(label);
    const double p0 =
        std::clamp(static_cast<double>(pos) / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
    base_score = std::log(p0 / (1.0 - p0));

    std::vector<double> margin(n, base_score);
    std::vector<double> grad(n), hess(n), contrib(n);
    GradientTree::Params tree_params;
    tree_params.max_depth = params.max_depth;
    tree_params.lambda = params.lambda;

    trees.clear();
    trees.reserve(params.n_trees);
    importance_gain.assign(x.cols(), 0.0);
    train_loss_curve.clear();
    train_loss_curve.reserve(params.n_trees + 1);
    double loss = mean_log_loss(margin, y);
    train_loss_curve.push_back(loss);

    std::vector<double> tree_importance(x.cols());
    for (std::size_t t = 0; t < params.n_trees; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(margin[i]);
        grad[i] = p - static_cast<double>(y[i]);
        hess[i] = std::max(p * (1.0 - p), 1e-16);
      }
      GradientTree tree;
      std::fill(tree_importance.begin(), tree_importance.end(), 0.0);
      tree.fit(x, grad, hess, tree_params, &tree_importance);

      double scale = params.learning_rate;
      for (std::size_t i = 0; i < n; ++i) contrib[i] = tree.predict(x.row(i));
      double next_loss = loss_with_step(margin, contrib, scale, y);
      int halvings = 0;
      while (next_loss > loss && halvings < 30) {
        scale *= 0.5;
        next_loss = loss_with_step(margin, contrib, scale, y);
        ++halvings;
      }
      if (next_loss > loss) {
        train_loss_curve.push_back(loss);  // tree rejected, ensemble unchanged
        continue;
      }
      tree.scale_leaves(scale);
      for (std::size_t i = 0; i < n; ++i) margin[i] += scale * contrib[i];
      loss = next_loss;
      train_loss_curve.push_back(loss);
      for (std::size_t f = 0; f < x.cols(); ++f) importance_gain[f] += tree_importance[f];
      trees.push_back(std::move(tree));
    }
  }

  double decision(std::span<const double> row) const {
    double f = base_score;
    for (const auto& tree : trees) f += tree.predict(row);
    return f;
  }

  double score(std::span<const double> row) const { return sigmoid(decision(row)); }

 private:
  static double mean_log_loss(const std::vector<double>& margin, const std::vector<int>& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) {
      const double p = std::clamp(sigmoid(margin[i]), 1e-15, 1.0 - 1e-15);
      loss -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return loss / static_cast<double>(margin.size());
  }

  static double loss_with_step(const std::vector<double>& margin,
                               const std::vector<double>& contrib, double scale,
                               const std::vector<int>& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) {
      const double p = std::clamp(sigmoid(margin[i] + scale * contrib[i]), 1e-15, 1.0 - 1e-15);
      loss -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return loss / static_cast<double>(margin.size());
  }
};

}  // namespace phishurl
