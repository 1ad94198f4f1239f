#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "phishurl/random.hpp"
#include "phishurl/tree.hpp"

namespace phishurl {

/// Bagged ensemble of Gini trees, combined by voting. Each tree draws its
/// own bootstrap sample and feature subsets from an independent stream
/// derived from (seed, tree index), so per-tree work could run in any
/// order and still produce the identical forest.
struct RandomForestModel {
  struct Params {
    std::size_t n_trees = 200;
    std::size_t max_depth = 0;  // unlimited
    std::size_t min_samples_split = 2;
    std::size_t mtry = 0;  // 0 = floor(sqrt(n_features))
  };

  std::vector<ClassificationTree> trees;
  std::vector<double> importance_gain;  // per feature, unnormalized

  void fit(const Matrix& x, const std::vector<int>& y, const Params& params, std::uint64_t seed) {
    const std::size_t n = x.rows();
    ClassificationTree::Params tree_params;
    tree_params.max_depth = params.max_depth;
    tree_params.min_samples_split = params.min_samples_split;
    tree_params.mtry = params.mtry != 0
                           ? params.mtry
                           : static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols())));

    trees.assign(params.n_trees, {});
    importance_gain.assign(x.cols(), 0.0);
    std::vector<double> tree_importance(x.cols());
    for (std::size_t t = 0; t < params.n_trees; ++t) {
      Rng rng(mix_seed(seed, t));
      std::vector<std::size_t> bootstrap(n);
      for (auto& s : bootstrap) s = rng.below(n);
      std::fill(tree_importance.begin(), tree_importance.end(), 0.0);
      trees[t].fit(x, y, std::move(bootstrap), tree_params, rng, &tree_importance);
      for (std::size_t f = 0; f < x.cols(); ++f) importance_gain[f] += tree_importance[f];
    }
  }

  // fraction of trees voting phishing; a tree votes its leaf majority
  double score(std::span<const double> row) const {
    std::size_t votes = 0;
    for (const auto& tree : trees) {
      if (tree.predict_fraction(row) >= 0.5) ++votes;
    }
    return static_cast<double>(votes) / static_cast<double>(trees.size());
  }
};

}  // namespace phishurl
