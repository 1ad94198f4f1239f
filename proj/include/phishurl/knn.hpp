#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "phishurl/numeric.hpp"

namespace phishurl {

/// k-nearest-neighbor vote with Euclidean distance. Training is storage;
/// the score is the phishing fraction among the k nearest rows. Distance
/// ties break on the lower row index so predictions are deterministic.
struct KnnModel {
  struct Params {
    std::size_t k = 5;
  };

  Matrix train_x;  // already standardized when the owning model standardizes
  std::vector<int> train_y;
  std::size_t k = 5;

  void fit(Matrix x, std::vector<int> y, const Params& params) {
    train_x = std::move(x);
    train_y = std::move(y);
    k = params.k;
  }

  double score(std::span<const double> row) const {
    const std::size_t n = train_x.rows();
    const std::size_t kk = std::min(k, n);
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      dist.emplace_back(squared_distance(row, train_x.row(i)), i);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    std::size_t votes = 0;
    for (std::size_t i = 0; i < kk; ++i) {
      votes += static_cast<std::size_t>(train_y[dist[i].second]);
    }
    return static_cast<double>(votes) / static_cast<double>(kk);
  }
};

}  // namespace phishurl
