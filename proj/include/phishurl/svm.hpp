#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "phishurl/numeric.hpp"
#include "phishurl/random.hpp"

namespace phishurl {

/// RBF-kernel SVM state after training: support vectors with their signed
/// dual coefficients (alpha_i * y_i) and the bias. decision(x) >= 0 means
/// phishing.
struct SvmModel {
  struct Params {
    double c = 1.0;
    double gamma = 0.0;  // 0 = 1 / (n_features * pooled feature variance)
    double tol = 1e-3;
    std::size_t max_steps = 0;  // 0 = max(20 * n, 20000) successful pair updates
  };

  double gamma = 0.0;
  double bias = 0.0;
  Matrix support_x;
  std::vector<double> dual_coef;  // alpha_i * y_i per support vector
  bool converged = true;

  double decision(std::span<const double> row) const {
    double f = bias;
    for (std::size_t i = 0; i < support_x.rows(); ++i) {
      f += dual_coef[i] * std::exp(-gamma * squared_distance(row, support_x.row(i)));
    }
    return f;
  }

  double score(std::span<const double> row) const { return sigmoid(decision(row)); }
};

// Full SMO state kept so tests can check the KKT conditions per training
// point; SvmModel is the compact predictive slice of it.
struct SmoResult {
  SvmModel model;
  std::vector<double> alpha;
  std::size_t steps = 0;
};

namespace detail {

class SmoSolver {
 public:
  SmoSolver(const Matrix& x, const std::vector<double>& y, const SvmModel::Params& params,
            std::uint64_t seed)
      : x_(x), y_(y), c_(params.c), tol_(params.tol), rng_(mix_seed(seed, 0x736d6fULL)) {
    const std::size_t n = x.rows();
    gamma_ = params.gamma > 0.0 ? params.gamma : scale_gamma(x);
    max_steps_ = params.max_steps != 0 ? params.max_steps
                                       : std::max<std::size_t>(20 * n, 20000);
    alpha_.assign(n, 0.0);
    errors_.resize(n);
    for (std::size_t i = 0; i < n; ++i) errors_[i] = -y_[i];  // u = 0 initially
    norms_.resize(n);
    for (std::size_t i = 0; i < n; ++i) norms_[i] = dot(i, i);
  }

  SmoResult solve() {
    const std::size_t n = x_.rows();
    bool examine_all = true;
    std::size_t changed = 0;
    while ((changed > 0 || examine_all) && steps_ < max_steps_) {
      changed = 0;
      for (std::size_t i = 0; i < n && steps_ < max_steps_; ++i) {
        if (examine_all || is_interior(alpha_[i])) changed += examine(i);
      }
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;  // one clean full sweep ends the loop
      }
    }

    SmoResult result;
    result.alpha = alpha_;
    result.steps = steps_;
    result.model.gamma = gamma_;
    result.model.bias = bias_;
    result.model.converged = steps_ < max_steps_;
    std::size_t sv = 0;
    for (double a : alpha_) sv += a > kAlphaEps ? 1 : 0;
    result.model.support_x = Matrix(sv, x_.cols());
    result.model.dual_coef.reserve(sv);
    std::size_t at = 0;
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      if (alpha_[i] <= kAlphaEps) continue;
      auto dst = result.model.support_x.row(at++);
      const auto src = x_.row(i);
      std::copy(src.begin(), src.end(), dst.begin());
      result.model.dual_coef.push_back(alpha_[i] * y_[i]);
    }
    return result;
  }

 private:
  static constexpr double kAlphaEps = 1e-12;
  static constexpr double kStepEps = 1e-3;

  static double scale_gamma(const Matrix& x) {
    const std::size_t total = x.data().size();
    if (total == 0) return 1.0;
    double mean = 0.0;
    for (double v : x.data()) mean += v;
    mean /= static_cast<double>(total);
    double var = 0.0;
    for (double v : x.data()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(total);
    const double denom = static_cast<double>(x.cols()) * var;
    return denom > 0.0 ? 1.0 / denom : 1.0 / static_cast<double>(x.cols());
  }

  double dot(std::size_t i, std::size_t j) const {
    const auto a = x_.row(i);
    const auto b = x_.row(j);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  }

  double kernel(std::size_t i, std::size_t j) const {
    return std::exp(-gamma_ * (norms_[i] + norms_[j] - 2.0 * dot(i, j)));
  }

  bool is_interior(double a) const { return a > kAlphaEps && a < c_ - kAlphaEps; }

  bool examine(std::size_t i2) {
    const double y2 = y_[i2];
    const double a2 = alpha_[i2];
    const double e2 = errors_[i2];
    const double r2 = e2 * y2;
    if (!((r2 < -tol_ && a2 < c_ - kAlphaEps) || (r2 > tol_ && a2 > kAlphaEps))) return false;

    // heuristic 1: the non-bound point with the largest |E1 - E2|
    std::size_t best = i2;
    double best_gap = 0.0;
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      if (!is_interior(alpha_[i])) continue;
      const double gap = std::abs(errors_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best != i2 && take_step(best, i2)) return true;

    // heuristic 2: non-bound points from a random start
    const std::size_t n = alpha_.size();
    std::size_t start = rng_.below(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = (start + k) % n;
      if (is_interior(alpha_[i]) && take_step(i, i2)) return true;
    }
    // heuristic 3: everything from a random start
    start = rng_.below(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = (start + k) % n;
      if (take_step(i, i2)) return true;
    }
    return false;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1_old = alpha_[i1], a2_old = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = errors_[i1], e2 = errors_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2_old - a1_old);
      hi = std::min(c_, c_ + a2_old - a1_old);
    } else {
      lo = std::max(0.0, a1_old + a2_old - c_);
      hi = std::min(c_, a1_old + a2_old);
    }
    if (lo >= hi) return false;

    const double k11 = kernel(i1, i1), k12 = kernel(i1, i2), k22 = kernel(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2 = 0.0;
    if (eta > 0.0) {
      a2 = a2_old + y2 * (e1 - e2) / eta;
      a2 = std::clamp(a2, lo, hi);
    } else {
      // objective is linear along the constraint line: compare endpoints
      const double u1 = e1 + y1, u2 = e2 + y2;
      const double v1 = u1 - bias_ - a1_old * y1 * k11 - a2_old * y2 * k12;
      const double v2 = u2 - bias_ - a1_old * y1 * k12 - a2_old * y2 * k22;
      const auto dual = [&](double t2) {
        const double t1 = a1_old + s * (a2_old - t2);
        return 0.5 * k11 * t1 * t1 + 0.5 * k22 * t2 * t2 + s * k12 * t1 * t2 + y1 * t1 * v1 +
               y2 * t2 * v2 - t1 - t2;
      };
      const double lo_obj = dual(lo), hi_obj = dual(hi);
      if (lo_obj < hi_obj - 1e-12) {
        a2 = lo;
      } else if (hi_obj < lo_obj - 1e-12) {
        a2 = hi;
      } else {
        return false;
      }
    }
    if (std::abs(a2 - a2_old) < kStepEps * (a2 + a2_old + kStepEps)) return false;

    const double a1 = a1_old + s * (a2_old - a2);
    const double d1 = y1 * (a1 - a1_old), d2 = y2 * (a2 - a2_old);

    const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1 > kAlphaEps && a1 < c_ - kAlphaEps) {
      b_new = b1;
    } else if (a2 > kAlphaEps && a2 < c_ - kAlphaEps) {
      b_new = b2;
    } else {
      b_new = 0.5 * (b1 + b2);
    }
    const double db = b_new - bias_;

    for (std::size_t j = 0; j < alpha_.size(); ++j) {
      errors_[j] += d1 * kernel(i1, j) + d2 * kernel(i2, j) + db;
    }
    alpha_[i1] = a1;
    alpha_[i2] = a2;
    bias_ = b_new;
    ++steps_;
    return true;
  }

  const Matrix& x_;
  const std::vector<double>& y_;
  double c_;
  double tol_;
  double gamma_ = 0.0;
  double bias_ = 0.0;
  std::size_t max_steps_ = 0;
  std::size_t steps_ = 0;
  std::vector<double> alpha_;
  std::vector<double> errors_;
  std::vector<double> norms_;
  Rng rng_;
};

}  // namespace detail

/// Train an RBF SVM by sequential minimal optimization. Labels are 0/1 and
/// converted to -1/+1 internally. Deterministic given the seed.
inline SmoResult fit_svm(const Matrix& x, const std::vector<int>& y_binary,
                         const SvmModel::Params& params, std::uint64_t seed) {
  std::vector<double> y(y_binary.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = y_binary[i] == 1 ? 1.0 : -1.0;
  detail::SmoSolver solver(x, y, params, seed);
  return solver.solve();
}

}  // namespace phishurl
