#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "phishurl/numeric.hpp"

namespace phishurl {

// mean binary cross-entropy + (l2/2)*||w||^2, bias unregularized; gradient
// returned as [dw..., db]. Shared by the trainer and the gradient checks.
inline double logreg_loss_and_gradient(const Matrix& x, const std::vector<int>& y,
                                       std::span<const double> w, double b, double l2,
                                       std::vector<double>& grad_w, double& grad_b) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  grad_w.assign(d, 0.0);
  grad_b = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.row(i);
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
    const double p = sigmoid(z);
    const double target = static_cast<double>(y[i]);
    const double pc = std::clamp(p, 1e-15, 1.0 - 1e-15);
    loss -= target * std::log(pc) + (1.0 - target) * std::log(1.0 - pc);
    const double err = p - target;
    for (std::size_t j = 0; j < d; ++j) grad_w[j] += err * row[j];
    grad_b += err;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  grad_b *= inv_n;
  for (std::size_t j = 0; j < d; ++j) {
    grad_w[j] = grad_w[j] * inv_n + l2 * w[j];
    loss += 0.5 * l2 * w[j] * w[j];
  }
  return loss;
}

/// Logistic regression trained by full-batch gradient descent with Armijo
/// backtracking on the step size. Stops when the gradient norm falls below
/// `tol`; hitting the iteration cap leaves `converged` false with the
/// best-so-far weights.
struct LogisticRegressionModel {
  struct Params {
    double l2 = 1e-4;
    double tol = 1e-6;
    std::size_t max_iters = 10000;
  };

  std::vector<double> weights;
  double bias = 0.0;
  bool converged = false;

  void fit(const Matrix& x, const std::vector<int>& y, const Params& params) {
    const std::size_t d = x.cols();
    weights.assign(d, 0.0);
    bias = 0.0;
    converged = false;

    std::vector<double> grad_w(d), trial_w(d), trial_grad_w(d);
    double grad_b = 0.0, trial_grad_b = 0.0;
    double loss = logreg_loss_and_gradient(x, y, weights, bias, params.l2, grad_w, grad_b);
    double step = 1.0;

    for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
      double grad_sq = grad_b * grad_b;
      for (double g : grad_w) grad_sq += g * g;
      if (std::sqrt(grad_sq) < params.tol) {
        converged = true;
        return;
      }

      double trial_loss = 0.0, trial_b = 0.0;
      bool accepted = false;
      for (int backtrack = 0; backtrack < 60; ++backtrack) {
        for (std::size_t j = 0; j < d; ++j) trial_w[j] = weights[j] - step * grad_w[j];
        trial_b = bias - step * grad_b;
        trial_loss =
            logreg_loss_and_gradient(x, y, trial_w, trial_b, params.l2, trial_grad_w, trial_grad_b);
        if (trial_loss <= loss - 1e-4 * step * grad_sq) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) return;  // step underflow: keep best-so-far, flag stays false

      weights = trial_w;
      bias = trial_b;
      loss = trial_loss;
      grad_w = trial_grad_w;
      grad_b = trial_grad_b;
      step = std::min(step * 2.0, 1.0e6);
    }
  }

  double decision(std::span<const double> row) const {
    double z = bias;
    for (std::size_t j = 0; j < row.size(); ++j) z += weights[j] * row[j];
    return z;
  }

  double score(std::span<const double> row) const { return sigmoid(decision(row)); }
};

}  // namespace phishurl
