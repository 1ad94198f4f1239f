#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "phishurl/numeric.hpp"
#include "phishurl/random.hpp"

namespace phishurl {

/// Fully connected net: ReLU hidden layers, sigmoid output, binary
/// cross-entropy loss. Sized input -> hidden... -> 1.
struct MlpModel {
  struct Params {
    std::vector<std::size_t> hidden = {40, 20, 10};
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t batch_size = 32;
    std::size_t epochs = 200;
  };

  struct Layer {
    Matrix w;                // out x in
    std::vector<double> b;   // out
  };

  std::vector<Layer> layers;
  bool converged = true;

  void init(std::size_t inputs, const std::vector<std::size_t>& hidden, Rng& rng) {
    layers.clear();
    std::vector<std::size_t> sizes;
    sizes.push_back(inputs);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(1);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      Layer layer;
      layer.w = Matrix(sizes[l + 1], sizes[l]);
      layer.b.assign(sizes[l + 1], 0.0);
      const double scale = std::sqrt(2.0 / static_cast<double>(sizes[l]));  // He init
      for (auto& v : layer.w.data()) v = scale * rng.normal();
      layers.push_back(std::move(layer));
    }
  }

  // forward pass; when `activations` is given it receives the input plus
  // every layer output (pre-sigmoid margin last)
  double forward(std::span<const double> row, std::vector<std::vector<double>>* activations = nullptr) const {
    std::vector<double> cur(row.begin(), row.end());
    if (activations) {
      activations->clear();
      activations->push_back(cur);
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto& layer = layers[l];
      std::vector<double> next(layer.b);
      for (std::size_t o = 0; o < layer.w.rows(); ++o) {
        const auto wrow = layer.w.row(o);
        double z = next[o];
        for (std::size_t i = 0; i < wrow.size(); ++i) z += wrow[i] * cur[i];
        next[o] = l + 1 < layers.size() ? std::max(z, 0.0) : z;  // ReLU except output
      }
      cur = std::move(next);
      if (activations) activations->push_back(cur);
    }
    return cur[0];  // margin; sigmoid applied by score()
  }

  double score(std::span<const double> row) const { return sigmoid(forward(row)); }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.w.data().size() + layer.b.size();
    return n;
  }

  double get_parameter(std::size_t k) const {
    for (const auto& layer : layers) {
      if (k < layer.w.data().size()) return layer.w.data()[k];
      k -= layer.w.data().size();
      if (k < layer.b.size()) return layer.b[k];
      k -= layer.b.size();
    }
    return 0.0;
  }

  void set_parameter(std::size_t k, double v) {
    for (auto& layer : layers) {
      if (k < layer.w.data().size()) {
        layer.w.data()[k] = v;
        return;
      }
      k -= layer.w.data().size();
      if (k < layer.b.size()) {
        layer.b[k] = v;
        return;
      }
      k -= layer.b.size();
    }
  }
};

struct MlpGradients {
  std::vector<Matrix> w;      // matches layer shapes
  std::vector<std::vector<double>> b;

  explicit MlpGradients(const MlpModel& model) {
    for (const auto& layer : model.layers) {
      w.emplace_back(layer.w.rows(), layer.w.cols());
      b.emplace_back(layer.b.size(), 0.0);
    }
  }

  void zero() {
    for (auto& m : w) std::fill(m.data().begin(), m.data().end(), 0.0);
    for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
  }
};

// Mean BCE loss over the given rows plus its gradient via backprop.
// Exposed separately from training so the analytic gradient can be checked
// against finite differences.
inline double mlp_loss_and_gradient(const MlpModel& model, const Matrix& x,
                                    const std::vector<int>& y, std::span<const std::size_t> rows,
                                    MlpGradients& grads) {
  grads.zero();
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  double loss = 0.0;
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev_delta;

  for (const auto r : rows) {
    const double margin = model.forward(x.row(r), &acts);
    const double p = sigmoid(margin);
    const double target = static_cast<double>(y[r]);
    const double pc = std::clamp(p, 1e-15, 1.0 - 1e-15);
    loss -= (target * std::log(pc) + (1.0 - target) * std::log(1.0 - pc)) * inv_n;

    // output delta: dBCE/dmargin = p - y
    delta.assign(1, (p - target) * inv_n);
    for (std::size_t l = model.layers.size(); l-- > 0;) {
      const auto& layer = model.layers[l];
      const auto& input = acts[l];
      for (std::size_t o = 0; o < layer.w.rows(); ++o) {
        grads.b[l][o] += delta[o];
        auto grow = grads.w[l].row(o);
        for (std::size_t i = 0; i < input.size(); ++i) grow[i] += delta[o] * input[i];
      }
      if (l == 0) break;
      prev_delta.assign(input.size(), 0.0);
      for (std::size_t o = 0; o < layer.w.rows(); ++o) {
        const auto wrow = layer.w.row(o);
        for (std::size_t i = 0; i < input.size(); ++i) prev_delta[i] += wrow[i] * delta[o];
      }
      // ReLU derivative at the previous layer's output
      for (std::size_t i = 0; i < prev_delta.size(); ++i) {
        if (acts[l][i] <= 0.0) prev_delta[i] = 0.0;
      }
      delta = prev_delta;
    }
  }
  return loss;
}

/// Mini-batch SGD with momentum. Batch order reshuffles every epoch from a
/// per-epoch stream of the training seed. If the loss ever turns non-finite
/// training stops and the best finite-loss snapshot is restored with
/// `converged` set false.
inline MlpModel fit_mlp(const Matrix& x, const std::vector<int>& y, const MlpModel::Params& params,
                        std::uint64_t seed) {
  MlpModel model;
  Rng init_rng(mix_seed(seed, 0));
  model.init(x.cols(), params.hidden, init_rng);

  MlpGradients grads(model);
  MlpGradients velocity(model);
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});

  MlpModel best = model;
  double best_loss = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    Rng epoch_rng(mix_seed(seed, epoch + 1));
    epoch_rng.shuffle(order);

    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
      const std::size_t end = std::min(start + params.batch_size, order.size());
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      epoch_loss += mlp_loss_and_gradient(model, x, y, batch, grads);
      ++batches;

      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& wdata = model.layers[l].w.data();
        auto& vdata = velocity.w[l].data();
        const auto& gdata = grads.w[l].data();
        for (std::size_t k = 0; k < wdata.size(); ++k) {
          vdata[k] = params.momentum * vdata[k] - params.learning_rate * gdata[k];
          wdata[k] += vdata[k];
        }
        for (std::size_t k = 0; k < model.layers[l].b.size(); ++k) {
          velocity.b[l][k] =
              params.momentum * velocity.b[l][k] - params.learning_rate * grads.b[l][k];
          model.layers[l].b[k] += velocity.b[l][k];
        }
      }
    }
    epoch_loss /= static_cast<double>(batches);
    if (!std::isfinite(epoch_loss)) {
      model = best;
      model.converged = false;
      return model;
    }
    if (epoch_loss < best_loss) {
      best_loss = epoch_loss;
      best = model;
    }
  }
  model.converged = true;
  return model;
}

}  // namespace phishurl
