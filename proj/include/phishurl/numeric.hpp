#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace phishurl {

// Dense row-major matrix of doubles. Just enough for the classifiers.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Per-feature (x - mean) / stddev fitted on training data only. A feature
// with zero variance keeps std == 0 and maps to 0 on apply.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(const Matrix& x) {
    Standardizer s;
    s.mean.assign(x.cols(), 0.0);
    s.stddev.assign(x.cols(), 0.0);
    if (x.rows() == 0) return s;
    const double n = static_cast<double>(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < x.cols(); ++c) s.mean[c] += x.at(r, c);
    }
    for (auto& m : s.mean) m /= n;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double d = x.at(r, c) - s.mean[c];
        s.stddev[c] += d * d;
      }
    }
    for (auto& v : s.stddev) v = std::sqrt(v / n);
    return s;
  }

  void apply(std::span<double> row) const {
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = stddev[c] > 0.0 ? (row[c] - mean[c]) / stddev[c] : 0.0;
    }
  }

  void apply(Matrix& x) const {
    for (std::size_t r = 0; r < x.rows(); ++r) apply(x.row(r));
  }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

inline double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace phishurl
