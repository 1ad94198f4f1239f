#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace phishurl {

// Deterministic randomness for everything that samples, shuffles or
// initializes weights. std::mt19937_64 output is pinned by the standard,
// but the standard *distributions* are not, so the draw helpers below are
// spelled out explicitly. Same seed, same platform or not: same bytes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // uniform in [0, bound), bound > 0; rejection sampling, no modulo bias
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % bound;
  }

  // uniform in [0,1) with 53 random bits
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; both draws consumed every call
  double normal() {
    const double u1 = 1.0 - unit();  // (0,1], keeps log finite
    const double u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // k distinct indices from [0, n), returned in ascending order
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      std::swap(idx[i], idx[i + below(n - i)]);
    }
    idx.resize(std::min(k, n));
    std::sort(idx.begin(), idx.end());
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 step; derives independent substreams from one user seed
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace phishurl
