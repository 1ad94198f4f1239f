#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phishurl/dataset.hpp"
#include "phishurl/numeric.hpp"
#include "phishurl/random.hpp"

namespace testsupport {

// Corpus where the keyword features carry the whole class signal: every URL
// is built from one structural skeleton distribution, and phishing rows then
// get 1-3 keywords written over same-length letter runs. Keywords contain no
// special characters, so counts and lengths keep identical distributions
// across classes and only the keyword columns separate them.
inline std::vector<phishurl::LabeledUrl> keyword_signal_corpus(
    std::size_t n, std::uint64_t seed,
    const std::vector<std::string>& keywords = {"http", "ref", "login", "account", "apple",
                                                "paypal"}) {
  using phishurl::Rng;
  std::vector<phishurl::LabeledUrl> rows;
  rows.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(phishurl::mix_seed(seed, i));
    const auto letters = [&rng](std::size_t len) {
      std::string s;
      for (std::size_t j = 0; j < len; ++j) {
        s += static_cast<char>('a' + rng.below(26));
      }
      return s;
    };

    std::string url = "http://";
    const std::size_t labels = 2 + rng.below(2);
    for (std::size_t l = 0; l < labels; ++l) {
      if (l > 0) url += '.';
      std::string label = letters(3 + rng.below(8));
      if (rng.below(10) < 3 && label.size() >= 3) {
        label[label.size() / 2] = '-';
      }
      url += label;
    }
    url += ".com";
    const std::size_t segments = 1 + rng.below(3);
    for (std::size_t p = 0; p < segments; ++p) {
      url += '/' + letters(8 + rng.below(5));
    }
    if (rng.below(10) < 3) url += ".html";
    if (rng.below(2) == 0) {
      url += '?';
      const std::size_t pairs = 1 + rng.below(2);
      for (std::size_t p = 0; p < pairs; ++p) {
        if (p > 0) url += '&';
        url += letters(1 + rng.below(3)) + '=' + letters(4 + rng.below(7));
      }
      if (rng.below(5) == 0) url += "%20";
    }

    const bool phishing = i >= n / 2;
    if (phishing) {
      // maximal letter runs after the scheme
      std::vector<std::pair<std::size_t, std::size_t>> runs;  // (start, length)
      std::size_t run_start = 7;
      for (std::size_t pos = 7; pos <= url.size(); ++pos) {
        const bool letter = pos < url.size() && url[pos] >= 'a' && url[pos] <= 'z';
        if (!letter) {
          if (pos > run_start) runs.emplace_back(run_start, pos - run_start);
          run_start = pos + 1;
        }
      }
      std::vector<bool> used(url.size(), false);
      const std::size_t k = 1 + rng.below(3);
      for (std::size_t e = 0; e < k; ++e) {
        const auto& kw = keywords[rng.below(keywords.size())];
        for (int attempt = 0; attempt < 50; ++attempt) {
          const auto& run = runs[rng.below(runs.size())];
          if (run.second < kw.size()) continue;
          const std::size_t at = run.first + rng.below(run.second - kw.size() + 1);
          bool clear = true;
          for (std::size_t j = at; j < at + kw.size(); ++j) clear = clear && !used[j];
          if (!clear) continue;
          for (std::size_t j = 0; j < kw.size(); ++j) {
            url[at + j] = kw[j];
            used[at + j] = true;
          }
          break;
        }
      }
    }
    rows.push_back({url, phishing ? phishurl::Label::phishing : phishurl::Label::legitimate});
  }
  return rows;
}

struct Blobs {
  phishurl::Matrix x;
  std::vector<int> y;
};

// two isotropic 2-D Gaussians (sigma 1), class centers (0,0) and
// (separation, separation); classes interleaved so any prefix is balanced
inline Blobs make_blobs(std::size_t n, double separation, std::uint64_t seed) {
  phishurl::Rng rng(seed);
  Blobs blobs;
  blobs.x = phishurl::Matrix(n, 2);
  blobs.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double cx = label == 1 ? separation : 0.0;
    blobs.x.at(i, 0) = cx + rng.normal();
    blobs.x.at(i, 1) = cx + rng.normal();
    blobs.y[i] = label;
  }
  return blobs;
}

struct TrainTest {
  phishurl::Matrix train_x, test_x;
  std::vector<int> train_y, test_y;
};

// first `train_fraction` of the rows train (blobs interleave classes, so the
// prefix is balanced); optional standardization fitted on train only
inline TrainTest head_split(const Blobs& blobs, double train_fraction, bool standardize) {
  TrainTest tt;
  const std::size_t n_train =
      static_cast<std::size_t>(static_cast<double>(blobs.x.rows()) * train_fraction);
  const std::size_t n_test = blobs.x.rows() - n_train;
  tt.train_x = phishurl::Matrix(n_train, blobs.x.cols());
  tt.test_x = phishurl::Matrix(n_test, blobs.x.cols());
  for (std::size_t i = 0; i < n_train; ++i) {
    for (std::size_t j = 0; j < blobs.x.cols(); ++j) tt.train_x.at(i, j) = blobs.x.at(i, j);
    tt.train_y.push_back(blobs.y[i]);
  }
  for (std::size_t i = 0; i < n_test; ++i) {
    for (std::size_t j = 0; j < blobs.x.cols(); ++j) {
      tt.test_x.at(i, j) = blobs.x.at(n_train + i, j);
    }
    tt.test_y.push_back(blobs.y[n_train + i]);
  }
  if (standardize) {
    const auto scaler = phishurl::Standardizer::fit(tt.train_x);
    scaler.apply(tt.train_x);
    scaler.apply(tt.test_x);
  }
  return tt;
}

inline double accuracy_of(const std::vector<int>& predicted, const std::vector<int>& truth) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace testsupport
