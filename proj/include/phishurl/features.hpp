#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "phishurl/errors.hpp"
#include "phishurl/url.hpp"

namespace phishurl {

// The 26-slot feature schema: 16 special-character counts ({. - / %} over
// each of the four scopes), 4 scope lengths, then 6 keyword counts over the
// whole URL. The order is frozen; bump the version string if it ever changes.
inline constexpr std::string_view kSchemaVersion = "urlfeat26-v1";
inline constexpr std::size_t kFeatureCount = 26;

inline constexpr std::array<char, 4> kSpecialChars = {'.', '-', '/', '%'};
inline constexpr std::array<std::string_view, 4> kScopeNames = {"url", "domain", "pathfile",
                                                                "params"};
inline constexpr std::array<std::string_view, 6> kKeywords = {"http",    "ref",   "login",
                                                              "account", "apple", "paypal"};

enum class FeatureMode { traditional, keyword, both };

inline std::string_view feature_mode_id(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::traditional: return "traditional";
    case FeatureMode::keyword: return "keyword";
    case FeatureMode::both: return "both";
  }
  return "both";
}

class FeatureSchema {
 public:
  static const FeatureSchema& v1() {
    static const FeatureSchema schema;
    return schema;
  }

  const std::vector<std::string>& names() const { return names_; }
  std::string_view version() const { return kSchemaVersion; }
  std::size_t size() const { return names_.size(); }

  // column indices of the full 26-vector active under a feature mode
  std::vector<std::size_t> indices(FeatureMode mode) const {
    std::vector<std::size_t> idx;
    const std::size_t first = mode == FeatureMode::keyword ? 20 : 0;
    const std::size_t last = mode == FeatureMode::traditional ? 20 : kFeatureCount;
    idx.resize(last - first);
    std::iota(idx.begin(), idx.end(), first);
    return idx;
  }

 private:
  FeatureSchema() {
    names_.reserve(kFeatureCount);
    const std::array<std::string_view, 4> char_names = {"dot", "hyphen", "slash", "percent"};
    for (auto cname : char_names) {
      for (auto scope : kScopeNames) {
        names_.push_back(std::string(scope) + "_" + std::string(cname));
      }
    }
    for (auto scope : kScopeNames) {
      names_.push_back(std::string(scope) + "_length");
    }
    for (auto kw : kKeywords) {
      names_.push_back(std::string(kw) + "_count");
    }
  }

  std::vector<std::string> names_;
};

struct FeatureVector {
  std::array<std::uint32_t, kFeatureCount> values{};
  std::string schema_version{kSchemaVersion};
};

inline std::uint32_t count_char(std::string_view text, char ch) {
  std::uint32_t n = 0;
  for (char c : text) {
    if (c == ch) ++n;
  }
  return n;
}

// Substring occurrences counted at every starting index. None of the six
// keywords self-overlaps, so overlapping and non-overlapping counts agree.
inline std::uint32_t count_keyword(std::string_view url_full, std::string_view keyword) {
  if (keyword.empty() || keyword.size() > url_full.size()) return 0;
  std::uint32_t n = 0;
  for (std::size_t i = 0; i + keyword.size() <= url_full.size(); ++i) {
    if (url_full.compare(i, keyword.size(), keyword) == 0) ++n;
  }
  return n;
}

/// All 26 features of a decomposed URL, in schema order. Deterministic and
/// pure; values are exact integer counts (lengths count bytes as stored).
inline FeatureVector extract(const UrlSegments& segments,
                             const FeatureSchema& schema = FeatureSchema::v1()) {
  FeatureVector fv;
  fv.schema_version = schema.version();
  const std::array<std::string_view, 4> scopes = {segments.full, segments.domain,
                                                  segments.pathfile, segments.params};
  std::size_t slot = 0;
  for (char ch : kSpecialChars) {
    for (auto scope : scopes) {
      fv.values[slot++] = count_char(scope, ch);
    }
  }
  for (auto scope : scopes) {
    fv.values[slot++] = static_cast<std::uint32_t>(scope.size());
  }
  for (auto kw : kKeywords) {
    fv.values[slot++] = count_keyword(segments.full, kw);
  }
  return fv;
}

}  // namespace phishurl
