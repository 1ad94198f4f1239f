#include <gtest/gtest.h>

#include <set>
#include <string>

#include "phishurl/features.hpp"
#include "phishurl/random.hpp"
#include "phishurl/url.hpp"
#include "support/fuzz.hpp"
#include "support/oracle.hpp"

using namespace phishurl;

namespace {

const char* kPaperUrl = "http://www.xmadwater.com.cn/js/?ref=http://us.battle.net/d3/en/index";

std::uint32_t value_of(const FeatureVector& fv, const std::string& name) {
  const auto& names = FeatureSchema::v1().names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return fv.values[i];
  }
  ADD_FAILURE() << "no feature named " << name;
  return 0;
}

}  // namespace

TEST(Schema, TwentySixUniqueFrozenNames) {
  const auto& names = FeatureSchema::v1().names();
  ASSERT_EQ(names.size(), 26u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), 26u);

  EXPECT_EQ(names[0], "url_dot");
  EXPECT_EQ(names[1], "domain_dot");
  EXPECT_EQ(names[3], "params_dot");
  EXPECT_EQ(names[4], "url_hyphen");
  EXPECT_EQ(names[8], "url_slash");
  EXPECT_EQ(names[12], "url_percent");
  EXPECT_EQ(names[16], "url_length");
  EXPECT_EQ(names[19], "params_length");
  EXPECT_EQ(names[20], "http_count");
  EXPECT_EQ(names[25], "paypal_count");
}

TEST(Schema, ModeIndices) {
  const auto& schema = FeatureSchema::v1();
  EXPECT_EQ(schema.indices(FeatureMode::traditional).size(), 20u);
  EXPECT_EQ(schema.indices(FeatureMode::keyword),
            (std::vector<std::size_t>{20, 21, 22, 23, 24, 25}));
  EXPECT_EQ(schema.indices(FeatureMode::both).size(), 26u);
}

TEST(CountChar, Examples) {
  EXPECT_EQ(count_char("www.a.b", '.'), 2u);
  EXPECT_EQ(count_char("", '-'), 0u);
  EXPECT_EQ(count_char("a-b--c", '-'), 3u);
}

TEST(CountKeyword, PaperHttpCountIsTwo) {
  EXPECT_EQ(count_keyword(kPaperUrl, "http"), 2u);
}

TEST(CountKeyword, Examples) {
  EXPECT_EQ(count_keyword("https://paypal-secure-login.example/account", "paypal"), 1u);
  EXPECT_EQ(count_keyword("", "login"), 0u);
  EXPECT_EQ(count_keyword("https://x", "http"), 1u);  // substring of "https"
  EXPECT_EQ(count_keyword("refref", "ref"), 2u);
  EXPECT_EQ(count_keyword("prefspreferences", "ref"), 2u);  // no word boundaries
}

TEST(Extract, WorkedExample) {
  const auto fv = extract(parse_url("http://a.b/c.html?x=1"));
  EXPECT_EQ(value_of(fv, "url_dot"), 2u);
  EXPECT_EQ(value_of(fv, "url_slash"), 3u);
  EXPECT_EQ(value_of(fv, "domain_dot"), 1u);
  EXPECT_EQ(value_of(fv, "pathfile_dot"), 1u);
  EXPECT_EQ(value_of(fv, "params_dot"), 0u);
  EXPECT_EQ(value_of(fv, "url_length"), 21u);
  EXPECT_EQ(value_of(fv, "domain_length"), 3u);
  EXPECT_EQ(value_of(fv, "pathfile_length"), 7u);
  EXPECT_EQ(value_of(fv, "params_length"), 3u);
  EXPECT_EQ(value_of(fv, "http_count"), 1u);
  for (const auto& kw : {"ref", "login", "account", "apple", "paypal"}) {
    EXPECT_EQ(value_of(fv, std::string(kw) + "_count"), 0u);
  }
}

TEST(Extract, SingleCharacterUrl) {
  const auto fv = extract(parse_url("x"));
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto& name = FeatureSchema::v1().names()[i];
    if (name == "url_length" || name == "domain_length") {
      EXPECT_EQ(fv.values[i], 1u) << name;
    } else {
      EXPECT_EQ(fv.values[i], 0u) << name;
    }
  }
}

TEST(Extract, PaperUrlKeywordCounts) {
  const auto fv = extract(parse_url(kPaperUrl));
  EXPECT_EQ(value_of(fv, "http_count"), 2u);
  EXPECT_EQ(value_of(fv, "ref_count"), 1u);
}

TEST(ExtractProperties, OracleEquivalenceFuzz) {
  Rng rng(987654321);
  for (int i = 0; i < 10000; ++i) {
    const std::string raw = testsupport::random_url_like(rng);
    const auto fv = extract(parse_url(raw));
    const auto expected = oracle::features(raw);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      ASSERT_EQ(fv.values[k], expected[k])
          << "url: " << raw << " feature: " << FeatureSchema::v1().names()[k];
    }
  }
}

TEST(ExtractProperties, ScopeAdditivityFuzz) {
  Rng rng(13579);
  for (int i = 0; i < 2000; ++i) {
    const auto seg = decompose(normalize(testsupport::random_url_like(rng)));
    for (char c : kSpecialChars) {
      ASSERT_EQ(count_char(seg.full, c), count_char(seg.scheme, c) + count_char(seg.domain, c) +
                                             count_char(seg.pathfile, c) +
                                             count_char(seg.params, c));
    }
  }
}

// whole-URL counts and keyword counts can only grow when characters are
// appended; scoped counts can shift between scopes (a '/' completing "://"
// reassigns the prefix), so they are not covered by this property
TEST(ExtractProperties, FullUrlMonotonicityUnderAppend) {
  Rng rng(24680);
  const auto& names = FeatureSchema::v1().names();
  for (int i = 0; i < 2000; ++i) {
    const std::string base = normalize(testsupport::random_url_like(rng));
    std::string longer = base;
    static const std::string chars = "ab.-/%?x";
    const std::size_t extra = 1 + rng.below(10);
    for (std::size_t k = 0; k < extra; ++k) longer += chars[rng.below(chars.size())];

    const auto before = extract(decompose(base));
    const auto after = extract(decompose(longer));
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      if (names[k].rfind("url_", 0) == 0 || names[k].size() > 6) {  // url_* and *_count
        if (names[k].rfind("url_", 0) == 0 || names[k].rfind("_count") != std::string::npos) {
          ASSERT_GE(after.values[k], before.values[k]) << names[k] << " on " << base;
        }
      }
    }
  }
}

TEST(ExtractProperties, VectorInvariantsFuzz) {
  Rng rng(112358);
  const auto& schema = FeatureSchema::v1();
  const auto idx = [&](const char* n) {
    const auto& names = schema.names();
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin());
  };
  const auto url_len = idx("url_length"), dom_len = idx("domain_length"),
             path_len = idx("pathfile_length"), par_len = idx("params_length"),
             http = idx("http_count");
  for (int i = 0; i < 2000; ++i) {
    const std::string url = normalize(testsupport::random_url_like(rng));
    const auto fv = extract(decompose(url));
    ASSERT_GE(fv.values[url_len], fv.values[dom_len] + fv.values[path_len] + fv.values[par_len]);
    if (url.rfind("http", 0) == 0) ASSERT_GE(fv.values[http], 1u);
  }
}
