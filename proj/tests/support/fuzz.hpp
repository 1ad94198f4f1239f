#pragma once

#include <string>

#include "phishurl/random.hpp"

namespace testsupport {

// URL-shaped strings heavy on the characters the parser cares about,
// including occasional scheme prefixes, queries and junk
inline std::string random_url_like(phishurl::Rng& rng) {
  static const std::string chars = "abcdefghijklmnopqrstuvwxyz0123456789.-/%?:=#@&_~";
  std::string s;
  const auto kind = rng.below(5);
  if (kind == 0) s += "http://";
  if (kind == 1) s += "https://";
  if (kind == 2) s += "HTTP://";  // exercises lowercasing
  const std::size_t len = 1 + rng.below(70);
  for (std::size_t i = 0; i < len; ++i) {
    s += chars[rng.below(chars.size())];
  }
  if (rng.below(8) == 0) s += '?';            // trailing '?' edge
  if (rng.below(10) == 0) s = "  " + s + " ";  // surrounding whitespace
  return s;
}

}  // namespace testsupport
