#pragma once

#include <string>
#include <string_view>

#include "phishurl/errors.hpp"

namespace phishurl {

/// A URL split into the four scopes that features are counted over.
/// Every character of `full` lives in exactly one of scheme / domain /
/// pathfile / params (plus the '?' separator when `has_params`), so
/// scheme + domain + pathfile + ("?" + params if has_params) == full.
struct UrlSegments {
  std::string full;      // the normalized whole URL
  std::string scheme;    // prefix up to and including "://", empty when absent
  std::string domain;    // never contains '/' or '?'
  std::string pathfile;  // path and file, combined; never contains '?'
  std::string params;    // everything after the first '?', separator excluded
  bool has_params = false;  // true iff full contains a '?' (params may still be "")
};

/// Trim surrounding whitespace and lowercase ASCII letters. No percent
/// decoding, no scheme insertion; bytes >= 0x80 pass through untouched.
/// Throws EmptyUrl when nothing remains.
inline std::string normalize(std::string_view raw) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && is_space(raw[begin])) ++begin;
  while (end > begin && is_space(raw[end - 1])) --end;
  if (begin == end) throw EmptyUrl{};

  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    const char c = raw[i];
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

/// Split a normalized URL into scopes. The scheme prefix is recognized only
/// when "://" appears before any '/' or '?', so a bare hostname with an
/// embedded "http://..." redirect parameter stays scheme-less. The domain
/// runs to the first '/' or '?'; params start after the first '?', and a
/// '#' fragment is not treated specially (it stays in whichever scope it
/// falls into).
inline UrlSegments decompose(std::string_view url) {
  UrlSegments seg;
  seg.full.assign(url);

  std::size_t pos = 0;
  const std::size_t scheme_sep = url.find("://");
  if (scheme_sep != std::string_view::npos &&
      url.find_first_of("/?") == scheme_sep + 1) {
    pos = scheme_sep + 3;
    seg.scheme.assign(url.substr(0, pos));
  }

  const std::size_t domain_end = url.find_first_of("/?", pos);
  if (domain_end == std::string_view::npos) {
    seg.domain.assign(url.substr(pos));
    return seg;
  }
  seg.domain.assign(url.substr(pos, domain_end - pos));

  const std::size_t query = url.find('?', domain_end);
  if (query == std::string_view::npos) {
    seg.pathfile.assign(url.substr(domain_end));
    return seg;
  }
  seg.pathfile.assign(url.substr(domain_end, query - domain_end));
  seg.params.assign(url.substr(query + 1));
  seg.has_params = true;
  return seg;
}

/// normalize + decompose in one step.
inline UrlSegments parse_url(std::string_view raw) { return decompose(normalize(raw)); }

}  // namespace phishurl
