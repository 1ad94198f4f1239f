#pragma once

// Test-only reference for the 26 features: plain character walks written
// independently of the library code. Slow and obvious on purpose.

#include <array>
#include <cstdint>
#include <string>

namespace oracle {

struct Scopes {
  std::string scheme, domain, pathfile, params;
  bool has_params = false;
};

inline std::string trim_lower(const std::string& raw) {
  auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  std::size_t b = 0, e = raw.size();
  while (b < e && space(raw[b])) b++;
  while (e > b && space(raw[e - 1])) e--;
  std::string out;
  for (std::size_t i = b; i < e; i++) {
    char c = raw[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + ('a' - 'A'));
    out += c;
  }
  return out;
}

inline Scopes split_scopes(const std::string& u) {
  Scopes s;
  // scheme = chars through "://" provided no '/' or '?' comes first
  std::size_t start = 0;
  for (std::size_t i = 0; i + 2 < u.size(); i++) {
    if (u[i] == '/' || u[i] == '?') break;
    if (u[i] == ':' && u[i + 1] == '/' && u[i + 2] == '/') {
      start = i + 3;
      break;
    }
  }
  s.scheme = u.substr(0, start);
  // domain = up to the first '/' or '?'
  std::size_t i = start;
  while (i < u.size() && u[i] != '/' && u[i] != '?') {
    s.domain += u[i];
    i++;
  }
  // pathfile = up to the first '?'
  while (i < u.size() && u[i] != '?') {
    s.pathfile += u[i];
    i++;
  }
  // params = everything after that '?'
  if (i < u.size() && u[i] == '?') {
    s.has_params = true;
    i++;
    while (i < u.size()) {
      s.params += u[i];
      i++;
    }
  }
  return s;
}

inline std::uint32_t count_char(const std::string& s, char c) {
  std::uint32_t n = 0;
  for (std::size_t i = 0; i < s.size(); i++) {
    if (s[i] == c) n++;
  }
  return n;
}

inline std::uint32_t count_sub(const std::string& s, const std::string& sub) {
  std::uint32_t n = 0;
  if (sub.empty()) return 0;
  for (std::size_t i = 0; i + sub.size() <= s.size(); i++) {
    bool hit = true;
    for (std::size_t j = 0; j < sub.size(); j++) {
      if (s[i + j] != sub[j]) {
        hit = false;
        break;
      }
    }
    if (hit) n++;
  }
  return n;
}

// all 26 features in schema order:
// {., -, /, %} x {url, domain, pathfile, params}, the four lengths,
// then http/ref/login/account/apple/paypal counts over the whole URL
inline std::array<std::uint32_t, 26> features(const std::string& raw) {
  const std::string u = trim_lower(raw);
  const Scopes s = split_scopes(u);
  const std::string scopes[4] = {u, s.domain, s.pathfile, s.params};
  const char chars[4] = {'.', '-', '/', '%'};
  const std::string keywords[6] = {"http", "ref", "login", "account", "apple", "paypal"};

  std::array<std::uint32_t, 26> out{};
  std::size_t k = 0;
  for (char c : chars) {
    for (const auto& scope : scopes) out[k++] = count_char(scope, c);
  }
  for (const auto& scope : scopes) out[k++] = static_cast<std::uint32_t>(scope.size());
  for (const auto& kw : keywords) out[k++] = count_sub(u, kw);
  return out;
}

}  // namespace oracle
