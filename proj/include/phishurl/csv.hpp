#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace phishurl {

// Small RFC 4180-style CSV reader: quoted fields, doubled quotes, commas and
// newlines inside quotes, CRLF or LF records.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // reads one record; returns false at end of input
  bool next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == EOF) return false;

    std::string field;
    bool quoted = false;
    while (true) {
      if (quoted) {
        if (c == EOF) break;  // unterminated quote: keep what we have
        if (c == '"') {
          const int peek = in_.peek();
          if (peek == '"') {
            field.push_back('"');
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          field.push_back(static_cast<char>(c));
        }
      } else {
        if (c == EOF || c == '\n') break;
        if (c == '\r') {
          if (in_.peek() == '\n') in_.get();
          break;
        }
        if (c == '"' && field.empty()) {
          quoted = true;
        } else if (c == ',') {
          fields.push_back(std::move(field));
          field.clear();
        } else {
          field.push_back(static_cast<char>(c));
        }
      }
      c = in_.get();
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::istream& in_;
};

inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace phishurl
