#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace gml {

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Lowercase, split on whitespace and punctuation, drop empty tokens.
// Bytes >= 0x80 are kept verbatim so UTF-8 sequences survive as token chars.
inline std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : s) {
    bool keep = c >= 0x80 || std::isalnum(c);
    if (keep) {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

inline std::unordered_set<std::string> token_set(std::string_view s) {
  auto toks = tokenize(s);
  return {toks.begin(), toks.end()};
}

}  // namespace gml
