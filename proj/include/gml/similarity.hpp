#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gml/errors.hpp"
#include "gml/text.hpp"

namespace gml {

// Token-set Jaccard; both-empty convention: 1.0.
inline double jaccard(std::string_view a, std::string_view b) {
  auto ta = token_set(a);
  auto tb = token_set(b);
  if (ta.empty() && tb.empty()) return 1.0;
  if (ta.empty() || tb.empty()) return 0.0;
  std::size_t inter = 0;
  const auto& small = ta.size() <= tb.size() ? ta : tb;
  const auto& big = ta.size() <= tb.size() ? tb : ta;
  for (const auto& t : small) {
    if (big.count(t)) ++inter;
  }
  return static_cast<double>(inter) / static_cast<double>(ta.size() + tb.size() - inter);
}

// Jaro similarity with the Winkler prefix boost (prefix <= 4, scale 0.1).
// Case-folded before comparison so it composes with the tokenizer's casing.
inline double jaro_winkler(std::string_view av, std::string_view bv) {
  std::string a = to_lower_ascii(av);
  std::string b = to_lower_ascii(bv);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  if (a == b) return 1.0;

  const std::size_t la = a.size(), lb = b.size();
  const std::size_t window = std::max<std::size_t>(1, std::max(la, lb) / 2) - 1;
  std::vector<char> a_match(la, 0), b_match(lb, 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < la; ++i) {
    std::size_t lo = i > window ? i - window : 0;
    std::size_t hi = std::min(lb, i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!b_match[j] && a[i] == b[j]) {
        a_match[i] = b_match[j] = 1;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  std::size_t transpositions = 0;
  for (std::size_t i = 0, j = 0; i < la; ++i) {
    if (!a_match[i]) continue;
    while (!b_match[j]) ++j;
    if (a[i] != b[j]) ++transpositions;
    ++j;
  }
  const double m = static_cast<double>(matches);
  double jaro = (m / la + m / lb + (m - transpositions / 2.0) / m) / 3.0;

  std::size_t prefix = 0;
  while (prefix < std::min({la, lb, std::size_t{4}}) && a[prefix] == b[prefix]) ++prefix;
  return jaro + prefix * 0.1 * (1.0 - jaro);
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  std::vector<std::size_t> row(a.size() + 1);
  for (std::size_t i = 0; i <= a.size(); ++i) row[i] = i;
  for (std::size_t j = 1; j <= b.size(); ++j) {
    std::size_t diag = row[0];
    row[0] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      std::size_t next = std::min({row[i] + 1, row[i - 1] + 1, diag + cost});
      diag = row[i];
      row[i] = next;
    }
  }
  return row[a.size()];
}

// 1 - lev/max(|a|,|b|); both-empty convention: 1.0.
inline double normalized_edit_similarity(std::string_view av, std::string_view bv) {
  std::string a = to_lower_ascii(av);
  std::string b = to_lower_ascii(bv);
  std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

// Longest common consecutive token run, in tokens (raw length; the feature
// layer rescales by the workload maximum).
inline std::size_t lcs_token_length(std::string_view a, std::string_view b) {
  auto ta = tokenize(a);
  auto tb = tokenize(b);
  if (ta.empty() || tb.empty()) return 0;
  std::vector<std::uint32_t> row(tb.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= ta.size(); ++i) {
    std::uint32_t diag = row[0];
    for (std::size_t j = 1; j <= tb.size(); ++j) {
      std::uint32_t up = row[j];
      if (ta[i - 1] == tb[j - 1]) {
        row[j] = diag + 1;
        best = std::max<std::size_t>(best, row[j]);
      } else {
        row[j] = 0;
      }
      diag = up;
    }
  }
  return best;
}

// 1 - |a-b| / max(|a|,|b|,1); unparseable operands give 0.
inline double number_similarity(std::string_view a, std::string_view b) {
  auto parse = [](std::string_view s, double& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
  };
  double x, y;
  if (!parse(a, x) || !parse(b, y)) return 0.0;
  double denom = std::max({std::fabs(x), std::fabs(y), 1.0});
  return std::max(0.0, 1.0 - std::fabs(x - y) / denom);
}

enum class MetricKind { Jaccard, JaroWinkler, Edit, Lcs, Number, Hybrid };

inline MetricKind metric_from_name(const std::string& name) {
  if (name == "jaccard") return MetricKind::Jaccard;
  if (name == "jaro_winkler") return MetricKind::JaroWinkler;
  if (name == "edit") return MetricKind::Edit;
  if (name == "lcs") return MetricKind::Lcs;
  if (name == "number") return MetricKind::Number;
  if (name == "hybrid") return MetricKind::Hybrid;
  throw ConfigError("unknown similarity metric: " + name);
}

inline std::string metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::Jaccard: return "jaccard";
    case MetricKind::JaroWinkler: return "jaro_winkler";
    case MetricKind::Edit: return "edit";
    case MetricKind::Lcs: return "lcs";
    case MetricKind::Number: return "number";
    case MetricKind::Hybrid: return "hybrid";
  }
  return "?";
}

// [0,1]-valued metric evaluation. Lcs is excluded here: its raw token count
// is scaled per attribute by the feature layer.
inline double evaluate_metric(MetricKind kind, std::string_view a, std::string_view b) {
  switch (kind) {
    case MetricKind::Jaccard: return jaccard(a, b);
    case MetricKind::JaroWinkler: return jaro_winkler(a, b);
    case MetricKind::Edit: return normalized_edit_similarity(a, b);
    case MetricKind::Number: return number_similarity(a, b);
    case MetricKind::Hybrid: return 0.5 * (jaccard(a, b) + normalized_edit_similarity(a, b));
    case MetricKind::Lcs:
      throw ConfigError("lcs contributes as a scaled feature, not a direct [0,1] metric");
  }
  return 0.0;
}

}  // namespace gml
