#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gml/errors.hpp"
#include "gml/pairs.hpp"
#include "gml/similarity.hpp"
#include "gml/text.hpp"

namespace gml {

enum class FeatureKind { AttributeSimilarity, LcsSimilarity, SameToken, DiffToken };

// A shared pair property with one value x in [0,1] per applicable pair.
// Attribute features apply to every pair; token features only to the pairs
// containing the token.
struct Feature {
  std::string feature_id;
  FeatureKind kind;
  std::string attribute;                // attribute/lcs kinds
  MetricKind metric = MetricKind::Jaccard;  // attribute kind
  std::string token;                    // same/diff kinds
  std::vector<std::uint32_t> pair_idx;  // indices into workload.pairs, ascending
  std::vector<double> x;                // aligned per-pair values
};

struct IdfTable {
  std::size_t doc_count = 0;
  std::unordered_map<std::string, std::size_t> token_doc_freq;
  double threshold = 1.0;

  double idf(const std::string& token) const {
    auto it = token_doc_freq.find(token);
    if (it == token_doc_freq.end() || it->second == 0) return 0.0;
    return std::log(static_cast<double>(doc_count) / static_cast<double>(it->second));
  }
  bool retained(const std::string& token) const { return idf(token) >= threshold; }
};

// One document per record: the concatenation of its long-string attributes.
inline IdfTable build_idf_table(const Dataset& tables, const std::vector<std::string>& long_attrs,
                                double threshold) {
  IdfTable idf;
  idf.threshold = threshold;
  auto scan = [&](const RecordTable& table) {
    std::vector<std::size_t> attrs;
    for (const auto& name : long_attrs) attrs.push_back(table.attribute_index(name));
    for (const auto& rec : table.records) {
      std::unordered_set<std::string> doc_tokens;
      for (std::size_t a : attrs) {
        if (!rec.values[a]) continue;
        for (auto& t : tokenize(*rec.values[a])) doc_tokens.insert(std::move(t));
      }
      ++idf.doc_count;
      for (const auto& t : doc_tokens) ++idf.token_doc_freq[t];
    }
  };
  scan(tables.left);
  if (!tables.single_table) scan(tables.right);
  return idf;
}

// One feature per (attribute, metric) plan entry, covering every pair, plus
// an LCS feature per long-string attribute scaled by the workload maximum.
inline std::vector<Feature> extract_attribute_features(const Workload& workload,
                                                       const FeaturePlan& plan,
                                                       const std::vector<std::string>& long_attrs) {
  std::vector<Feature> features;
  const RecordTable& left = workload.left_table();
  const RecordTable& right = workload.right_table();

  for (const auto& am : plan) {
    std::size_t la = left.attribute_index(am.attribute);
    std::size_t ra = right.attribute_index(am.attribute);
    for (MetricKind metric : am.metrics) {
      if (metric == MetricKind::Lcs) {
        throw ConfigError("configure lcs through long_attributes, not the metric plan");
      }
      Feature f;
      f.kind = FeatureKind::AttributeSimilarity;
      f.attribute = am.attribute;
      f.metric = metric;
      f.feature_id = "attr:" + am.attribute + ":" + metric_name(metric);
      f.pair_idx.reserve(workload.pairs.size());
      f.x.reserve(workload.pairs.size());
      for (std::size_t i = 0; i < workload.pairs.size(); ++i) {
        const auto& pair = workload.pairs[i];
        const auto& lv = left.value(pair.left_row, la);
        const auto& rv = right.value(pair.right_row, ra);
        f.pair_idx.push_back(static_cast<std::uint32_t>(i));
        f.x.push_back(lv && rv ? evaluate_metric(metric, *lv, *rv) : 0.0);
      }
      features.push_back(std::move(f));
    }
  }

  for (const auto& attr : long_attrs) {
    std::size_t la = left.attribute_index(attr);
    std::size_t ra = right.attribute_index(attr);
    Feature f;
    f.kind = FeatureKind::LcsSimilarity;
    f.attribute = attr;
    f.feature_id = "lcs:" + attr;
    std::vector<double> raw(workload.pairs.size(), 0.0);
    double max_raw = 0.0;
    for (std::size_t i = 0; i < workload.pairs.size(); ++i) {
      const auto& pair = workload.pairs[i];
      const auto& lv = left.value(pair.left_row, la);
      const auto& rv = right.value(pair.right_row, ra);
      if (lv && rv) raw[i] = static_cast<double>(lcs_token_length(*lv, *rv));
      max_raw = std::max(max_raw, raw[i]);
    }
    f.pair_idx.reserve(raw.size());
    f.x.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      f.pair_idx.push_back(static_cast<std::uint32_t>(i));
      f.x.push_back(max_raw > 0.0 ? raw[i] / max_raw : 0.0);
    }
    features.push_back(std::move(f));
  }
  return features;
}

// Same(o): token o occurs in both records of the pair; Diff(o): in exactly
// one. Tokens come from the long-string attributes and must clear the IDF
// threshold; features applying to no pair are dropped.
inline std::vector<Feature> extract_token_features(const Workload& workload, const IdfTable& idf,
                                                   const std::vector<std::string>& long_attrs) {
  const RecordTable& left = workload.left_table();
  const RecordTable& right = workload.right_table();
  std::vector<std::size_t> lattrs, rattrs;
  for (const auto& name : long_attrs) {
    lattrs.push_back(left.attribute_index(name));
    rattrs.push_back(right.attribute_index(name));
  }

  auto record_tokens = [&](const RecordTable& table, std::size_t row,
                           const std::vector<std::size_t>& attrs) {
    std::unordered_set<std::string> toks;
    for (std::size_t a : attrs) {
      const auto& v = table.value(row, a);
      if (!v) continue;
      for (auto& t : tokenize(*v)) {
        if (idf.retained(t)) toks.insert(std::move(t));
      }
    }
    return toks;
  };

  // token -> pair lists, kept ordered for deterministic feature ids
  std::map<std::string, std::vector<std::uint32_t>> same_pairs, diff_pairs;
  std::unordered_map<std::size_t, std::unordered_set<std::string>> left_cache, right_cache;
  for (std::size_t i = 0; i < workload.pairs.size(); ++i) {
    const auto& pair = workload.pairs[i];
    auto lit = left_cache.find(pair.left_row);
    if (lit == left_cache.end()) {
      lit = left_cache.emplace(pair.left_row, record_tokens(left, pair.left_row, lattrs)).first;
    }
    auto rit = right_cache.find(pair.right_row);
    if (rit == right_cache.end()) {
      rit = right_cache.emplace(pair.right_row, record_tokens(right, pair.right_row, rattrs)).first;
    }
    const auto& lt = lit->second;
    const auto& rt = rit->second;
    for (const auto& t : lt) {
      if (rt.count(t)) same_pairs[t].push_back(static_cast<std::uint32_t>(i));
      else diff_pairs[t].push_back(static_cast<std::uint32_t>(i));
    }
    for (const auto& t : rt) {
      if (!lt.count(t)) diff_pairs[t].push_back(static_cast<std::uint32_t>(i));
    }
  }

  std::vector<Feature> features;
  features.reserve(same_pairs.size() + diff_pairs.size());
  for (auto& [token, pairs] : same_pairs) {
    Feature f;
    f.kind = FeatureKind::SameToken;
    f.token = token;
    f.feature_id = "same:" + token;
    f.pair_idx = std::move(pairs);
    f.x.assign(f.pair_idx.size(), 0.0);
    features.push_back(std::move(f));
  }
  for (auto& [token, pairs] : diff_pairs) {
    Feature f;
    f.kind = FeatureKind::DiffToken;
    f.token = token;
    f.feature_id = "diff:" + token;
    f.pair_idx = std::move(pairs);
    std::sort(f.pair_idx.begin(), f.pair_idx.end());
    f.pair_idx.erase(std::unique(f.pair_idx.begin(), f.pair_idx.end()), f.pair_idx.end());
    f.x.assign(f.pair_idx.size(), 0.0);
    features.push_back(std::move(f));
  }
  return features;
}

// A token feature's value is its pair's aggregate record similarity; the
// feature's regression then runs over only its applicable pairs.
inline void align_token_feature_values(std::vector<Feature>& features, const Workload& workload) {
  for (auto& f : features) {
    if (f.kind != FeatureKind::SameToken && f.kind != FeatureKind::DiffToken) continue;
    for (std::size_t i = 0; i < f.pair_idx.size(); ++i) {
      f.x[i] = workload.pairs[f.pair_idx[i]].record_similarity;
    }
  }
}

}  // namespace gml
