#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gml/csv.hpp"
#include "gml/errors.hpp"
#include "gml/records.hpp"
#include "gml/similarity.hpp"
#include "gml/text.hpp"

namespace gml {

struct CandidatePair {
  std::string pair_id;
  std::size_t left_row = 0;   // index into the left table
  std::size_t right_row = 0;  // index into the right table
  std::optional<bool> gold;   // equivalent / inequivalent when known
  double record_similarity = 0.0;
};

// Two-table workloads match left against right; single-table workloads set
// right = left and pair rows within the one table.
struct Dataset {
  RecordTable left;
  RecordTable right;
  bool single_table = false;

  const RecordTable& right_table() const { return single_table ? left : right; }
};

struct Workload {
  Dataset tables;
  std::vector<CandidatePair> pairs;  // sorted by pair_id ascending
  std::unordered_map<std::string, std::size_t> by_pair_id;

  const RecordTable& left_table() const { return tables.left; }
  const RecordTable& right_table() const { return tables.right_table(); }

  void index_pairs() {
    std::sort(pairs.begin(), pairs.end(),
              [](const CandidatePair& a, const CandidatePair& b) { return a.pair_id < b.pair_id; });
    by_pair_id.clear();
    for (std::size_t i = 0; i < pairs.size(); ++i) by_pair_id.emplace(pairs[i].pair_id, i);
  }
};

// Explicit pairs file: columns left_id, right_id, optional gold in {0,1}.
inline std::vector<CandidatePair> load_pairs_file(const std::string& path, const RecordTable& left,
                                                  const RecordTable& right, char delim = ',') {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open pairs file: " + path);
  CsvReader reader(in, delim);

  std::vector<CandidatePair> out;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  bool first = true;
  while (reader.next(fields)) {
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError("pairs row needs 2 or 3 columns, got " + std::to_string(fields.size()),
                       reader.line());
    }
    if (first) {
      first = false;
      // optional header row
      if (!left.by_id.count(fields[0]) && !right.by_id.count(fields[0]) &&
          (fields[0] == "left_id" || fields[0] == "id1" || fields[0] == "idDBLP" ||
           fields[0] == "idAbt" || fields[0] == "source_id")) {
        continue;
      }
    }
    auto lit = left.by_id.find(fields[0]);
    if (lit == left.by_id.end()) {
      throw IntegrityError("pairs file references unknown record id \"" + fields[0] + "\"");
    }
    auto rit = right.by_id.find(fields[1]);
    if (rit == right.by_id.end()) {
      throw IntegrityError("pairs file references unknown record id \"" + fields[1] + "\"");
    }
    CandidatePair pair;
    pair.pair_id = fields[0] + "|" + fields[1];
    pair.left_row = lit->second;
    pair.right_row = rit->second;
    if (fields.size() == 3 && !fields[2].empty()) {
      if (fields[2] == "1") pair.gold = true;
      else if (fields[2] == "0") pair.gold = false;
      else throw ParseError("gold label must be 0 or 1, got \"" + fields[2] + "\"", reader.line());
    }
    if (!seen.insert(pair.pair_id).second) {
      throw IntegrityError("duplicate candidate pair \"" + pair.pair_id + "\"");
    }
    out.push_back(std::move(pair));
  }
  return out;
}

struct TokenBlocker {
  std::vector<std::string> attributes;  // token sources
  std::size_t min_overlap = 1;
  double idf_threshold = 1.0;  // tokens rarer than exp(-threshold) of records qualify
};

namespace detail {

inline std::vector<std::string> blocking_tokens(const RecordTable& table, std::size_t row,
                                                const std::vector<std::size_t>& attrs) {
  std::string text;
  for (std::size_t a : attrs) {
    const auto& v = table.value(row, a);
    if (v) {
      text += *v;
      text += ' ';
    }
  }
  auto set = token_set(text);
  return {set.begin(), set.end()};
}

}  // namespace detail

// Shared-token blocking: candidate pairs are those sharing at least
// min_overlap tokens whose idf clears the threshold.
inline std::vector<CandidatePair> generate_token_block_pairs(const Dataset& tables,
                                                             const TokenBlocker& blocker) {
  const RecordTable& left = tables.left;
  const RecordTable& right = tables.right_table();
  std::vector<std::size_t> lattrs, rattrs;
  for (const auto& name : blocker.attributes) {
    lattrs.push_back(left.attribute_index(name));
    rattrs.push_back(right.attribute_index(name));
  }

  const std::size_t doc_count = left.records.size() + (tables.single_table ? 0 : right.records.size());
  std::unordered_map<std::string, std::size_t> doc_freq;
  std::vector<std::vector<std::string>> left_tokens(left.records.size());
  for (std::size_t i = 0; i < left.records.size(); ++i) {
    left_tokens[i] = detail::blocking_tokens(left, i, lattrs);
    for (const auto& t : left_tokens[i]) ++doc_freq[t];
  }
  std::vector<std::vector<std::string>> right_tokens;
  if (!tables.single_table) {
    right_tokens.resize(right.records.size());
    for (std::size_t i = 0; i < right.records.size(); ++i) {
      right_tokens[i] = detail::blocking_tokens(right, i, rattrs);
      for (const auto& t : right_tokens[i]) ++doc_freq[t];
    }
  }

  auto retained = [&](const std::string& t) {
    auto it = doc_freq.find(t);
    return it != doc_freq.end() &&
           std::log(static_cast<double>(doc_count) / static_cast<double>(it->second)) >=
               blocker.idf_threshold;
  };

  // inverted index over retained tokens
  std::unordered_map<std::string, std::vector<std::uint32_t>> left_postings, right_postings;
  for (std::size_t i = 0; i < left_tokens.size(); ++i) {
    for (const auto& t : left_tokens[i]) {
      if (retained(t)) left_postings[t].push_back(static_cast<std::uint32_t>(i));
    }
  }
  const auto& rt = tables.single_table ? left_tokens : right_tokens;
  if (!tables.single_table) {
    for (std::size_t i = 0; i < rt.size(); ++i) {
      for (const auto& t : rt[i]) {
        if (retained(t)) right_postings[t].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> overlap;
  if (tables.single_table) {
    for (const auto& [tok, rows] : left_postings) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
          ++overlap[{std::min(rows[i], rows[j]), std::max(rows[i], rows[j])}];
        }
      }
    }
  } else {
    for (const auto& [tok, lrows] : left_postings) {
      auto it = right_postings.find(tok);
      if (it == right_postings.end()) continue;
      for (auto lr : lrows) {
        for (auto rr : it->second) ++overlap[{lr, rr}];
      }
    }
  }

  std::vector<CandidatePair> out;
  for (const auto& [key, count] : overlap) {
    if (count < blocker.min_overlap) continue;
    CandidatePair pair;
    pair.left_row = key.first;
    pair.right_row = key.second;
    pair.pair_id = left.records[key.first].id + "|" + right.records[key.second].id;
    out.push_back(std::move(pair));
  }
  if (out.empty()) throw ConfigError("blocking produced an empty candidate set");
  return out;
}

// --- record similarity -----------------------------------------------------

struct AttributeMetrics {
  std::string attribute;
  std::vector<MetricKind> metrics;
};
using FeaturePlan = std::vector<AttributeMetrics>;

struct AttributeWeighting {
  std::vector<std::string> attributes;
  std::vector<double> weights;  // aligned with attributes, sums to 1

  double weight_of(const std::string& name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      if (attributes[i] == name) return weights[i];
    }
    throw ConfigError("no weight for attribute: " + name);
  }
};

// Weight of an attribute is proportional to its count of distinct non-empty
// values across both tables.
inline AttributeWeighting distinct_value_weights(const Dataset& tables,
                                                 const std::vector<std::string>& attributes) {
  AttributeWeighting w;
  w.attributes = attributes;
  double total = 0.0;
  for (const auto& name : attributes) {
    std::unordered_set<std::string> distinct;
    std::size_t la = tables.left.attribute_index(name);
    for (const auto& rec : tables.left.records) {
      if (rec.values[la]) distinct.insert(*rec.values[la]);
    }
    if (!tables.single_table) {
      std::size_t ra = tables.right.attribute_index(name);
      for (const auto& rec : tables.right.records) {
        if (rec.values[ra]) distinct.insert(*rec.values[ra]);
      }
    }
    w.weights.push_back(static_cast<double>(distinct.size()));
    total += static_cast<double>(distinct.size());
  }
  if (total <= 0.0) throw ConfigError("all weighting attributes are empty");
  for (double& x : w.weights) x /= total;
  return w;
}

// Similarity of one attribute on one pair: mean over the attribute's
// configured metrics; absent value on either side contributes 0.
inline double attribute_similarity(const Workload& workload, const CandidatePair& pair,
                                   const AttributeMetrics& am) {
  const RecordTable& left = workload.left_table();
  const RecordTable& right = workload.right_table();
  const auto& lv = left.value(pair.left_row, left.attribute_index(am.attribute));
  const auto& rv = right.value(pair.right_row, right.attribute_index(am.attribute));
  if (!lv || !rv) return 0.0;
  if (am.metrics.empty()) throw ConfigError("no metrics configured for " + am.attribute);
  double sum = 0.0;
  for (MetricKind m : am.metrics) sum += evaluate_metric(m, *lv, *rv);
  return sum / static_cast<double>(am.metrics.size());
}

inline double aggregate_record_similarity(const Workload& workload, const CandidatePair& pair,
                                          const FeaturePlan& plan, const AttributeWeighting& w) {
  double sim = 0.0;
  for (const auto& am : plan) {
    sim += w.weight_of(am.attribute) * attribute_similarity(workload, pair, am);
  }
  return std::clamp(sim, 0.0, 1.0);
}

}  // namespace gml
