#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gml/csv.hpp"
#include "gml/errors.hpp"

namespace gml {

// One source row. Attribute values are positional against the table schema;
// missing cells are absent (std::nullopt), not empty strings.
struct Record {
  std::string id;
  std::vector<std::optional<std::string>> values;
};

struct RecordTable {
  std::vector<std::string> schema;  // attribute names, id column excluded
  std::vector<Record> records;
  std::unordered_map<std::string, std::size_t> by_id;

  const Record& record(std::size_t i) const { return records[i]; }

  std::size_t attribute_index(const std::string& name) const {
    for (std::size_t i = 0; i < schema.size(); ++i) {
      if (schema[i] == name) return i;
    }
    throw ConfigError("unknown attribute: " + name);
  }

  const std::optional<std::string>& value(std::size_t row, std::size_t attr) const {
    return records[row].values[attr];
  }
};

// Delimited text, first row header, first column id. The header's attribute
// columns must match the configured schema exactly (names and order).
inline RecordTable load_records(const std::string& path, const std::vector<std::string>& schema,
                                char delim = ',') {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open record table: " + path);
  CsvReader reader(in, delim);

  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ParseError("empty record table: " + path, 1);
  if (fields.empty()) throw ParseError("missing header in " + path, 1);
  if (fields.size() != schema.size() + 1) {
    throw ConfigError("header of " + path + " has " + std::to_string(fields.size() - 1) +
                      " attribute columns, schema expects " + std::to_string(schema.size()));
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (fields[i + 1] != schema[i]) {
      throw ConfigError("header column '" + fields[i + 1] + "' of " + path +
                        " does not match schema attribute '" + schema[i] + "'");
    }
  }

  RecordTable table;
  table.schema = schema;
  while (reader.next(fields)) {
    if (fields.size() != schema.size() + 1) {
      throw ParseError("row has " + std::to_string(fields.size()) + " columns, expected " +
                           std::to_string(schema.size() + 1),
                       reader.line());
    }
    Record rec;
    rec.id = fields[0];
    if (rec.id.empty()) throw ParseError("empty record id", reader.line());
    rec.values.reserve(schema.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].empty()) {
        rec.values.emplace_back(std::nullopt);
      } else {
        rec.values.emplace_back(std::move(fields[i]));
      }
    }
    auto [it, inserted] = table.by_id.emplace(rec.id, table.records.size());
    if (!inserted) throw IntegrityError("duplicate record id \"" + rec.id + "\" in " + path);
    table.records.push_back(std::move(rec));
  }
  return table;
}

}  // namespace gml
