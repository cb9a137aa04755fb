#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gml/errors.hpp"

namespace gml {

// RFC-4180 style delimited text: quoted fields may contain the delimiter,
// doubled quotes and embedded newlines. Lines starting with '#' outside a
// record are treated as comments (used for the config-echo header).
class CsvReader {
 public:
  CsvReader(std::istream& in, char delim = ',') : in_(in), delim_(delim) {}

  // Reads one record; returns false on clean EOF.
  // Throws ParseError on unterminated quotes.
  bool next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    // skip comment lines and blank lines between records
    while (c == '#' || c == '\n' || c == '\r') {
      if (c == '#') {
        while (c != EOF && c != '\n') c = in_.get();
        ++line_;
      } else if (c == '\n') {
        ++line_;
      }
      c = in_.get();
    }
    if (c == EOF) return false;

    ++line_;
    record_line_ = line_;
    std::string field;
    bool quoted = false;
    while (true) {
      if (quoted) {
        if (c == EOF) throw ParseError("unterminated quoted field", record_line_);
        if (c == '"') {
          int peek = in_.get();
          if (peek == '"') {
            field.push_back('"');
          } else {
            quoted = false;
            c = peek;
            continue;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(static_cast<char>(c));
        }
      } else {
        if (c == EOF || c == '\n') {
          if (!field.empty() && field.back() == '\r') field.pop_back();
          fields.push_back(std::move(field));
          return true;
        }
        if (c == '"' && field.empty()) {
          quoted = true;
        } else if (c == delim_) {
          fields.push_back(std::move(field));
          field.clear();
        } else {
          field.push_back(static_cast<char>(c));
        }
      }
      c = in_.get();
    }
  }

  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 0;         // lines consumed so far
  std::size_t record_line_ = 0;  // first line of the current record
};

inline std::vector<std::vector<std::string>> read_csv_file(const std::string& path,
                                                           char delim = ',') {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  CsvReader reader(in, delim);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  while (reader.next(fields)) rows.push_back(fields);
  return rows;
}

inline std::string csv_escape(std::string_view field, char delim = ',') {
  bool needs_quote = field.find_first_of("\"\r\n") != std::string_view::npos ||
                     field.find(delim) != std::string_view::npos;
  if (!needs_quote) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields,
                          char delim = ',') {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << delim;
    out << csv_escape(fields[i], delim);
  }
  out << '\n';
}

}  // namespace gml
