#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ncfair/error.hpp"

namespace ncfair::csv {

struct ReadOptions {
  char delimiter = ',';
  bool trim_fields = true;        // strip surrounding whitespace of unquoted fields
  bool skip_blank_lines = true;
};

/// One parsed record per row, header (if any) handled by the caller.
using Row = std::vector<std::string>;

namespace detail {

inline void trim_in_place(std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    s.clear();
    return;
  }
  size_t e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
}

}  // namespace detail

/// RFC-4180 reader: quoted fields, embedded delimiters/newlines, doubled
/// quotes. A non-comma delimiter (e.g. ' ') gives the relaxed mode used by
/// whitespace-separated files.
inline std::vector<Row> read(std::istream& in, const ReadOptions& opt = {}) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool any_field = false;

  auto push_field = [&] {
    if (opt.trim_fields && !field_was_quoted) detail::trim_in_place(field);
    row.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
    any_field = true;
  };
  auto push_row = [&] {
    bool last_quoted = field_was_quoted;
    push_field();
    bool blank = row.size() == 1 && row[0].empty() && !last_quoted;
    if (!(blank && opt.skip_blank_lines)) rows.push_back(std::move(row));
    row.clear();
    any_field = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == opt.delimiter) {
      push_field();
    } else if (c == '\n') {
      if (!field.empty() || field_was_quoted || any_field || !opt.skip_blank_lines) push_row();
      else { field.clear(); row.clear(); any_field = false; }
    } else if (c == '\r') {
      // swallowed; \r\n handled at \n
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError("csv: unterminated quoted field at end of input");
  if (!field.empty() || any_field) push_row();
  return rows;
}

inline std::vector<Row> read_file(const std::string& path, const ReadOptions& opt = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("csv: cannot open file: " + path);
  return read(in, opt);
}

/// Quotes only when needed; always "\n" line endings so output is
/// byte-stable across platforms.
inline void write_field(std::ostream& out, const std::string& f, char delimiter = ',') {
  bool need_quotes = f.find_first_of(std::string("\"\n\r") + delimiter) != std::string::npos;
  if (!need_quotes) {
    out << f;
    return;
  }
  out << '"';
  for (char c : f) {
    if (c == '"') out << "\"\"";
    else out << c;
  }
  out << '"';
}

inline void write_row(std::ostream& out, const Row& row, char delimiter = ',') {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out << delimiter;
    write_field(out, row[i], delimiter);
  }
  out << '\n';
}

}  // namespace ncfair::csv
