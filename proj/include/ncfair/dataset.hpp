#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ncfair/csv.hpp"
#include "ncfair/error.hpp"

namespace ncfair {

enum class ColumnKind { categorical, numeric, binary };

inline const char* to_string(ColumnKind k) {
  switch (k) {
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::binary: return "binary";
  }
  return "?";
}

inline ColumnKind column_kind_from_string(const std::string& s) {
  if (s == "categorical") return ColumnKind::categorical;
  if (s == "numeric") return ColumnKind::numeric;
  if (s == "binary") return ColumnKind::binary;
  throw SchemaError("unknown column kind: " + s);
}

struct ProtectedAttr {
  std::string column;
  std::string privileged;  // literal value token; parsed per column kind
};

struct OutcomeSpec {
  std::string column;
  std::string favorable;
};

struct Schema {
  std::vector<std::pair<std::string, ColumnKind>> columns;
  std::vector<ProtectedAttr> protected_attrs;
  std::optional<OutcomeSpec> outcome;
  bool has_header = true;
  char delimiter = ',';

  bool has_column(const std::string& name) const {
    for (const auto& [n, k] : columns)
      if (n == name) return true;
    return false;
  }

  /// Column names unique; protected/outcome columns declared.
  void validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& [n, k] : columns) {
      if (!seen.insert(n).second) throw SchemaError("duplicate column name in schema: " + n);
    }
    for (const auto& p : protected_attrs)
      if (!has_column(p.column)) throw SchemaError("protected column not in schema: " + p.column);
    if (outcome && !has_column(outcome->column))
      throw SchemaError("outcome column not in schema: " + outcome->column);
  }
};

/// numeric/binary cells live in `num` (missing = NaN), categorical in `cat`.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;
  std::vector<std::string> cat;
  std::vector<double> num;

  size_t size() const { return kind == ColumnKind::categorical ? cat.size() : num.size(); }
};

namespace detail {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  double r = std::round(v);
  if (r == v && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(r));
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* p = s.c_str();
  char* end = nullptr;
  double v = std::strtod(p, &end);
  if (end == p || *end != '\0') return std::nullopt;
  return v;
}

}  // namespace detail

/// Tabular dataset with schema annotations. Immutable in spirit: the
/// preparation operations below return a new dataset, so a prepared
/// instance can be shared freely across threads.
class Dataset {
public:
  Dataset() = default;
  Dataset(Schema schema, std::vector<Column> cols) : schema_(std::move(schema)), cols_(std::move(cols)) {
    reindex();
    rows_ = cols_.empty() ? 0 : cols_[0].size();
    for (const auto& c : cols_)
      if (c.size() != rows_) throw SchemaError("column length mismatch: " + c.name);
  }

  const Schema& schema() const { return schema_; }
  Schema& schema() { return schema_; }
  size_t row_count() const { return rows_; }
  size_t column_count() const { return cols_.size(); }
  const std::vector<Column>& columns() const { return cols_; }

  /// Column names used as the input-similarity view (covariance /
  /// Mahalanobis). Set by recipes; defaults to every numeric column.
  const std::vector<std::string>& feature_columns() const { return features_; }
  void set_feature_columns(std::vector<std::string> names) {
    for (const auto& n : names) {
      const Column& c = column(n);
      if (c.kind == ColumnKind::categorical)
        throw SchemaError("feature column must be numeric: " + n);
    }
    features_ = std::move(names);
  }

  /// source column -> dummy column names, in first-seen value order.
  const std::unordered_map<std::string, std::vector<std::string>>& encoding_map() const {
    return encoding_;
  }

  bool has_column(const std::string& name) const { return index_.count(name) > 0; }

  const Column& column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw SchemaError("no such column: " + name);
    return cols_[it->second];
  }

  Column& column(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw SchemaError("no such column: " + name);
    return cols_[it->second];
  }

  /// Numeric view of a column; binary and numeric kinds only.
  const std::vector<double>& numeric(const std::string& name) const {
    const Column& c = column(name);
    if (c.kind == ColumnKind::categorical)
      throw SchemaError("column is categorical, expected numeric: " + name);
    return c.num;
  }

  std::vector<double> outcome_values() const {
    if (!schema_.outcome) throw SchemaError("dataset has no outcome column declared");
    return numeric(schema_.outcome->column);
  }

  double favorable_value() const {
    if (!schema_.outcome) throw SchemaError("dataset has no outcome column declared");
    auto v = detail::parse_number(schema_.outcome->favorable);
    if (!v) throw SchemaError("favorable value is not numeric: " + schema_.outcome->favorable);
    return *v;
  }

  /// Privileged-group mask for a protected attribute.
  std::vector<char> privileged_mask(const ProtectedAttr& p) const {
    const Column& c = column(p.column);
    std::vector<char> mask(rows_, 0);
    if (c.kind == ColumnKind::categorical) {
      for (size_t i = 0; i < rows_; ++i) mask[i] = (c.cat[i] == p.privileged);
    } else {
      auto v = detail::parse_number(p.privileged);
      if (!v) throw SchemaError("privileged value is not numeric: " + p.privileged);
      for (size_t i = 0; i < rows_; ++i) mask[i] = (c.num[i] == *v);
    }
    return mask;
  }

  void add_column(Column c) {
    if (index_.count(c.name)) throw SchemaError("duplicate column name: " + c.name);
    if (c.size() != rows_ && !(cols_.empty()))
      throw SchemaError("column length mismatch: " + c.name);
    if (cols_.empty()) rows_ = c.size();
    schema_.columns.emplace_back(c.name, c.kind);
    index_[c.name] = cols_.size();
    cols_.push_back(std::move(c));
  }

  void drop_column(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw SchemaError("no such column: " + name);
    cols_.erase(cols_.begin() + static_cast<long>(it->second));
    std::erase_if(schema_.columns, [&](const auto& p) { return p.first == name; });
    reindex();
  }

  void rename_column(const std::string& from, const std::string& to) {
    Column& c = column(from);
    if (index_.count(to)) throw SchemaError("duplicate column name: " + to);
    c.name = to;
    for (auto& [n, k] : schema_.columns)
      if (n == from) n = to;
    reindex();
  }

  /// Keep only rows where `keep[i]` is true.
  Dataset filter_rows(const std::vector<char>& keep) const {
    if (keep.size() != rows_) throw DimensionError("row mask length mismatch");
    Dataset out;
    out.schema_ = schema_;
    out.features_ = features_;
    out.encoding_ = encoding_;
    out.cols_.reserve(cols_.size());
    for (const auto& c : cols_) {
      Column nc;
      nc.name = c.name;
      nc.kind = c.kind;
      for (size_t i = 0; i < rows_; ++i) {
        if (!keep[i]) continue;
        if (c.kind == ColumnKind::categorical) nc.cat.push_back(c.cat[i]);
        else nc.num.push_back(c.num[i]);
      }
      out.cols_.push_back(std::move(nc));
    }
    out.reindex();
    out.rows_ = out.cols_.empty() ? 0 : out.cols_[0].size();
    return out;
  }

  /// Checks the prepared-dataset invariants: no missing values in any
  /// column, per-row dummy sums of 1, favorable value observed.
  void validate_prepared() const {
    schema_.validate();
    for (const auto& c : cols_) {
      if (c.kind == ColumnKind::categorical) continue;
      for (size_t i = 0; i < c.num.size(); ++i)
        if (std::isnan(c.num[i]))
          throw SchemaError("missing value in prepared column " + c.name + " at row " + std::to_string(i));
    }
    for (const auto& [src, dummies] : encoding_) {
      for (size_t i = 0; i < rows_; ++i) {
        double s = 0;
        for (const auto& d : dummies) s += column(d).num[i];
        if (s != 1.0)
          throw SchemaError("one-hot row sum != 1 for source column " + src + " at row " + std::to_string(i));
      }
    }
    if (schema_.outcome) {
      double fav = favorable_value();
      const auto& y = outcome_values();
      if (rows_ > 0 && std::find(y.begin(), y.end(), fav) == y.end())
        throw SchemaError("favorable value " + schema_.outcome->favorable +
                          " never occurs in outcome column " + schema_.outcome->column);
    }
  }

  /// Deterministic serialization: schema column order, dummies already in
  /// first-seen order, "\n" endings. Two identical preparations produce
  /// byte-identical output.
  void to_csv(std::ostream& out) const {
    csv::Row header;
    for (const auto& [n, k] : schema_.columns) header.push_back(n);
    csv::write_row(out, header);
    for (size_t i = 0; i < rows_; ++i) {
      csv::Row row;
      row.reserve(cols_.size());
      for (const auto& [n, k] : schema_.columns) {
        const Column& c = column(n);
        if (c.kind == ColumnKind::categorical) row.push_back(c.cat[i]);
        else row.push_back(detail::format_number(c.num[i]));
      }
      csv::write_row(out, row);
    }
  }

  std::string to_csv_string() const {
    std::ostringstream os;
    to_csv(os);
    return os.str();
  }

private:
  void reindex() {
    index_.clear();
    for (size_t i = 0; i < cols_.size(); ++i) index_[cols_[i].name] = i;
  }

  Schema schema_;
  std::vector<Column> cols_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<std::string> features_;
  std::unordered_map<std::string, std::vector<std::string>> encoding_;
  size_t rows_ = 0;

  friend Dataset one_hot(const Dataset& ds, const std::vector<std::string>& columns);
};

/// Loads a delimited text file against a declared schema. With a header
/// row, schema columns are matched by name (first occurrence wins when the
/// file repeats a name); order is free and extra file columns are ignored.
/// Without a header the schema must declare every file column in order.
/// Numeric cells parse as numbers; empty numeric cells load as missing
/// (NaN) and must be filtered before a dataset counts as prepared.
inline Dataset load_csv(const std::string& path, const Schema& schema) {
  schema.validate();
  csv::ReadOptions opt;
  opt.delimiter = schema.delimiter;
  auto rows = csv::read_file(path, opt);

  std::vector<size_t> src_index(schema.columns.size());
  size_t first_data_row = 0;
  if (schema.has_header) {
    if (rows.empty()) throw SchemaError("empty file, expected header row: " + path);
    const auto& header = rows[0];
    for (size_t c = 0; c < schema.columns.size(); ++c) {
      const auto& name = schema.columns[c].first;
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw SchemaError("missing column " + name + " in " + path);
      src_index[c] = static_cast<size_t>(it - header.begin());
    }
    first_data_row = 1;
  } else {
    for (size_t c = 0; c < schema.columns.size(); ++c) src_index[c] = c;
  }

  std::vector<Column> cols(schema.columns.size());
  for (size_t c = 0; c < schema.columns.size(); ++c) {
    cols[c].name = schema.columns[c].first;
    cols[c].kind = schema.columns[c].second;
  }
  for (size_t r = first_data_row; r < rows.size(); ++r) {
    const auto& row = rows[r];
    for (size_t c = 0; c < schema.columns.size(); ++c) {
      if (src_index[c] >= row.size())
        throw ParseError("row " + std::to_string(r - first_data_row) + " too short in " + path);
      const std::string& cell = row[src_index[c]];
      if (cols[c].kind == ColumnKind::categorical) {
        cols[c].cat.push_back(cell);
      } else {
        if (cell.empty()) {
          cols[c].num.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
          auto v = detail::parse_number(cell);
          if (!v)
            throw ParseError("unparseable numeric cell '" + cell + "' in column " +
                             cols[c].name + " at row " + std::to_string(r - first_data_row));
          cols[c].num.push_back(*v);
        }
      }
    }
  }
  return Dataset(schema, std::move(cols));
}

/// Bins a numeric column into ordered categories. `edges` are the ordered
/// cut points. With labels.size() == edges.size() + 1 the outer intervals
/// are unbounded: (-inf, e1), [e1, e2), ..., [ek, +inf). With
/// labels.size() == edges.size() - 1 the bins are [e1,e2), ..., [ek-1,ek)
/// and values outside raise a binning error.
struct BinSpec {
  std::string column;
  std::vector<double> edges;
  std::vector<std::string> labels;

  void validate() const {
    if (edges.empty()) throw SchemaError("bin spec needs at least one edge");
    for (size_t i = 1; i < edges.size(); ++i)
      if (!(edges[i - 1] < edges[i])) throw SchemaError("bin edges must be strictly increasing");
    if (labels.size() != edges.size() + 1 && labels.size() != edges.size() - 1)
      throw SchemaError("bin label count must be edges+1 (unbounded) or edges-1 (bounded)");
  }
};

inline Dataset bin_numeric(const Dataset& ds, const BinSpec& spec) {
  spec.validate();
  const Column& src = ds.column(spec.column);
  if (src.kind == ColumnKind::categorical)
    throw SchemaError("bin_numeric: source column is not numeric: " + spec.column);

  const bool unbounded = spec.labels.size() == spec.edges.size() + 1;
  Dataset out = ds;
  Column& c = out.column(spec.column);
  c.kind = ColumnKind::categorical;
  c.cat.clear();
  c.cat.reserve(src.num.size());
  for (size_t i = 0; i < src.num.size(); ++i) {
    double v = src.num[i];
    if (std::isnan(v))
      throw Error("bin_numeric: value outside all bins (missing) at row " + std::to_string(i));
    size_t pos = static_cast<size_t>(
        std::upper_bound(spec.edges.begin(), spec.edges.end(), v) - spec.edges.begin());
    // pos = number of edges <= v
    if (unbounded) {
      c.cat.push_back(spec.labels[pos]);
    } else {
      if (pos == 0 || pos == spec.edges.size())
        throw Error("bin_numeric: value " + detail::format_number(v) +
                    " outside all bins at row " + std::to_string(i));
      c.cat.push_back(spec.labels[pos - 1]);
    }
  }
  c.num.clear();
  for (auto& [n, k] : out.schema().columns)
    if (n == spec.column) k = ColumnKind::categorical;
  return out;
}

/// Replaces each named categorical column with one {0,1} dummy column per
/// distinct value, first-seen order, named "<col>=<value>". Per row the
/// dummies of one source column sum to exactly 1.
inline Dataset one_hot(const Dataset& ds, const std::vector<std::string>& columns) {
  Dataset out = ds;
  for (const auto& name : columns) {
    const Column& src = out.column(name);
    if (src.kind != ColumnKind::categorical)
      throw SchemaError("one_hot: column is not categorical: " + name);

    std::vector<std::string> values;  // first-seen order
    std::unordered_map<std::string, size_t> vidx;
    for (const auto& v : src.cat) {
      if (vidx.emplace(v, values.size()).second) values.push_back(v);
    }

    std::vector<Column> dummies(values.size());
    std::vector<std::string> dummy_names;
    for (size_t k = 0; k < values.size(); ++k) {
      dummies[k].name = name + "=" + values[k];
      dummies[k].kind = ColumnKind::binary;
      dummies[k].num.assign(src.cat.size(), 0.0);
      dummy_names.push_back(dummies[k].name);
    }
    for (size_t i = 0; i < src.cat.size(); ++i) dummies[vidx[src.cat[i]]].num[i] = 1.0;

    // splice dummies at the source column position
    size_t pos = 0;
    for (size_t i = 0; i < out.cols_.size(); ++i)
      if (out.cols_[i].name == name) pos = i;
    out.cols_.erase(out.cols_.begin() + static_cast<long>(pos));
    out.cols_.insert(out.cols_.begin() + static_cast<long>(pos),
                     std::make_move_iterator(dummies.begin()),
                     std::make_move_iterator(dummies.end()));
    auto sit = std::find_if(out.schema_.columns.begin(), out.schema_.columns.end(),
                            [&](const auto& p) { return p.first == name; });
    size_t spos = static_cast<size_t>(sit - out.schema_.columns.begin());
    out.schema_.columns.erase(sit);
    std::vector<std::pair<std::string, ColumnKind>> entries;
    for (const auto& dn : dummy_names) entries.emplace_back(dn, ColumnKind::binary);
    out.schema_.columns.insert(out.schema_.columns.begin() + static_cast<long>(spos),
                               entries.begin(), entries.end());
    out.encoding_[name] = dummy_names;
    out.reindex();
  }
  return out;
}

/// Declarative schema config, line oriented:
///   column <name> <categorical|numeric|binary>
///   protected <column> <privileged value>
///   outcome <column> <favorable value>
///   header <true|false>
///   delimiter <char|space|tab|comma>
/// '#' starts a comment.
inline Schema parse_schema_config(std::istream& in) {
  Schema s;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto fail = [&](const std::string& msg) {
      throw ParseError("schema config line " + std::to_string(lineno) + ": " + msg);
    };
    if (kw == "column") {
      std::string name, kind;
      if (!(ls >> name >> kind)) fail("expected: column <name> <kind>");
      s.columns.emplace_back(name, column_kind_from_string(kind));
    } else if (kw == "protected") {
      std::string col, val;
      if (!(ls >> col >> val)) fail("expected: protected <column> <privileged>");
      s.protected_attrs.push_back({col, val});
    } else if (kw == "outcome") {
      std::string col, val;
      if (!(ls >> col >> val)) fail("expected: outcome <column> <favorable>");
      s.outcome = OutcomeSpec{col, val};
    } else if (kw == "header") {
      std::string v;
      if (!(ls >> v)) fail("expected: header <true|false>");
      s.has_header = (v == "true" || v == "1");
    } else if (kw == "delimiter") {
      std::string v;
      if (!(ls >> v)) fail("expected: delimiter <char>");
      if (v == "space") s.delimiter = ' ';
      else if (v == "tab") s.delimiter = '\t';
      else if (v == "comma") s.delimiter = ',';
      else if (v.size() == 1) s.delimiter = v[0];
      else fail("bad delimiter: " + v);
    } else {
      fail("unknown keyword: " + kw);
    }
  }
  s.validate();
  return s;
}

inline Schema load_schema_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema config: " + path);
  return parse_schema_config(in);
}

}  // namespace ncfair
