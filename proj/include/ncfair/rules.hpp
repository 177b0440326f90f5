#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncfair/dataset.hpp"
#include "ncfair/error.hpp"

namespace ncfair {

/// Rule file grammar (UTF-8, line oriented, '#' comments):
///
///   output <name> in {<label>(, <label>)*}
///   when <cond> (and <cond>)* -> <label>
///   ...
///   otherwise -> <label>
///
///   cond := <column> <op> <value>          op in {=, !=, <, >, <=, >=}
///         | <column> in [<lo>, <hi>]       closed numeric range
///         | <column> in {<v>(, <v>)*}      value set
///
/// Rules match first to last; `otherwise` is mandatory and makes the
/// relation total. Labels are numeric so output distances are defined.
enum class ConditionOp { eq, ne, lt, gt, le, ge, in_set, in_range };

struct Condition {
  std::string column;
  ConditionOp op = ConditionOp::eq;
  std::vector<std::string> operands;  // 1 value, 2 range bounds, or n set members

  std::string to_text() const {
    switch (op) {
      case ConditionOp::eq: return column + " = " + operands[0];
      case ConditionOp::ne: return column + " != " + operands[0];
      case ConditionOp::lt: return column + " < " + operands[0];
      case ConditionOp::gt: return column + " > " + operands[0];
      case ConditionOp::le: return column + " <= " + operands[0];
      case ConditionOp::ge: return column + " >= " + operands[0];
      case ConditionOp::in_range: return column + " in [" + operands[0] + ", " + operands[1] + "]";
      case ConditionOp::in_set: {
        std::string s = column + " in {";
        for (size_t i = 0; i < operands.size(); ++i) {
          if (i) s += ", ";
          s += operands[i];
        }
        return s + "}";
      }
    }
    return "";
  }
};

struct Rule {
  std::vector<Condition> conditions;  // conjunction
  double label = 0;
};

struct RuleSet {
  std::string output_name;
  std::vector<double> label_domain;
  std::vector<Rule> rules;     // ordered, first match wins
  double default_label = 0;    // mandatory `otherwise`

  bool in_domain(double v) const {
    for (double d : label_domain)
      if (d == v) return true;
    return false;
  }

  std::string to_text() const;
};

namespace detail {

inline double require_label(const std::string& tok, size_t lineno) {
  auto v = parse_number(tok);
  if (!v) throw ParseError("rules line " + std::to_string(lineno) + ": label is not numeric: " + tok);
  return *v;
}

inline void trim_in_place_rules(std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    s.clear();
    return;
  }
  size_t e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_commas(const std::string& body) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : body) {
    if (c == ',') {
      trim_in_place_rules(cur);
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  trim_in_place_rules(cur);
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace detail

inline RuleSet parse_ruleset(std::istream& in) {
  RuleSet rs;
  bool saw_output = false, saw_default = false;
  std::string line;
  size_t lineno = 0;

  auto fail = [&](const std::string& msg) {
    throw ParseError("rules line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    std::string t = line;
    detail::trim_in_place_rules(t);
    if (t.empty()) continue;

    std::istringstream ls(t);
    std::string kw;
    ls >> kw;
    if (kw == "output") {
      if (saw_output) fail("duplicate output declaration");
      std::string name, inkw;
      if (!(ls >> name >> inkw) || inkw != "in") fail("expected: output <name> in {...}");
      auto lb = t.find('{');
      auto rb = t.find('}');
      if (lb == std::string::npos || rb == std::string::npos || rb < lb)
        fail("expected label set in braces");
      for (const auto& tok : detail::split_commas(t.substr(lb + 1, rb - lb - 1)))
        rs.label_domain.push_back(detail::require_label(tok, lineno));
      if (rs.label_domain.empty()) fail("empty label domain");
      rs.output_name = name;
      saw_output = true;
    } else if (kw == "when") {
      if (!saw_output) fail("output declaration must come first");
      if (saw_default) fail("rules after otherwise clause");
      auto arrow = t.find("->");
      if (arrow == std::string::npos) fail("missing '->'");
      std::string conds = t.substr(4, arrow - 4);
      std::string labtok = t.substr(arrow + 2);
      detail::trim_in_place_rules(labtok);
      Rule rule;
      rule.label = detail::require_label(labtok, lineno);
      if (!rs.in_domain(rule.label)) fail("label " + labtok + " not in output domain");

      // split on the keyword `and` at top level (not inside braces/brackets)
      std::vector<std::string> parts;
      {
        int depth = 0;
        std::string cur;
        std::istringstream cs(conds);
        std::string tok;
        while (cs >> tok) {
          for (char c : tok) {
            if (c == '{' || c == '[') ++depth;
            if (c == '}' || c == ']') --depth;
          }
          if (tok == "and" && depth == 0) {
            parts.push_back(cur);
            cur.clear();
          } else {
            if (!cur.empty()) cur += ' ';
            cur += tok;
          }
        }
        parts.push_back(cur);
      }
      for (auto& p : parts) {
        detail::trim_in_place_rules(p);
        if (p.empty()) fail("empty condition");
        std::istringstream ps(p);
        Condition c;
        std::string op;
        if (!(ps >> c.column >> op)) fail("bad condition: " + p);
        std::string rest;
        std::getline(ps, rest);
        detail::trim_in_place_rules(rest);
        if (op == "=") c.op = ConditionOp::eq;
        else if (op == "!=") c.op = ConditionOp::ne;
        else if (op == "<") c.op = ConditionOp::lt;
        else if (op == ">") c.op = ConditionOp::gt;
        else if (op == "<=") c.op = ConditionOp::le;
        else if (op == ">=") c.op = ConditionOp::ge;
        else if (op == "in") {
          if (rest.size() >= 2 && rest.front() == '[' && rest.back() == ']') {
            c.op = ConditionOp::in_range;
          } else if (rest.size() >= 2 && rest.front() == '{' && rest.back() == '}') {
            c.op = ConditionOp::in_set;
          } else {
            fail("expected [lo, hi] or {v, ...} after 'in': " + p);
          }
          c.operands = detail::split_commas(rest.substr(1, rest.size() - 2));
          if (c.op == ConditionOp::in_range) {
            if (c.operands.size() != 2) fail("range needs exactly two bounds: " + p);
            if (!detail::parse_number(c.operands[0]) || !detail::parse_number(c.operands[1]))
              fail("range bounds must be numeric: " + p);
          }
          if (c.op == ConditionOp::in_set && c.operands.empty()) fail("empty value set: " + p);
        } else {
          fail("unknown operator: " + op);
        }
        if (c.op != ConditionOp::in_set && c.op != ConditionOp::in_range) {
          if (rest.empty()) fail("missing operand: " + p);
          c.operands.push_back(rest);
        }
        rule.conditions.push_back(std::move(c));
      }
      rs.rules.push_back(std::move(rule));
    } else if (kw == "otherwise") {
      if (!saw_output) fail("output declaration must come first");
      auto arrow = t.find("->");
      if (arrow == std::string::npos) fail("missing '->'");
      std::string labtok = t.substr(arrow + 2);
      detail::trim_in_place_rules(labtok);
      rs.default_label = detail::require_label(labtok, lineno);
      if (!rs.in_domain(rs.default_label)) fail("default label not in output domain");
      saw_default = true;
    } else {
      fail("unknown keyword: " + kw);
    }
  }
  if (!saw_output) throw ParseError("rules: missing output declaration");
  if (!saw_default) throw ParseError("rules: missing otherwise clause (default label)");
  return rs;
}

inline RuleSet parse_ruleset(const std::string& text) {
  std::istringstream in(text);
  return parse_ruleset(in);
}

inline RuleSet load_ruleset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule file: " + path);
  return parse_ruleset(in);
}

inline std::string RuleSet::to_text() const {
  std::ostringstream os;
  os << "output " << output_name << " in {";
  for (size_t i = 0; i < label_domain.size(); ++i) {
    if (i) os << ", ";
    os << detail::format_number(label_domain[i]);
  }
  os << "}\n";
  for (const auto& r : rules) {
    os << "when ";
    for (size_t i = 0; i < r.conditions.size(); ++i) {
      if (i) os << " and ";
      os << r.conditions[i].to_text();
    }
    os << " -> " << detail::format_number(r.label) << "\n";
  }
  os << "otherwise -> " << detail::format_number(default_label) << "\n";
  return os.str();
}

namespace detail {

/// Conditions pre-resolved against one dataset for fast row evaluation.
struct BoundCondition {
  const Column* col = nullptr;
  ConditionOp op;
  double num_operand = 0, num_hi = 0;
  std::string str_operand;
  std::vector<std::string> str_set;
  std::vector<double> num_set;

  bool eval(size_t row) const {
    const bool is_cat = col->kind == ColumnKind::categorical;
    switch (op) {
      case ConditionOp::eq:
        return is_cat ? col->cat[row] == str_operand : col->num[row] == num_operand;
      case ConditionOp::ne:
        return is_cat ? col->cat[row] != str_operand : col->num[row] != num_operand;
      case ConditionOp::lt: return col->num[row] < num_operand;
      case ConditionOp::gt: return col->num[row] > num_operand;
      case ConditionOp::le: return col->num[row] <= num_operand;
      case ConditionOp::ge: return col->num[row] >= num_operand;
      case ConditionOp::in_range:
        return col->num[row] >= num_operand && col->num[row] <= num_hi;
      case ConditionOp::in_set:
        if (is_cat) {
          for (const auto& s : str_set)
            if (col->cat[row] == s) return true;
          return false;
        }
        for (double v : num_set)
          if (col->num[row] == v) return true;
        return false;
    }
    return false;
  }
};

inline BoundCondition bind_condition(const Condition& c, const Dataset& ds) {
  if (!ds.has_column(c.column))
    throw SchemaError("rule references absent column: " + c.column);
  BoundCondition b;
  b.col = &ds.column(c.column);
  b.op = c.op;
  const bool is_cat = b.col->kind == ColumnKind::categorical;
  auto need_numeric = [&](const std::string& tok) {
    auto v = parse_number(tok);
    if (!v)
      throw SchemaError("rule operand '" + tok + "' is not numeric for column " + c.column);
    return *v;
  };
  switch (c.op) {
    case ConditionOp::eq:
    case ConditionOp::ne:
      if (is_cat) b.str_operand = c.operands[0];
      else b.num_operand = need_numeric(c.operands[0]);
      break;
    case ConditionOp::lt:
    case ConditionOp::gt:
    case ConditionOp::le:
    case ConditionOp::ge:
      if (is_cat)
        throw SchemaError("ordered comparison on categorical column " + c.column);
      b.num_operand = need_numeric(c.operands[0]);
      break;
    case ConditionOp::in_range:
      if (is_cat) throw SchemaError("numeric range on categorical column " + c.column);
      b.num_operand = need_numeric(c.operands[0]);
      b.num_hi = need_numeric(c.operands[1]);
      break;
    case ConditionOp::in_set:
      if (is_cat) b.str_set = c.operands;
      else
        for (const auto& tok : c.operands) b.num_set.push_back(need_numeric(tok));
      break;
  }
  return b;
}

}  // namespace detail

/// First matching rule's label per row, default when none match. All
/// referenced columns are resolved (and kinds checked) before any row is
/// evaluated, so a bad rule file fails fast.
inline std::vector<double> apply_ruleset(const RuleSet& rs, const Dataset& ds) {
  std::vector<std::vector<detail::BoundCondition>> bound;
  bound.reserve(rs.rules.size());
  for (const auto& r : rs.rules) {
    std::vector<detail::BoundCondition> bc;
    bc.reserve(r.conditions.size());
    for (const auto& c : r.conditions) bc.push_back(detail::bind_condition(c, ds));
    bound.push_back(std::move(bc));
  }
  std::vector<double> out(ds.row_count(), rs.default_label);
  for (size_t i = 0; i < ds.row_count(); ++i) {
    for (size_t r = 0; r < bound.size(); ++r) {
      bool match = true;
      for (const auto& bc : bound[r]) {
        if (!bc.eval(i)) {
          match = false;
          break;
        }
      }
      if (match) {
        out[i] = rs.rules[r].label;
        break;
      }
    }
  }
  return out;
}

/// Binary judgment: 1 when the output gap reaches epsilon.
inline int judgment(double g_x, double f_x, double epsilon) {
  if (!(epsilon > 0)) throw Error("judgment: epsilon must be positive");
  return std::abs(g_x - f_x) >= epsilon ? 1 : 0;
}

/// Per-row judgments over aligned output vectors.
inline std::vector<int> judgments(const std::vector<double>& g_outputs,
                                  const std::vector<double>& f_outputs, double epsilon) {
  if (g_outputs.size() != f_outputs.size())
    throw DimensionError("judgments: vectors have different lengths");
  std::vector<int> out(g_outputs.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = judgment(g_outputs[i], f_outputs[i], epsilon);
  return out;
}

/// Pointwise output distances d(g(x), f(x)) and the noncomparative-fairness
/// verdict: fair exactly when every distance is below epsilon.
struct DistanceProfile {
  std::vector<double> distances;
  double max_distance = 0;
  double epsilon = 0;
  bool nc_fair = true;
};

inline DistanceProfile distance_profile(const std::vector<double>& g_outputs,
                                        const std::vector<double>& f_outputs, double epsilon) {
  if (!(epsilon > 0)) throw Error("distance_profile: epsilon must be positive");
  if (g_outputs.size() != f_outputs.size())
    throw DimensionError("distance_profile: vectors have different lengths");
  DistanceProfile p;
  p.epsilon = epsilon;
  p.distances.reserve(g_outputs.size());
  for (size_t i = 0; i < g_outputs.size(); ++i) {
    double d = std::abs(g_outputs[i] - f_outputs[i]);
    p.distances.push_back(d);
    p.max_distance = std::max(p.max_distance, d);
  }
  p.nc_fair = p.max_distance < epsilon;
  return p;
}

}  // namespace ncfair
