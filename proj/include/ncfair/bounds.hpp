#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncfair/dataset.hpp"
#include "ncfair/error.hpp"
#include "ncfair/group_metrics.hpp"
#include "ncfair/rules.hpp"

namespace ncfair {

enum class Notion { statistical_parity, equal_opportunity, calibration };

inline const char* to_string(Notion n) {
  switch (n) {
    case Notion::statistical_parity: return "statistical_parity";
    case Notion::equal_opportunity: return "equal_opportunity";
    case Notion::calibration: return "calibration";
  }
  return "?";
}

inline Notion notion_from_string(const std::string& s) {
  if (s == "statistical_parity" || s == "sp") return Notion::statistical_parity;
  if (s == "equal_opportunity" || s == "eo") return Notion::equal_opportunity;
  if (s == "calibration" || s == "cal") return Notion::calibration;
  throw ConfigError("unknown fairness notion: " + s);
}

/// Individual-fairness transfer: a system within epsilon of a
/// (kappa, delta)-fair reference is (kappa, 2*epsilon + delta)-fair.
inline double if_transfer(double epsilon, double delta) {
  if (epsilon < 0 || delta < 0) throw Error("if_transfer: epsilon and delta must be nonnegative");
  return 2 * epsilon + delta;
}

/// Converse direction: if the reference violates (kappa, delta) and the
/// system stays within epsilon, the system violates (kappa, delta - 2*epsilon).
/// The value may be negative, in which case the bound is vacuous.
inline double if_converse(double epsilon, double delta) {
  if (epsilon < 0 || delta < 0) throw Error("if_converse: epsilon and delta must be nonnegative");
  return delta - 2 * epsilon;
}

/// Group-notion transfer bound 2*M*epsilon + delta. M may be signed; the
/// empirical estimate below keeps the unprivileged-minus-privileged sign.
inline double group_transfer(double epsilon, double delta, double lipschitz) {
  if (epsilon < 0) throw Error("group_transfer: epsilon must be nonnegative");
  return 2 * lipschitz * epsilon + delta;
}

/// Empirical stand-in for the Lipschitz constant:
/// (rate of the system - rate of the reference) / epsilon, evaluated at the
/// unprivileged group, signed.
inline double estimate_lipschitz(double system_rate, double auditor_rate, double epsilon) {
  if (!(epsilon > 0)) throw Error("estimate_lipschitz: epsilon must be positive");
  return (system_rate - auditor_rate) / epsilon;
}

/// Largest auditor gap that still guarantees (kappa, delta')-individual
/// fairness: epsilon < (delta' - delta) / 2.
inline double epsilon_threshold_individual(double delta, double delta_prime) {
  if (delta < 0) throw Error("epsilon threshold: delta must be nonnegative");
  if (!(delta_prime > delta))
    throw Error("epsilon threshold infeasible: delta' must exceed delta");
  return (delta_prime - delta) / 2;
}

/// Group version: epsilon < (delta' - delta) / (2M), defined for M > 0.
inline double epsilon_threshold_group(double delta, double delta_prime, double lipschitz) {
  if (delta < 0) throw Error("epsilon threshold: delta must be nonnegative");
  if (!(delta_prime > delta))
    throw Error("epsilon threshold infeasible: delta' must exceed delta");
  if (!(lipschitz > 0))
    throw Error("epsilon threshold: undefined for nonpositive Lipschitz constant");
  return (delta_prime - delta) / (2 * lipschitz);
}

/// Forward and converse individual-fairness levels for one (epsilon, delta).
struct IFBound {
  double epsilon = 0, delta = 0;
  double forward = 0;   // 2e + d
  double converse = 0;  // d - 2e
};

inline IFBound if_bounds(double epsilon, double delta) {
  return {epsilon, delta, if_transfer(epsilon, delta), if_converse(epsilon, delta)};
}

/// One row of the system-vs-auditor evaluation: the system's group metric
/// (outcome distance), the auditor's metric (delta), the empirical M, and
/// the transfer bound 2*M*epsilon + delta.
///
/// Conventions, applied uniformly:
///  - auditor evaluation: prediction = rule outputs, labels = outcome column;
///  - system evaluation: prediction = outcome column, labels = rule outputs
///    (the audited relation serves as the benchmark);
///  - M is estimated at the unprivileged group, signed;
///  - two verdicts are reported because the signed and absolute readings of
///    "outcome distance within the bound" genuinely differ: `satisfied_signed`
///    (outcome <= bound) and `satisfied_abs` (|outcome| <= |bound|).
struct TransferBoundReport {
  std::string dataset;
  std::string protected_attr;
  Notion notion = Notion::statistical_parity;
  double epsilon = 1.0;
  double auditor_delta = 0;     // auditor's signed metric
  double m_hat = 0;             // empirical Lipschitz estimate, signed
  double outcome_distance = 0;  // system's signed metric
  double upper_bound = 0;       // 2*m_hat*epsilon + auditor_delta
  bool satisfied_signed = false;
  bool satisfied_abs = false;
  // support counts for auditability
  std::size_t unprivileged_size = 0, privileged_size = 0;
  std::size_t auditor_support = 0, system_support = 0;  // unprivileged conditioning events
};

namespace detail {

struct NotionRate {
  std::optional<double> value;
  std::size_t support = 0;
};

inline NotionRate notion_rate(Notion n, const RateEntry& e) {
  switch (n) {
    case Notion::statistical_parity: return {e.favorable_rate, e.size};
    case Notion::equal_opportunity: return {e.tpr, e.label_favorable};
    case Notion::calibration: return {e.ppv, e.favorable};
  }
  return {};
}

inline double notion_difference(Notion n, const GroupRates& r, const std::string& what) {
  auto u = notion_rate(n, r.unprivileged), p = notion_rate(n, r.privileged);
  if (!u.value)
    throw UndefinedRateError(std::string(to_string(n)) + " (" + what +
                             "): zero support in group " + r.unprivileged.group);
  if (!p.value)
    throw UndefinedRateError(std::string(to_string(n)) + " (" + what +
                             "): zero support in group " + r.privileged.group);
  return *u.value - *p.value;
}

}  // namespace detail

inline GroupSplit group_split_for(const Dataset& ds, const ProtectedAttr& attr) {
  GroupSplit s;
  s.privileged = ds.privileged_mask(attr);
  s.attribute = attr.column;
  s.privileged_name = attr.privileged;
  s.unprivileged_name = "not-" + attr.privileged;
  return s;
}

inline TransferBoundReport transfer_bound_row(const Dataset& ds,
                                              std::span<const double> system_outputs,
                                              const RuleSet& auditor, const ProtectedAttr& attr,
                                              Notion notion, double epsilon,
                                              const std::string& dataset_id = "") {
  if (!(epsilon > 0)) throw Error("transfer bound: epsilon must be positive");
  std::vector<double> f = apply_ruleset(auditor, ds);
  double fav = ds.favorable_value();
  GroupSplit split = group_split_for(ds, attr);

  GroupRates auditor_rates = group_rates(f, ds.outcome_values(), split, fav);
  GroupRates system_rates = group_rates(system_outputs, f, split, fav);

  TransferBoundReport r;
  r.dataset = dataset_id;
  r.protected_attr = attr.column;
  r.notion = notion;
  r.epsilon = epsilon;
  r.auditor_delta = detail::notion_difference(notion, auditor_rates, "auditor");
  r.outcome_distance = detail::notion_difference(notion, system_rates, "system");

  auto sys_u = detail::notion_rate(notion, system_rates.unprivileged);
  auto aud_u = detail::notion_rate(notion, auditor_rates.unprivileged);
  r.m_hat = estimate_lipschitz(*sys_u.value, *aud_u.value, epsilon);
  r.upper_bound = group_transfer(epsilon, r.auditor_delta, r.m_hat);
  r.satisfied_signed = r.outcome_distance <= r.upper_bound;
  r.satisfied_abs = std::abs(r.outcome_distance) <= std::abs(r.upper_bound);
  r.unprivileged_size = system_rates.unprivileged.size;
  r.privileged_size = system_rates.privileged.size;
  r.auditor_support = aud_u.support;
  r.system_support = sys_u.support;
  return r;
}

/// One auditor-evaluation cell: the rule relation scored against the
/// dataset's outcome column.
struct AuditorMetricRow {
  std::string dataset;
  std::string protected_attr;
  Notion notion = Notion::statistical_parity;
  double value = 0;
  double coarse_delta = 0;
  bool satisfied = false;
  std::size_t unprivileged_support = 0, privileged_support = 0;
};

inline AuditorMetricRow auditor_metric_row(const Dataset& ds, std::span<const double> f_outputs,
                                           const ProtectedAttr& attr, Notion notion,
                                           double coarse_delta, const std::string& dataset_id = "") {
  GroupSplit split = group_split_for(ds, attr);
  GroupRates r = group_rates(f_outputs, ds.outcome_values(), split, ds.favorable_value());
  AuditorMetricRow row;
  row.dataset = dataset_id;
  row.protected_attr = attr.column;
  row.notion = notion;
  row.value = detail::notion_difference(notion, r, "auditor");
  row.coarse_delta = coarse_delta;
  row.satisfied = satisfies_coarse(row.value, coarse_delta);
  auto u = detail::notion_rate(notion, r.unprivileged), p = detail::notion_rate(notion, r.privileged);
  row.unprivileged_support = u.support;
  row.privileged_support = p.support;
  return row;
}

}  // namespace ncfair
