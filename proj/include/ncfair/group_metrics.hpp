#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncfair/error.hpp"

namespace ncfair {

/// Privileged/unprivileged split of the rows. The unprivileged group is the
/// complement of the privileged one; differences are reported unprivileged
/// minus privileged throughout.
struct GroupSplit {
  std::vector<char> privileged;
  std::string attribute = "protected";
  std::string privileged_name = "privileged";
  std::string unprivileged_name = "unprivileged";
};

/// Count-backed conditional rates for one group. A rate whose conditioning
/// event has zero support stays unset rather than defaulting to 0.
struct RateEntry {
  std::string group;
  std::size_t size = 0;               // rows in the group
  std::size_t favorable = 0;          // predictions == favorable
  std::size_t label_favorable = 0;    // labels == favorable
  std::size_t true_positive = 0;      // prediction and label both favorable
  std::optional<double> favorable_rate;  // P[pred=fav | group]
  std::optional<double> tpr;             // P[pred=fav | label=fav, group]
  std::optional<double> ppv;             // P[label=fav | pred=fav, group]
};

struct GroupRates {
  RateEntry privileged;
  RateEntry unprivileged;
};

namespace detail {

inline RateEntry rates_for(std::span<const double> pred, std::span<const double> labels,
                           const std::vector<char>& mask, bool member_value, double fav,
                           const std::string& name) {
  RateEntry e;
  e.group = name;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (static_cast<bool>(mask[i]) != member_value) continue;
    ++e.size;
    bool p_fav = pred[i] == fav;
    bool y_fav = !labels.empty() && labels[i] == fav;
    if (p_fav) ++e.favorable;
    if (y_fav) ++e.label_favorable;
    if (p_fav && y_fav) ++e.true_positive;
  }
  if (e.size > 0)
    e.favorable_rate = static_cast<double>(e.favorable) / static_cast<double>(e.size);
  if (!labels.empty()) {
    if (e.label_favorable > 0)
      e.tpr = static_cast<double>(e.true_positive) / static_cast<double>(e.label_favorable);
    if (e.favorable > 0)
      e.ppv = static_cast<double>(e.true_positive) / static_cast<double>(e.favorable);
  }
  return e;
}

}  // namespace detail

/// All conditional rates with their supporting counts. `labels` may be
/// empty when only favorable rates are needed.
inline GroupRates group_rates(std::span<const double> pred, std::span<const double> labels,
                              const GroupSplit& split, double favorable) {
  if (pred.size() != split.privileged.size())
    throw DimensionError("group_rates: predictions not aligned with group mask");
  if (!labels.empty() && labels.size() != pred.size())
    throw DimensionError("group_rates: labels not aligned with predictions");
  GroupRates r;
  r.privileged = detail::rates_for(pred, labels, split.privileged, true, favorable,
                                   split.attribute + "=" + split.privileged_name);
  r.unprivileged = detail::rates_for(pred, labels, split.privileged, false, favorable,
                                     split.attribute + "=" + split.unprivileged_name);
  return r;
}

/// P[pred=fav | unprivileged] - P[pred=fav | privileged].
inline double statistical_parity_difference(std::span<const double> predictions,
                                            const GroupSplit& split, double favorable) {
  GroupRates r = group_rates(predictions, {}, split, favorable);
  if (!r.unprivileged.favorable_rate)
    throw UndefinedRateError("statistical parity: empty group " + r.unprivileged.group);
  if (!r.privileged.favorable_rate)
    throw UndefinedRateError("statistical parity: empty group " + r.privileged.group);
  return *r.unprivileged.favorable_rate - *r.privileged.favorable_rate;
}

/// True-positive-rate gap, unprivileged minus privileged.
inline double equal_opportunity_difference(std::span<const double> predictions,
                                           std::span<const double> labels,
                                           const GroupSplit& split, double favorable) {
  GroupRates r = group_rates(predictions, labels, split, favorable);
  if (!r.unprivileged.tpr)
    throw UndefinedRateError("equal opportunity: no favorable labels in group " +
                             r.unprivileged.group);
  if (!r.privileged.tpr)
    throw UndefinedRateError("equal opportunity: no favorable labels in group " +
                             r.privileged.group);
  return *r.unprivileged.tpr - *r.privileged.tpr;
}

/// Positive-predictive-value gap, unprivileged minus privileged.
inline double calibration_difference(std::span<const double> predictions,
                                     std::span<const double> labels, const GroupSplit& split,
                                     double favorable) {
  GroupRates r = group_rates(predictions, labels, split, favorable);
  if (!r.unprivileged.ppv)
    throw UndefinedRateError("calibration: no favorable predictions in group " +
                             r.unprivileged.group);
  if (!r.privileged.ppv)
    throw UndefinedRateError("calibration: no favorable predictions in group " +
                             r.privileged.group);
  return *r.unprivileged.ppv - *r.privileged.ppv;
}

/// Coarse check: the groupwise gap is within delta in absolute value.
/// The underlying definitions quantify over both group orderings, which
/// symmetrizes the one-sided bound to |value| <= delta.
inline bool satisfies_coarse(double metric_value, double delta) {
  return std::abs(metric_value) <= delta;
}

}  // namespace ncfair
