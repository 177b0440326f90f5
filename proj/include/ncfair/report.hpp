#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncfair/bounds.hpp"
#include "ncfair/similarity.hpp"
#include "ncfair/synth.hpp"

namespace ncfair {

/// FNV-1a over the canonical config text; reports carry it so a table can
/// be traced back to the exact run configuration.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct ReportMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string meta_comment(const ReportMeta& m) {
  return "# config_hash=" + m.config_hash + " seed=" + std::to_string(m.seed) + "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// auditor table (rule relation vs recorded outcomes)

inline void write_auditor_table_csv(std::ostream& out, const std::vector<AuditorMetricRow>& rows,
                                    const ReportMeta& meta) {
  out << detail::meta_comment(meta);
  out << "dataset,protected,metric,value,delta,satisfied,support_unprivileged,support_privileged\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.protected_attr << ',' << to_string(r.notion) << ','
        << detail::fmt(r.value) << ',' << detail::fmt(r.coarse_delta) << ','
        << (r.satisfied ? "true" : "false") << ',' << r.unprivileged_support << ','
        << r.privileged_support << '\n';
  }
}

inline nlohmann::json auditor_table_json(const std::vector<AuditorMetricRow>& rows,
                                         const ReportMeta& meta) {
  nlohmann::json j;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"dataset", r.dataset},
                         {"protected", r.protected_attr},
                         {"metric", to_string(r.notion)},
                         {"value", r.value},
                         {"delta", r.coarse_delta},
                         {"satisfied", r.satisfied},
                         {"support_unprivileged", r.unprivileged_support},
                         {"support_privileged", r.privileged_support}});
  }
  return j;
}

inline void write_auditor_table_md(std::ostream& out, const std::vector<AuditorMetricRow>& rows,
                                   const ReportMeta& meta) {
  out << "| dataset | protected | metric | value | delta | satisfied | support (unpriv/priv) |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << r.dataset << " | " << r.protected_attr << " | " << to_string(r.notion) << " | "
        << detail::fmt(r.value) << " | " << detail::fmt(r.coarse_delta) << " | "
        << (r.satisfied ? "yes" : "no") << " | " << r.unprivileged_support << "/"
        << r.privileged_support << " |\n";
  }
  out << "\nconfig_hash=" << meta.config_hash << " seed=" << meta.seed << "\n";
}

// ---------------------------------------------------------------------------
// transfer-bound table (system vs auditor benchmark)

inline void write_transfer_table_csv(std::ostream& out,
                                     const std::vector<TransferBoundReport>& rows,
                                     const ReportMeta& meta) {
  out << detail::meta_comment(meta);
  out << "dataset,protected,notion,outcome_distance,upper_bound,abs_outcome_distance,"
         "abs_upper_bound,m_hat,epsilon,auditor_delta,satisfied_signed,satisfied_abs,"
         "support_unprivileged,support_privileged,support_auditor,support_system\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.protected_attr << ',' << to_string(r.notion) << ','
        << detail::fmt(r.outcome_distance) << ',' << detail::fmt(r.upper_bound) << ','
        << detail::fmt(std::abs(r.outcome_distance)) << ',' << detail::fmt(std::abs(r.upper_bound))
        << ',' << detail::fmt(r.m_hat) << ',' << detail::fmt(r.epsilon) << ','
        << detail::fmt(r.auditor_delta) << ',' << (r.satisfied_signed ? "true" : "false") << ','
        << (r.satisfied_abs ? "true" : "false") << ',' << r.unprivileged_size << ','
        << r.privileged_size << ',' << r.auditor_support << ',' << r.system_support << '\n';
  }
}

inline nlohmann::json transfer_table_json(const std::vector<TransferBoundReport>& rows,
                                          const ReportMeta& meta) {
  nlohmann::json j;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"dataset", r.dataset},
                         {"protected", r.protected_attr},
                         {"notion", to_string(r.notion)},
                         {"outcome_distance", r.outcome_distance},
                         {"upper_bound", r.upper_bound},
                         {"abs_outcome_distance", std::abs(r.outcome_distance)},
                         {"abs_upper_bound", std::abs(r.upper_bound)},
                         {"m_hat", r.m_hat},
                         {"epsilon", r.epsilon},
                         {"auditor_delta", r.auditor_delta},
                         {"satisfied_signed", r.satisfied_signed},
                         {"satisfied_abs", r.satisfied_abs},
                         {"support_unprivileged", r.unprivileged_size},
                         {"support_privileged", r.privileged_size},
                         {"support_auditor", r.auditor_support},
                         {"support_system", r.system_support}});
  }
  return j;
}

inline void write_transfer_table_md(std::ostream& out, const std::vector<TransferBoundReport>& rows,
                                    const ReportMeta& meta) {
  out << "| dataset | protected | notion | outcome distance | upper bound | M^ | epsilon | "
         "auditor delta | satisfied (signed) | satisfied (abs) |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << r.dataset << " | " << r.protected_attr << " | " << to_string(r.notion) << " | "
        << detail::fmt(r.outcome_distance) << " | " << detail::fmt(r.upper_bound) << " | "
        << detail::fmt(r.m_hat) << " | " << detail::fmt(r.epsilon) << " | "
        << detail::fmt(r.auditor_delta) << " | " << (r.satisfied_signed ? "yes" : "no") << " | "
        << (r.satisfied_abs ? "yes" : "no") << " |\n";
  }
  out << "\nconfig_hash=" << meta.config_hash << " seed=" << meta.seed << "\n";
}

// ---------------------------------------------------------------------------
// individual-fairness scan (long-form grid)

inline void write_ifscan_csv(std::ostream& out, const IFScanResult& res, const ReportMeta& meta) {
  out << detail::meta_comment(meta);
  out << "kappa,delta,violations,satisfied\n";
  for (std::size_t ki = 0; ki < res.kappa_grid.size(); ++ki) {
    for (std::size_t di = 0; di < res.delta_grid.size(); ++di) {
      const auto& c = res.cell(ki, di);
      out << detail::fmt(c.kappa) << ',' << detail::fmt(c.delta) << ',' << c.violations << ','
          << (c.satisfied ? "true" : "false") << '\n';
    }
  }
}

inline nlohmann::json ifscan_json(const IFScanResult& res, const ReportMeta& meta) {
  nlohmann::json j;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  j["max_input_distance"] = res.max_input_distance;
  j["rows_scanned"] = res.rows_scanned;
  j["subsampled"] = res.subsampled;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : res.cells) {
    nlohmann::json cell = {{"kappa", c.kappa},
                           {"delta", c.delta},
                           {"violations", c.violations},
                           {"satisfied", c.satisfied}};
    if (c.witness) cell["witness"] = {c.witness->first, c.witness->second};
    j["cells"].push_back(cell);
  }
  return j;
}

// ---------------------------------------------------------------------------
// epsilon-threshold report

struct ThresholdReport {
  double delta = 0, delta_prime = 0;
  double individual_threshold = 0;
  bool has_group = false;
  double lipschitz = 0, group_threshold = 0;
  bool has_observed = false;
  double observed_epsilon = 0;
  bool accept_individual = false, accept_group = false;
};

inline void write_threshold_report(std::ostream& out, const ThresholdReport& r,
                                   const ReportMeta& meta) {
  out << detail::meta_comment(meta);
  out << "individual_threshold=" << detail::fmt(r.individual_threshold) << " (delta="
      << detail::fmt(r.delta) << ", delta_prime=" << detail::fmt(r.delta_prime) << ")\n";
  if (r.has_group)
    out << "group_threshold=" << detail::fmt(r.group_threshold) << " (M=" << detail::fmt(r.lipschitz)
        << ")\n";
  if (r.has_observed) {
    out << "observed_epsilon=" << detail::fmt(r.observed_epsilon) << "\n";
    out << "individual: " << (r.accept_individual ? "accept" : "reject") << "\n";
    if (r.has_group) out << "group: " << (r.accept_group ? "accept" : "reject") << "\n";
  }
}

inline nlohmann::json threshold_json(const ThresholdReport& r, const ReportMeta& meta) {
  nlohmann::json j;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  j["delta"] = r.delta;
  j["delta_prime"] = r.delta_prime;
  j["individual_threshold"] = r.individual_threshold;
  if (r.has_group) {
    j["lipschitz"] = r.lipschitz;
    j["group_threshold"] = r.group_threshold;
  }
  if (r.has_observed) {
    j["observed_epsilon"] = r.observed_epsilon;
    j["accept_individual"] = r.accept_individual;
    if (r.has_group) j["accept_group"] = r.accept_group;
  }
  return j;
}

// ---------------------------------------------------------------------------
// verification campaign

inline nlohmann::json campaign_json(const synth::CampaignReport& rep, const ReportMeta& meta) {
  nlohmann::json j;
  j["config_hash"] = meta.config_hash;
  j["seed"] = rep.base_seed;
  j["instances"] = rep.instances;
  j["total_violations"] = rep.total_violations();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"skipped", c.skipped},
                           {"violated", c.violated},
                           {"violation_seeds", c.violation_seeds}});
  }
  return j;
}

}  // namespace ncfair
