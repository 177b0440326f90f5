#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ncfair/error.hpp"
#include "ncfair/report.hpp"

namespace ncfair {

/// Effective settings of one CLI run. Flags and the optional key=value
/// config file both land here; the canonical text below feeds the config
/// hash every report carries.
struct RunConfig {
  std::string dataset = "compas";  // compas | adult | german | custom
  std::string data_path;
  std::string schema_path;  // custom datasets
  std::string rules_path;
  std::string mode = "binary";  // compas: binary | decile
  double epsilon = 1.0;
  std::string notion = "all";  // sp | eo | cal | all
  double coarse_delta = 0.1;
  std::vector<double> kappa_grid;
  std::vector<double> delta_grid;
  std::size_t pair_cap = 10000;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::vector<std::string> formats = {"csv"};
  // thresholds subcommand
  double delta = 0.0, delta_prime = 0.0;
  double lipschitz = 0.0;
  bool has_lipschitz = false;
  double observed_epsilon = 0.0;
  bool has_observed_epsilon = false;
  // synth subcommand
  std::size_t instances = 1000;

  /// Canonical settings text for hashing. Presentation-only fields (output
  /// directory, format list) stay out: two runs that compute the same thing
  /// hash the same.
  std::string canonical_text() const {
    std::ostringstream os;
    auto num = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    os << "coarse-delta=" << num(coarse_delta) << "\n";
    os << "data=" << data_path << "\n";
    os << "dataset=" << dataset << "\n";
    os << "delta=" << num(delta) << "\n";
    os << "delta-grid=";
    for (std::size_t i = 0; i < delta_grid.size(); ++i) os << (i ? "," : "") << num(delta_grid[i]);
    os << "\n";
    os << "delta-prime=" << num(delta_prime) << "\n";
    os << "epsilon=" << num(epsilon) << "\n";
    os << "instances=" << instances << "\n";
    os << "kappa-grid=";
    for (std::size_t i = 0; i < kappa_grid.size(); ++i) os << (i ? "," : "") << num(kappa_grid[i]);
    os << "\n";
    if (has_lipschitz) os << "lipschitz=" << num(lipschitz) << "\n";
    os << "mode=" << mode << "\n";
    os << "notion=" << notion << "\n";
    if (has_observed_epsilon) os << "observed-epsilon=" << num(observed_epsilon) << "\n";
    os << "pair-cap=" << pair_cap << "\n";
    os << "rules=" << rules_path << "\n";
    os << "schema=" << schema_path << "\n";
    os << "seed=" << seed << "\n";
    return os.str();
  }

  ReportMeta meta() const { return ReportMeta{hash_hex(fnv1a64(canonical_text())), seed}; }
};

inline std::vector<double> parse_grid(const std::string& csv_list) {
  std::vector<double> out;
  std::string cur;
  std::istringstream ss(csv_list);
  while (std::getline(ss, cur, ',')) {
    if (cur.empty()) continue;
    auto v = detail::parse_number(cur);
    if (!v) throw ConfigError("bad grid value: " + cur);
    out.push_back(*v);
  }
  if (out.empty()) throw ConfigError("empty grid: " + csv_list);
  return out;
}

}  // namespace ncfair
