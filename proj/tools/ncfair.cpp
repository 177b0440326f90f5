// Fairness auditing CLI: evaluates rule-based auditor relations and
// recorded system outcomes under group and individual fairness notions,
// computes noncomparative transfer bounds, and runs the brute-force
// verification campaign.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ncfair/ncfair.hpp"

namespace {

using namespace ncfair;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitConfig = 2;

Dataset load_dataset(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw ConfigError("missing --data <path>");
  if (!std::filesystem::exists(cfg.data_path))
    throw ConfigError("data file does not exist: " + cfg.data_path);
  if (cfg.dataset == "compas")
    return recipe_compas(cfg.data_path,
                         cfg.mode == "decile" ? CompasMode::decile : CompasMode::binary);
  if (cfg.dataset == "adult") return recipe_adult(cfg.data_path);
  if (cfg.dataset == "german") return recipe_german(cfg.data_path);
  if (cfg.dataset == "custom") {
    if (cfg.schema_path.empty()) throw ConfigError("custom dataset needs --schema <path>");
    Dataset ds = load_csv(cfg.data_path, load_schema_config(cfg.schema_path));
    ds.validate_prepared();
    return ds;
  }
  throw ConfigError("unknown dataset: " + cfg.dataset);
}

RuleSet load_rules(const RunConfig& cfg) {
  if (cfg.rules_path.empty()) throw ConfigError("missing --rules <path>");
  if (!std::filesystem::exists(cfg.rules_path))
    throw ConfigError("rule file does not exist: " + cfg.rules_path);
  return load_ruleset(cfg.rules_path);
}

std::vector<Notion> selected_notions(const RunConfig& cfg) {
  if (cfg.notion == "all")
    return {Notion::statistical_parity, Notion::equal_opportunity, Notion::calibration};
  return {notion_from_string(cfg.notion)};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << content;
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
  for (const auto& f : cfg.formats)
    if (f == fmt) return true;
  return false;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int cmd_audit_auditor(const RunConfig& cfg) {
  Dataset ds = load_dataset(cfg);
  RuleSet rs = load_rules(cfg);
  std::vector<double> f = apply_ruleset(rs, ds);
  std::vector<AuditorMetricRow> rows;
  for (const auto& attr : ds.schema().protected_attrs)
    for (Notion n : selected_notions(cfg))
      rows.push_back(auditor_metric_row(ds, f, attr, n, cfg.coarse_delta, cfg.dataset));

  ReportMeta meta = cfg.meta();
  if (wants(cfg, "csv")) {
    std::ostringstream os;
    write_auditor_table_csv(os, rows, meta);
    write_file(out_path(cfg, "auditor_table.csv"), os.str());
  }
  if (wants(cfg, "json"))
    write_file(out_path(cfg, "auditor_table.json"), auditor_table_json(rows, meta).dump(1) + "\n");
  if (wants(cfg, "md")) {
    std::ostringstream os;
    write_auditor_table_md(os, rows, meta);
    write_file(out_path(cfg, "auditor_table.md"), os.str());
  }
  for (const auto& r : rows)
    std::cout << cfg.dataset << " " << r.protected_attr << " " << to_string(r.notion) << " = "
              << r.value << (r.satisfied ? " (within delta)" : " (outside delta)") << "\n";
  return kExitOk;
}

int cmd_audit_system(const RunConfig& cfg) {
  Dataset ds = load_dataset(cfg);
  RuleSet rs = load_rules(cfg);
  std::vector<TransferBoundReport> rows;
  const std::vector<double> system = ds.outcome_values();
  for (const auto& attr : ds.schema().protected_attrs)
    for (Notion n : selected_notions(cfg))
      rows.push_back(transfer_bound_row(ds, system, rs, attr, n, cfg.epsilon, cfg.dataset));

  // pointwise system-vs-auditor gap underlying all the bounds
  DistanceProfile profile = distance_profile(system, apply_ruleset(rs, ds), cfg.epsilon);
  std::size_t flagged = 0;
  for (double d : profile.distances) flagged += d >= cfg.epsilon ? 1 : 0;

  ReportMeta meta = cfg.meta();
  if (wants(cfg, "csv")) {
    std::ostringstream os;
    write_transfer_table_csv(os, rows, meta);
    write_file(out_path(cfg, "transfer_table.csv"), os.str());
  }
  if (wants(cfg, "json")) {
    nlohmann::json j = transfer_table_json(rows, meta);
    j["nc_profile"] = {{"epsilon", profile.epsilon},
                       {"max_distance", profile.max_distance},
                       {"nc_fair", profile.nc_fair},
                       {"judged_unfair_rows", flagged}};
    write_file(out_path(cfg, "transfer_table.json"), j.dump(1) + "\n");
  }
  if (wants(cfg, "md")) {
    std::ostringstream os;
    write_transfer_table_md(os, rows, meta);
    write_file(out_path(cfg, "transfer_table.md"), os.str());
  }
  for (const auto& r : rows)
    std::cout << cfg.dataset << " " << r.protected_attr << " " << to_string(r.notion)
              << ": outcome=" << r.outcome_distance << " bound=" << r.upper_bound
              << (r.satisfied_signed ? " satisfied" : " not satisfied") << " (signed)\n";
  std::cout << "noncomparative gap: max d(system, auditor) = " << profile.max_distance
            << " with epsilon " << profile.epsilon << " -> "
            << (profile.nc_fair ? "fair" : "not fair") << " (" << flagged << "/"
            << ds.row_count() << " rows judged unfair)\n";
  return kExitOk;
}

int cmd_if_scan(const RunConfig& cfg) {
  RunConfig c = cfg;
  if (c.dataset == "compas") c.mode = "decile";
  if (c.kappa_grid.empty() || c.delta_grid.empty())
    throw ConfigError("if-scan needs nonempty --kappa-grid and --delta-grid");
  Dataset ds = load_dataset(c);
  RuleSet rs = load_rules(c);
  std::vector<double> f = apply_ruleset(rs, ds);
  IFScanOptions opt;
  opt.pair_cap = c.pair_cap;
  opt.seed = c.seed;
  IFScanResult res = pairwise_if_scan(ds, f, c.kappa_grid, c.delta_grid, opt);

  ReportMeta meta = c.meta();
  if (wants(c, "csv") || wants(c, "md")) {
    std::ostringstream os;
    write_ifscan_csv(os, res, meta);
    write_file(out_path(c, "ifscan.csv"), os.str());
  }
  if (wants(c, "json"))
    write_file(out_path(c, "ifscan.json"), ifscan_json(res, meta).dump(1) + "\n");
  std::size_t satisfied = 0;
  for (const auto& cell : res.cells) satisfied += cell.satisfied ? 1 : 0;
  std::cout << "max input distance D = " << res.max_input_distance << " over "
            << res.rows_scanned << " rows" << (res.subsampled ? " (subsampled)" : "") << "\n";
  std::cout << "cells satisfied: " << satisfied << "/" << res.cells.size() << "\n";
  return kExitOk;
}

int cmd_thresholds(const RunConfig& cfg) {
  ThresholdReport r;
  r.delta = cfg.delta;
  r.delta_prime = cfg.delta_prime;
  r.individual_threshold = epsilon_threshold_individual(cfg.delta, cfg.delta_prime);
  if (cfg.has_lipschitz) {
    r.has_group = true;
    r.lipschitz = cfg.lipschitz;
    r.group_threshold = epsilon_threshold_group(cfg.delta, cfg.delta_prime, cfg.lipschitz);
  }
  if (cfg.has_observed_epsilon) {
    r.has_observed = true;
    r.observed_epsilon = cfg.observed_epsilon;
    r.accept_individual = cfg.observed_epsilon < r.individual_threshold;
    if (r.has_group) r.accept_group = cfg.observed_epsilon < r.group_threshold;
  }
  ReportMeta meta = cfg.meta();
  std::ostringstream os;
  write_threshold_report(os, r, meta);
  if (wants(cfg, "csv") || wants(cfg, "md")) write_file(out_path(cfg, "thresholds.txt"), os.str());
  if (wants(cfg, "json"))
    write_file(out_path(cfg, "thresholds.json"), threshold_json(r, meta).dump(1) + "\n");
  std::cout << os.str();
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg) {
  synth::CampaignReport rep = synth::run_campaign(cfg.seed, cfg.instances);
  ReportMeta meta = cfg.meta();
  write_file(out_path(cfg, "campaign.json"), campaign_json(rep, meta).dump(1) + "\n");
  for (const auto& c : rep.checks)
    std::cout << c.name << ": passed=" << c.passed << " skipped=" << c.skipped
              << " violated=" << c.violated << "\n";
  std::cout << "total violations: " << rep.total_violations() << "\n";
  return rep.total_violations() == 0 ? kExitOk : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness auditing toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value config file; flags override");

  RunConfig cfg;
  std::string kappa_list, delta_list, formats_list;

  // options live on the app itself so flat `key = value` config files map
  // directly; subcommands fall through to them
  app.add_option("--dataset", cfg.dataset, "compas|adult|german|custom");
  app.add_option("--data", cfg.data_path, "path to the raw dataset file");
  app.add_option("--schema", cfg.schema_path, "schema config for custom datasets");
  app.add_option("--rules", cfg.rules_path, "rule file for the auditor relation");
  app.add_option("--epsilon", cfg.epsilon, "noncomparative gap bound");
  app.add_option("--mode", cfg.mode, "compas output: binary|decile");
  app.add_option("--notion", cfg.notion, "sp|eo|cal|all");
  app.add_option("--coarse-delta", cfg.coarse_delta, "coarse-notion threshold");
  app.add_option("--format", formats_list, "csv|json|md (comma list)");
  app.add_option("--out", cfg.out_dir, "output directory");
  app.add_option("--seed", cfg.seed, "seed for subsampling / campaigns");
  app.add_option("--kappa-grid", kappa_list, "comma list of kappa values");
  app.add_option("--delta-grid", delta_list, "comma list of delta values");
  app.add_option("--pair-cap", cfg.pair_cap, "row cap for the pair scan");
  app.add_option("--delta", cfg.delta, "reference fairness level");
  app.add_option("--delta-prime", cfg.delta_prime, "target fairness level");
  auto* opt_m = app.add_option("--lipschitz", cfg.lipschitz, "Lipschitz constant M");
  auto* opt_obs = app.add_option("--observed-epsilon", cfg.observed_epsilon, "observed auditor gap");
  app.add_option("--instances", cfg.instances, "campaign instance count");

  CLI::App* a1 = app.add_subcommand("audit-auditor", "group metrics of a rule relation");
  CLI::App* a2 = app.add_subcommand("audit-system", "transfer bounds of recorded outcomes");
  CLI::App* a3 = app.add_subcommand("if-scan", "pairwise individual-fairness grid scan");
  CLI::App* a4 = app.add_subcommand("thresholds", "epsilon acceptance thresholds for auditor gaps");
  CLI::App* a5 = app.add_subcommand("synth", "brute-force verification campaign");
  for (CLI::App* sub : {a1, a2, a3, a4, a5}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (!formats_list.empty()) {
      cfg.formats.clear();
      std::istringstream ss(formats_list);
      std::string f;
      while (std::getline(ss, f, ',')) {
        if (f != "csv" && f != "json" && f != "md") throw ConfigError("unknown format: " + f);
        cfg.formats.push_back(f);
      }
    }
    if (!kappa_list.empty()) cfg.kappa_grid = parse_grid(kappa_list);
    if (!delta_list.empty()) cfg.delta_grid = parse_grid(delta_list);
    cfg.has_lipschitz = opt_m->count() > 0;
    cfg.has_observed_epsilon = opt_obs->count() > 0;

    if (a1->parsed()) return cmd_audit_auditor(cfg);
    if (a2->parsed()) return cmd_audit_system(cfg);
    if (a3->parsed()) return cmd_if_scan(cfg);
    if (a4->parsed()) return cmd_thresholds(cfg);
    if (a5->parsed()) return cmd_synth(cfg);
    std::cerr << "error: config: no subcommand\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: computation: " << e.what() << "\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitComputation;
  }
}
