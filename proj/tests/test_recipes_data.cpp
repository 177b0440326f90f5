// Regression tests against the bundled public datasets. Expected values
// were computed with an independent pipeline (plain dataframe counting and
// numpy linear algebra) and frozen here; the library must reproduce them
// from the raw files.

#include <catch_amalgamated.hpp>
#include <cstdlib>
#include <string>

#include "ncfair/ncfair.hpp"

using namespace ncfair;

namespace {

std::string data_dir() {
  const char* d = std::getenv("NCFAIR_DATA_DIR");
  return d ? d : "data";
}
std::string rules_dir() {
  const char* d = std::getenv("NCFAIR_RULES_DIR");
  return d ? d : "rules";
}
std::string compas_path() { return data_dir() + "/compas-scores-two-years.csv"; }
std::string adult_path() { return data_dir() + "/adult.data"; }
std::string german_path() { return data_dir() + "/german.data"; }

const Dataset& compas_binary() {
  static Dataset ds = recipe_compas(compas_path(), CompasMode::binary);
  return ds;
}
const Dataset& compas_decile() {
  static Dataset ds = recipe_compas(compas_path(), CompasMode::decile);
  return ds;
}
const Dataset& adult() {
  static Dataset ds = recipe_adult(adult_path());
  return ds;
}
const Dataset& german() {
  static Dataset ds = recipe_german(german_path());
  return ds;
}

constexpr double kTol = 1e-12;

}  // namespace

TEST_CASE("compas row counts: 7214 raw, 5278 prepared", "[data][compas]") {
  CHECK(compas_raw_row_count(compas_path()) == 7214);
  CHECK(compas_binary().row_count() == 5278);
  CHECK(compas_decile().row_count() == 5278);
}

TEST_CASE("compas prepared shape and domains", "[data][compas]") {
  const Dataset& ds = compas_binary();
  for (const auto& v : ds.column("race").cat)
    CHECK((v == "African-American" || v == "Caucasian"));
  for (double y : ds.outcome_values()) CHECK((y == 0 || y == 1));
  const Dataset& dec = compas_decile();
  for (double y : dec.outcome_values()) {
    CHECK(y >= 1);
    CHECK(y <= 10);
  }
  CHECK(ds.feature_columns() ==
        std::vector<std::string>{"sex_num", "race_num", "age", "priors_count"});
}

TEST_CASE("compas one-hot charge degree keeps unit row sums", "[data][compas]") {
  Dataset enc = one_hot(compas_binary(), {"charge_degree"});
  const auto& f = enc.numeric("charge_degree=F");
  const auto& m = enc.numeric("charge_degree=M");
  REQUIRE(f.size() == 5278);
  for (size_t i = 0; i < f.size(); ++i) REQUIRE(f[i] + m[i] == 1.0);
}

TEST_CASE("recipes are deterministic: byte-identical reruns", "[data]") {
  CHECK(recipe_compas(compas_path()).to_csv_string() ==
        recipe_compas(compas_path()).to_csv_string());
  CHECK(recipe_german(german_path()).to_csv_string() ==
        recipe_german(german_path()).to_csv_string());
  CHECK(recipe_adult(adult_path()).to_csv_string() ==
        recipe_adult(adult_path()).to_csv_string());
}

TEST_CASE("adult row count and prepared domains", "[data][adult]") {
  const Dataset& ds = adult();
  CHECK(ds.row_count() == 32561);
  for (double v : ds.numeric("race")) CHECK((v == 0 || v == 1));
  const auto& edu = ds.column("education").cat;
  auto has = [&](const char* v) {
    return std::find(edu.begin(), edu.end(), v) != edu.end();
  };
  CHECK(has("Bachelors"));
  CHECK(has("Masters"));
  CHECK(has("Doctorate"));
  CHECK(has("Prof-school"));
}

TEST_CASE("german row count, derived sex and age categories", "[data][german]") {
  const Dataset& ds = german();
  CHECK(ds.row_count() == 1000);
  for (double y : ds.outcome_values()) CHECK((y == 1 || y == 2));

  const auto& age = ds.numeric("age");
  const auto& cat = ds.column("age_cat").cat;
  size_t young = 0, female = 0;
  bool saw25 = false, saw26 = false;
  for (size_t i = 0; i < ds.row_count(); ++i) {
    if (age[i] == 25) {
      CHECK(cat[i] == "young");
      saw25 = true;
    }
    if (age[i] == 26) {
      CHECK(cat[i] == "old");
      saw26 = true;
    }
    if (cat[i] == "young") ++young;
    if (ds.column("sex").cat[i] == "Female") ++female;
  }
  CHECK(saw25);
  CHECK(saw26);
  CHECK(young == 190);
  CHECK(female == 310);
}

TEST_CASE("auditor relations select the frozen numbers of rows", "[data][rules]") {
  RuleSet fc = load_ruleset(rules_dir() + "/f_compas_binary.rules");
  auto out = apply_ruleset(fc, compas_binary());
  size_t pos = 0;
  for (double v : out) pos += v == 1 ? 1 : 0;
  CHECK(pos == 1714);

  RuleSet fa = load_ruleset(rules_dir() + "/f_adult.rules");
  auto aout = apply_ruleset(fa, adult());
  size_t apos = 0;
  for (double v : aout) apos += v == 1 ? 1 : 0;
  CHECK(apos == 8067);

  RuleSet fg = load_ruleset(rules_dir() + "/f_credit.rules");
  auto gout = apply_ruleset(fg, german());
  size_t gpos = 0;
  for (double v : gout) gpos += v == 1 ? 1 : 0;
  CHECK(gpos == 48);
}

TEST_CASE("decile relation covers all ten labels with the frozen histogram", "[data][rules]") {
  RuleSet fd = load_ruleset(rules_dir() + "/f_compas_decile.rules");
  auto out = apply_ruleset(fd, compas_decile());
  std::vector<long> hist(10, 0);
  for (double v : out) {
    REQUIRE(v >= 1);
    REQUIRE(v <= 10);
    ++hist[static_cast<size_t>(v) - 1];
  }
  CHECK(hist == std::vector<long>{751, 1579, 1290, 46, 102, 714, 127, 474, 46, 149});
}

TEST_CASE("auditor metric table matches the independent pipeline", "[data][metrics]") {
  struct Cell {
    const Dataset* ds;
    const char* rules;
    size_t attr;
    Notion notion;
    double expected;
  };
  const Dataset& c = compas_binary();
  const Dataset& a = adult();
  const Dataset& g = german();
  const std::string rc = rules_dir() + "/f_compas_binary.rules";
  const std::string ra = rules_dir() + "/f_adult.rules";
  const std::string rg = rules_dir() + "/f_credit.rules";
  const Cell cells[] = {
      {&c, "compas", 0, Notion::statistical_parity, -0.052809799899832255},
      {&c, "compas", 0, Notion::equal_opportunity, -0.06697526430399114},
      {&c, "compas", 0, Notion::calibration, -0.14992726437485637},
      {&c, "compas", 1, Notion::statistical_parity, -0.024454903194162103},
      {&c, "compas", 1, Notion::equal_opportunity, -0.03721137197759761},
      {&c, "compas", 1, Notion::calibration, -0.14611363542221478},
      {&a, "adult", 0, Notion::statistical_parity, -0.046548103155818976},
      {&a, "adult", 0, Notion::equal_opportunity, 0.02219097897790534},
      {&a, "adult", 0, Notion::calibration, -0.31387415303187716},
      {&a, "adult", 1, Notion::statistical_parity, -0.05194870825078726},
      {&a, "adult", 1, Notion::equal_opportunity, 0.006181021707420686},
      {&a, "adult", 1, Notion::calibration, -0.1207760201825947},
      {&g, "german", 0, Notion::statistical_parity, -0.008789153810191679},
      {&g, "german", 0, Notion::equal_opportunity, -0.007397880337790007},
      {&g, "german", 0, Notion::calibration, -0.03956043956043953},
      {&g, "german", 1, Notion::statistical_parity, -0.026770630279402213},
      {&g, "german", 1, Notion::equal_opportunity, -0.017257318952234202},
      {&g, "german", 1, Notion::calibration, 0.13953488372093026},
  };
  RuleSet rsc = load_ruleset(rc), rsa = load_ruleset(ra), rsg = load_ruleset(rg);
  for (const Cell& cell : cells) {
    const RuleSet& rs = cell.ds == &c ? rsc : (cell.ds == &a ? rsa : rsg);
    auto f = apply_ruleset(rs, *cell.ds);
    AuditorMetricRow row = auditor_metric_row(*cell.ds, f,
                                              cell.ds->schema().protected_attrs[cell.attr],
                                              cell.notion, 0.1, cell.rules);
    INFO(cell.rules << " attr" << cell.attr << " " << to_string(cell.notion));
    CHECK(row.value == Catch::Approx(cell.expected).margin(kTol));
  }
}

TEST_CASE("transfer-bound table matches the independent pipeline", "[data][bounds]") {
  struct Cell {
    const Dataset* ds;
    const char* rules_file;
    size_t attr;
    Notion notion;
    double outcome, mhat, bound;
  };
  const Dataset& c = compas_binary();
  const Dataset& a = adult();
  const Dataset& g = german();
  const Cell cells[] = {
      {&c, "f_compas_binary.rules", 0, Notion::statistical_parity, -0.1350366105406292,
       -0.16176124323051566, -0.3763322863608636},
      {&c, "f_compas_binary.rules", 0, Notion::equal_opportunity, -0.14992726437485637,
       -0.16597590543519614, -0.3989270751743834},
      {&c, "f_compas_binary.rules", 0, Notion::calibration, -0.06697526430399114,
       0.16597590543519614, 0.1820245464955359},
      {&c, "f_compas_binary.rules", 1, Notion::statistical_parity, -0.13227942084985456,
       -0.1886614173228346, -0.4017777378398313},
      {&c, "f_compas_binary.rules", 1, Notion::equal_opportunity, -0.14611363542221478,
       -0.19304569248303105, -0.4233027569436597},
      {&c, "f_compas_binary.rules", 1, Notion::calibration, -0.03721137197759761,
       0.19304569248303105, 0.23997774954384732},
      {&a, "f_adult.rules", 0, Notion::statistical_parity, -0.19627598779361352,
       -0.1071395413610621, -0.2608271858779432},
      {&a, "f_adult.rules", 0, Notion::equal_opportunity, -0.31387415303187716,
       -0.25592169292087164, -0.48965240686383793},
      {&a, "f_adult.rules", 0, Notion::calibration, 0.02219097897790534, 0.25592169292087164,
       0.1979692328098661},
      {&a, "f_adult.rules", 1, Notion::statistical_parity, -0.10327827181663154,
       -0.05079030558482611, -0.1535293194204395},
      {&a, "f_adult.rules", 1, Notion::equal_opportunity, -0.1207760201825947,
       -0.12590530443992787, -0.24562958717243505},
      {&a, "f_adult.rules", 1, Notion::calibration, 0.006181021707420686, 0.12590530443992787,
       0.13103458869726103},
      {&g, "f_credit.rules", 0, Notion::statistical_parity, -0.07480130902290782,
       0.6064516129032258, 1.20411407199626},
      {&g, "f_credit.rules", 0, Notion::equal_opportunity, -0.03956043956043953,
       0.7914274779946422, 1.5754570756514943},
      {&g, "f_credit.rules", 0, Notion::calibration, -0.007397880337790007, -0.7914274779946422,
       -1.6224153955497238},
      {&g, "f_credit.rules", 1, Notion::statistical_parity, -0.14944769330734242,
       0.5526315789473685, 1.0784925276153348},
      {&g, "f_credit.rules", 1, Notion::equal_opportunity, 0.13953488372093026,
       0.9545454545454546, 1.891833590138675},
      {&g, "f_credit.rules", 1, Notion::calibration, -0.017257318952234202, -0.9545454545454546,
       -1.769556025369979},
  };
  for (const Cell& cell : cells) {
    RuleSet rs = load_ruleset(rules_dir() + "/" + cell.rules_file);
    TransferBoundReport r =
        transfer_bound_row(*cell.ds, cell.ds->outcome_values(), rs,
                           cell.ds->schema().protected_attrs[cell.attr], cell.notion, 1.0);
    INFO(cell.rules_file << " attr" << cell.attr << " " << to_string(cell.notion));
    CHECK(r.outcome_distance == Catch::Approx(cell.outcome).margin(kTol));
    CHECK(r.m_hat == Catch::Approx(cell.mhat).margin(kTol));
    CHECK(r.upper_bound == Catch::Approx(cell.bound).margin(kTol));
    // report arithmetic identity, exact
    CHECK(r.upper_bound - (2 * r.m_hat * r.epsilon + r.auditor_delta) == 0.0);
  }
}

TEST_CASE("compas max pairwise mahalanobis distance", "[data][similarity]") {
  const Dataset& ds = compas_decile();
  RuleSet fd = load_ruleset(rules_dir() + "/f_compas_decile.rules");
  auto out = apply_ruleset(fd, ds);
  IFScanResult res = pairwise_if_scan(ds, out, {9.2}, {8.9});
  CHECK(res.max_input_distance == Catch::Approx(9.201390503819226).margin(1e-6));
  CHECK(res.cell(0, 0).violations >= 1);
}

TEST_CASE("compas scan grid matches the frozen violation counts", "[data][similarity]") {
  const Dataset& ds = compas_decile();
  RuleSet fd = load_ruleset(rules_dir() + "/f_compas_decile.rules");
  auto out = apply_ruleset(fd, ds);
  const std::vector<double> kgrid{4, 5, 6, 7, 8, 9, 9.2};
  const std::vector<double> dgrid{1, 2, 3, 4, 5, 6, 7, 8, 8.9};
  IFScanResult res = pairwise_if_scan(ds, out, kgrid, dgrid);
  const long long expected[7][9] = {
      {6650911, 5092749, 3926131, 2521599, 1260229, 483120, 90613, 20136, 20136},
      {7383578, 5757023, 4538753, 3054245, 1697082, 802953, 254424, 69549, 69549},
      {7572072, 5939318, 4717120, 3221059, 1856379, 946946, 342184, 97396, 97396},
      {7614198, 5980492, 4757882, 3257950, 1892660, 982749, 368221, 107308, 107308},
      {7632038, 5998332, 4775711, 3274991, 1909474, 999458, 379146, 110865, 110865},
      {7635112, 6001406, 4778785, 3278065, 1912544, 1002527, 381709, 111896, 111896},
      {7635118, 6001412, 4778791, 3278071, 1912550, 1002533, 381715, 111898, 111898},
  };
  for (size_t ki = 0; ki < kgrid.size(); ++ki)
    for (size_t di = 0; di < dgrid.size(); ++di) {
      INFO("kappa=" << kgrid[ki] << " delta=" << dgrid[di]);
      CHECK(res.cell(ki, di).violations == expected[ki][di]);
    }
}
