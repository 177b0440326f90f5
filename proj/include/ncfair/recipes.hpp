#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncfair/dataset.hpp"
#include "ncfair/error.hpp"

namespace ncfair {

enum class CompasMode { binary, decile };

/// ProPublica two-year recidivism file -> prepared dataset.
///
/// Filter (the published replication filter): screening-to-arrest gap
/// within [-30, 30] days (missing dropped), is_recid != -1, charge degree
/// != "O", score_text != "N/A"; rows then restricted to African-American
/// and Caucasian defendants. Age is binned <25 / 25-45 / >45 and priors
/// into 0 / 1-3 / 4-7 / 8-15 / 16-24 / >24; the raw numeric age and priors
/// are kept alongside (rules and the similarity view use them).
///
/// Input-similarity view: sex_num (Male=1), race_num (Caucasian=1), age,
/// priors_count.
///
/// Privileged groups: sex=Female, race=Caucasian. Binary mode outcome is
/// two_year_recid with favorable 0 (did not reoffend); decile mode outcome
/// is decile_score in 1..10 with favorable 1.
inline Dataset recipe_compas(const std::string& raw_path, CompasMode mode = CompasMode::binary) {
  Schema s;
  s.columns = {
      {"sex", ColumnKind::categorical},
      {"race", ColumnKind::categorical},
      {"age", ColumnKind::numeric},
      {"priors_count", ColumnKind::numeric},
      {"c_charge_degree", ColumnKind::categorical},
      {"days_b_screening_arrest", ColumnKind::numeric},
      {"is_recid", ColumnKind::numeric},
      {"score_text", ColumnKind::categorical},
      {"decile_score", ColumnKind::numeric},
      {"two_year_recid", ColumnKind::numeric},
  };
  Dataset raw = load_csv(raw_path, s);

  const auto& days = raw.numeric("days_b_screening_arrest");
  const auto& isr = raw.numeric("is_recid");
  const auto& deg = raw.column("c_charge_degree").cat;
  const auto& txt = raw.column("score_text").cat;
  const auto& race = raw.column("race").cat;
  std::vector<char> keep(raw.row_count(), 0);
  for (size_t i = 0; i < raw.row_count(); ++i) {
    bool ok = !std::isnan(days[i]) && days[i] >= -30 && days[i] <= 30;
    ok = ok && isr[i] != -1;
    ok = ok && deg[i] != "O";
    ok = ok && txt[i] != "N/A";
    ok = ok && (race[i] == "African-American" || race[i] == "Caucasian");
    keep[i] = ok;
  }
  Dataset ds = raw.filter_rows(keep);
  ds.drop_column("days_b_screening_arrest");
  ds.drop_column("is_recid");
  ds.drop_column("score_text");
  ds.rename_column("c_charge_degree", "charge_degree");

  // derived categorical views; ages are integral so [25, 46) is 25-45
  {
    Column age_cat = ds.column("age");
    age_cat.name = "age_cat";
    ds.add_column(age_cat);
    ds = bin_numeric(ds, {"age_cat", {25, 46}, {"<25", "25-45", ">45"}});
    Column pc = ds.column("priors_count");
    pc.name = "priors_cat";
    ds.add_column(pc);
    ds = bin_numeric(ds, {"priors_cat", {1, 4, 8, 16, 25}, {"0", "1-3", "4-7", "8-15", "16-24", ">24"}});
  }

  {
    Column sexn;
    sexn.name = "sex_num";
    sexn.kind = ColumnKind::binary;
    for (const auto& v : ds.column("sex").cat) sexn.num.push_back(v == "Male" ? 1.0 : 0.0);
    ds.add_column(std::move(sexn));
    Column racen;
    racen.name = "race_num";
    racen.kind = ColumnKind::binary;
    for (const auto& v : ds.column("race").cat) racen.num.push_back(v == "Caucasian" ? 1.0 : 0.0);
    ds.add_column(std::move(racen));
  }

  if (mode == CompasMode::binary) {
    ds.drop_column("decile_score");
    ds.schema().outcome = OutcomeSpec{"two_year_recid", "0"};
  } else {
    ds.drop_column("two_year_recid");
    ds.schema().outcome = OutcomeSpec{"decile_score", "1"};
  }
  ds.schema().protected_attrs = {{"sex", "Female"}, {"race", "Caucasian"}};
  ds.set_feature_columns({"sex_num", "race_num", "age", "priors_count"});
  ds.validate_prepared();
  return ds;
}

/// Raw ProPublica file row count before any filtering (the loaded file).
inline size_t compas_raw_row_count(const std::string& raw_path) {
  Schema s;
  s.columns = {{"sex", ColumnKind::categorical}};
  return load_csv(raw_path, s).row_count();
}

/// UCI Adult (census income) train split, headerless. Features restricted
/// to age, sex, race, education; age additionally binned into decades;
/// race binarized with White = 1; income becomes the 0/1 outcome with
/// >50K favorable. Privileged groups: sex=Male, race=1.
inline Dataset recipe_adult(const std::string& raw_path) {
  Schema s;
  s.has_header = false;
  s.columns = {
      {"age", ColumnKind::numeric},        {"workclass", ColumnKind::categorical},
      {"fnlwgt", ColumnKind::numeric},     {"education", ColumnKind::categorical},
      {"education_num", ColumnKind::numeric}, {"marital_status", ColumnKind::categorical},
      {"occupation", ColumnKind::categorical}, {"relationship", ColumnKind::categorical},
      {"race", ColumnKind::categorical},   {"sex", ColumnKind::categorical},
      {"capital_gain", ColumnKind::numeric}, {"capital_loss", ColumnKind::numeric},
      {"hours_per_week", ColumnKind::numeric}, {"native_country", ColumnKind::categorical},
      {"income", ColumnKind::categorical},
  };
  Dataset raw = load_csv(raw_path, s);
  for (const auto& name : {"workclass", "fnlwgt", "education_num", "marital_status", "occupation",
                           "relationship", "capital_gain", "capital_loss", "hours_per_week",
                           "native_country"})
    raw.drop_column(name);

  Dataset ds = raw;
  {
    Column age_cat = ds.column("age");
    age_cat.name = "age_cat";
    ds.add_column(age_cat);
    ds = bin_numeric(ds, {"age_cat",
                          {11, 21, 31, 41, 51, 61, 71, 81, 91},
                          {"0-10", "11-20", "21-30", "31-40", "41-50", "51-60", "61-70", "71-80",
                           "81-90", "91-100"}});
  }
  {
    Column racen;
    racen.name = "race_bin";
    racen.kind = ColumnKind::binary;
    for (const auto& v : ds.column("race").cat) racen.num.push_back(v == "White" ? 1.0 : 0.0);
    ds.add_column(std::move(racen));
    ds.drop_column("race");
    ds.rename_column("race_bin", "race");

    Column sexn;
    sexn.name = "sex_num";
    sexn.kind = ColumnKind::binary;
    for (const auto& v : ds.column("sex").cat) sexn.num.push_back(v == "Male" ? 1.0 : 0.0);
    ds.add_column(std::move(sexn));

    Column inc;
    inc.name = "income";
    inc.kind = ColumnKind::binary;
    for (const auto& v : ds.column("income").cat) inc.num.push_back(v == ">50K" ? 1.0 : 0.0);
    ds.drop_column("income");
    ds.add_column(std::move(inc));
  }
  ds.schema().outcome = OutcomeSpec{"income", "1"};
  ds.schema().protected_attrs = {{"sex", "Male"}, {"race", "1"}};
  ds.set_feature_columns({"sex_num", "race", "age"});
  ds.validate_prepared();
  return ds;
}

/// UCI German credit (statlog), space separated, headerless. Keeps credit
/// history, savings, employment, personal status and age; the coded
/// savings/employment attributes are mapped to representative numeric
/// values (category midpoints, open intervals at their boundary) so that
/// threshold rules have something to compare against:
///
///   savings:    A61 -> 50, A62 -> 300, A63 -> 750, A64 -> 1500, A65 -> 0
///   employment: A71 -> 0, A72 -> 0.5, A73 -> 2.5, A74 -> 5.5, A75 -> 8
///   history:    A30 -> NoCredits, A31 -> AllPaid, A32 -> Paid,
///               A33 -> Delayed, A34 -> Critical
///
/// sex derives from personal status (A92/A95 female); age is categorized
/// young (<26) / old (>=26). Privileged: sex=Male, age_cat=old. Outcome is
/// the 1/2 risk label, favorable 1 (good credit).
inline Dataset recipe_german(const std::string& raw_path) {
  Schema s;
  s.has_header = false;
  s.delimiter = ' ';
  s.columns = {
      {"status", ColumnKind::categorical},       {"duration", ColumnKind::numeric},
      {"credit_history", ColumnKind::categorical}, {"purpose", ColumnKind::categorical},
      {"credit_amount", ColumnKind::numeric},    {"savings_code", ColumnKind::categorical},
      {"employment_code", ColumnKind::categorical}, {"installment_rate", ColumnKind::numeric},
      {"personal_status", ColumnKind::categorical}, {"other_debtors", ColumnKind::categorical},
      {"residence_since", ColumnKind::numeric},  {"property", ColumnKind::categorical},
      {"age", ColumnKind::numeric},              {"other_installment", ColumnKind::categorical},
      {"housing", ColumnKind::categorical},      {"existing_credits", ColumnKind::numeric},
      {"job", ColumnKind::categorical},          {"num_maintenance", ColumnKind::numeric},
      {"telephone", ColumnKind::categorical},    {"foreign", ColumnKind::categorical},
      {"outcome", ColumnKind::numeric},
  };
  Dataset raw = load_csv(raw_path, s);
  for (const auto& name : {"status", "duration", "purpose", "credit_amount", "installment_rate",
                           "other_debtors", "residence_since", "property", "other_installment",
                           "housing", "existing_credits", "job", "num_maintenance", "telephone",
                           "foreign"})
    raw.drop_column(name);

  Dataset ds = raw;
  auto map_codes = [&](const std::string& col, const std::string& out_name, ColumnKind kind,
                       const std::unordered_map<std::string, std::string>& cat_map,
                       const std::unordered_map<std::string, double>& num_map) {
    const auto& src = ds.column(col).cat;
    Column c;
    c.name = out_name;
    c.kind = kind;
    for (size_t i = 0; i < src.size(); ++i) {
      if (kind == ColumnKind::categorical) {
        auto it = cat_map.find(src[i]);
        if (it == cat_map.end())
          throw ParseError("german recipe: unknown code '" + src[i] + "' in " + col + " at row " +
                           std::to_string(i));
        c.cat.push_back(it->second);
      } else {
        auto it = num_map.find(src[i]);
        if (it == num_map.end())
          throw ParseError("german recipe: unknown code '" + src[i] + "' in " + col + " at row " +
                           std::to_string(i));
        c.num.push_back(it->second);
      }
    }
    ds.add_column(std::move(c));
    ds.drop_column(col);
  };

  map_codes("savings_code", "savings", ColumnKind::numeric, {},
            {{"A61", 50}, {"A62", 300}, {"A63", 750}, {"A64", 1500}, {"A65", 0}});
  map_codes("employment_code", "employment", ColumnKind::numeric, {},
            {{"A71", 0}, {"A72", 0.5}, {"A73", 2.5}, {"A74", 5.5}, {"A75", 8}});
  {
    const auto& src = ds.column("credit_history").cat;
    Column c;
    c.name = "credit_history_named";
    c.kind = ColumnKind::categorical;
    const std::unordered_map<std::string, std::string> names = {{"A30", "NoCredits"},
                                                                {"A31", "AllPaid"},
                                                                {"A32", "Paid"},
                                                                {"A33", "Delayed"},
                                                                {"A34", "Critical"}};
    for (size_t i = 0; i < src.size(); ++i) {
      auto it = names.find(src[i]);
      if (it == names.end())
        throw ParseError("german recipe: unknown credit history code '" + src[i] + "' at row " +
                         std::to_string(i));
      c.cat.push_back(it->second);
    }
    ds.drop_column("credit_history");
    ds.add_column(std::move(c));
    ds.rename_column("credit_history_named", "credit_history");
  }
  {
    Column sex;
    sex.name = "sex";
    sex.kind = ColumnKind::categorical;
    for (const auto& v : ds.column("personal_status").cat)
      sex.cat.push_back(v == "A92" || v == "A95" ? "Female" : "Male");
    ds.add_column(std::move(sex));

    Column age_cat = ds.column("age");
    age_cat.name = "age_cat";
    ds.add_column(age_cat);
    ds = bin_numeric(ds, {"age_cat", {26}, {"young", "old"}});
  }
  ds.schema().outcome = OutcomeSpec{"outcome", "1"};
  ds.schema().protected_attrs = {{"sex", "Male"}, {"age_cat", "old"}};
  ds.set_feature_columns({"savings", "employment", "age"});
  ds.validate_prepared();
  return ds;
}

}  // namespace ncfair
