#include <catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "ncfair/similarity.hpp"

using namespace ncfair;

namespace {

Dataset numeric_dataset(std::vector<std::vector<double>> rows,
                        std::vector<double> outputs = {}) {
  size_t dim = rows.empty() ? 0 : rows[0].size();
  std::vector<Column> cols;
  Schema s;
  for (size_t c = 0; c < dim; ++c) {
    Column col;
    col.name = "x" + std::to_string(c);
    col.kind = ColumnKind::numeric;
    for (const auto& r : rows) col.num.push_back(r[c]);
    s.columns.emplace_back(col.name, ColumnKind::numeric);
    cols.push_back(std::move(col));
  }
  if (!outputs.empty()) {
    Column col;
    col.name = "out";
    col.kind = ColumnKind::numeric;
    col.num = outputs;
    s.columns.emplace_back("out", ColumnKind::numeric);
    cols.push_back(std::move(col));
  }
  Dataset ds(s, cols);
  std::vector<std::string> feats;
  for (size_t c = 0; c < dim; ++c) feats.push_back("x" + std::to_string(c));
  ds.set_feature_columns(feats);
  return ds;
}

// sample covariance of these four rows is exactly the 2x2 identity
Dataset identity_cov_dataset() {
  double a = std::sqrt(1.5);
  return numeric_dataset({{a, 0}, {-a, 0}, {0, a}, {0, -a}});
}

}  // namespace

TEST_CASE("covariance of identical rows is the zero model", "[similarity]") {
  Dataset ds = numeric_dataset({{1, 2}, {1, 2}});
  CovarianceModel m = covariance(ds);
  CHECK(m.covariance.isZero(0));
  CHECK(m.inverse.isZero(0));
  CHECK(m.rank == 0);
  CHECK(m.lambda == 0.0);
  CHECK(mahalanobis(std::vector<double>{1, 2}, std::vector<double>{1, 2}, m) == 0.0);
}

TEST_CASE("covariance needs at least two rows", "[similarity]") {
  Dataset ds = numeric_dataset({{1, 2}});
  CHECK_THROWS_AS(covariance(ds), InsufficientDataError);
}

TEST_CASE("perfectly correlated columns take the pseudo-inverse path", "[similarity]") {
  Dataset ds = numeric_dataset({{1, 2}, {2, 4}, {3, 6}, {4, 8}});
  CovarianceModel m = covariance(ds);
  CHECK(m.rank == 1);
  CHECK(m.lambda == 0.0);
  // Moore-Penrose identities
  Eigen::MatrixXd C = m.covariance, P = m.inverse;
  CHECK(((C * P * C) - C).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(((P * C * P) - P).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("borderline spectrum triggers the recorded ridge", "[similarity]") {
  // two orthogonal columns with variance ratio 1e-10: inside the ambiguous band
  double b = 1e-5;
  Dataset ds = numeric_dataset({{1, b}, {-1, b}, {1, -b}, {-1, -b}});
  CovarianceModel m = covariance(ds);
  CHECK(m.lambda == 1e-6);
}

TEST_CASE("identity covariance reduces to the euclidean distance", "[similarity]") {
  CovarianceModel m = covariance(identity_cov_dataset());
  CHECK((m.covariance - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  double d = mahalanobis(std::vector<double>{0, 0}, std::vector<double>{3, 4}, m);
  CHECK(std::abs(d - 5.0) < 1e-9);
}

TEST_CASE("mahalanobis axioms on random inputs", "[similarity][property]") {
  Dataset ds = numeric_dataset({{0.3, 1.2, 5}, {4, 2, 2}, {1, 1, 1}, {2, 0.5, 3}, {0, 2, 4}});
  CovarianceModel m = covariance(ds);
  std::uint64_t st = 5;
  auto next = [&] {
    st ^= st << 13;
    st ^= st >> 7;
    st ^= st << 17;
    return st;
  };
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a[i] = static_cast<double>(next() % 100) / 10.0;
      b[i] = static_cast<double>(next() % 100) / 10.0;
    }
    double dab = mahalanobis(a, b, m), dba = mahalanobis(b, a, m);
    CHECK(dab >= 0);
    CHECK(dab == dba);
    CHECK(mahalanobis(a, a, m) == 0.0);
  }
}

TEST_CASE("mahalanobis rejects dimension mismatches", "[similarity]") {
  CovarianceModel m = covariance(identity_cov_dataset());
  CHECK_THROWS_AS(mahalanobis(std::vector<double>{1}, std::vector<double>{1}, m), DimensionError);
}

TEST_CASE("single-row scan has no pairs and no violations", "[similarity]") {
  Dataset ds = numeric_dataset({{1, 2}}, {5});
  IFScanResult res = pairwise_if_scan(ds, std::vector<double>{5}, {1, 2}, {1, 2});
  for (const auto& c : res.cells) {
    CHECK(c.violations == 0);
    CHECK(c.satisfied);
  }
  CHECK(res.max_input_distance == 0);
}

TEST_CASE("three collinear points: hand-enumerated scan grid", "[similarity]") {
  // whitened positions -1, 0, +1 along the line: D(0,1)=D(1,2)=1, D(0,2)=2
  // outputs 0, 2, 7: d(0,1)=2, d(0,2)=7, d(1,2)=5
  Dataset ds = numeric_dataset({{0, 0}, {3, 4}, {6, 8}});
  std::vector<double> outputs{0, 2, 7};
  IFScanResult res = pairwise_if_scan(ds, outputs, {1.5, 2.5}, {1, 4, 6});

  CHECK(std::abs(res.max_input_distance - 2.0) < 1e-9);
  // kappa = 1.5 row: pairs (0,1) and (1,2)
  CHECK(res.cell(0, 0).violations == 2);  // d > 1: both
  CHECK(res.cell(0, 1).violations == 1);  // d > 4: (1,2) only
  CHECK(res.cell(0, 2).violations == 0);  // d > 6: none
  CHECK(res.cell(0, 2).satisfied);
  // kappa = 2.5 row: all three pairs
  CHECK(res.cell(1, 0).violations == 3);
  CHECK(res.cell(1, 1).violations == 2);  // (0,2) and (1,2)
  CHECK(res.cell(1, 2).violations == 1);  // (0,2)
  REQUIRE(res.cell(0, 1).witness.has_value());
  CHECK(*res.cell(0, 1).witness == std::make_pair<std::size_t, std::size_t>(1, 2));
  REQUIRE(res.cell(1, 2).witness.has_value());
  CHECK(*res.cell(1, 2).witness == std::make_pair<std::size_t, std::size_t>(0, 2));
}

TEST_CASE("scan grids must be nonempty and outputs aligned", "[similarity]") {
  Dataset ds = numeric_dataset({{0, 0}, {1, 1}}, {1, 2});
  CHECK_THROWS_AS(pairwise_if_scan(ds, std::vector<double>{1, 2}, {}, {1}), ConfigError);
  CHECK_THROWS_AS(pairwise_if_scan(ds, std::vector<double>{1}, {1}, {1}), DimensionError);
}

TEST_CASE("violation counts are monotone across the grid", "[similarity][property]") {
  std::uint64_t st = 31;
  auto next = [&] {
    st ^= st << 13;
    st ^= st >> 7;
    st ^= st << 17;
    return st;
  };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> rows;
    std::vector<double> outputs;
    size_t n = 5 + next() % 20;
    for (size_t i = 0; i < n; ++i) {
      rows.push_back({static_cast<double>(next() % 100) / 10.0,
                      static_cast<double>(next() % 100) / 10.0});
      outputs.push_back(static_cast<double>(1 + next() % 10));
    }
    Dataset ds = numeric_dataset(rows, outputs);
    IFScanResult res = pairwise_if_scan(ds, outputs, {0.5, 1, 2, 4}, {1, 2, 5, 8});
    for (size_t ki = 0; ki < res.kappa_grid.size(); ++ki)
      for (size_t di = 0; di < res.delta_grid.size(); ++di) {
        if (ki + 1 < res.kappa_grid.size())
          CHECK(res.cell(ki, di).violations <= res.cell(ki + 1, di).violations);
        if (di + 1 < res.delta_grid.size())
          CHECK(res.cell(ki, di).violations >= res.cell(ki, di + 1).violations);
      }
  }
}

TEST_CASE("row cap subsamples deterministically by seed", "[similarity]") {
  std::vector<std::vector<double>> rows;
  std::vector<double> outputs;
  std::uint64_t st = 17;
  auto next = [&] {
    st ^= st << 13;
    st ^= st >> 7;
    st ^= st << 17;
    return st;
  };
  for (int i = 0; i < 30; ++i) {
    rows.push_back({static_cast<double>(next() % 50), static_cast<double>(next() % 50)});
    outputs.push_back(static_cast<double>(next() % 10));
  }
  Dataset ds = numeric_dataset(rows, outputs);
  IFScanOptions opt;
  opt.pair_cap = 10;
  opt.seed = 99;
  IFScanResult a = pairwise_if_scan(ds, outputs, {5, 20}, {1, 5}, opt);
  IFScanResult b = pairwise_if_scan(ds, outputs, {5, 20}, {1, 5}, opt);
  CHECK(a.subsampled);
  CHECK(a.rows_scanned == 10);
  REQUIRE(a.cells.size() == b.cells.size());
  for (size_t i = 0; i < a.cells.size(); ++i)
    CHECK(a.cells[i].violations == b.cells[i].violations);
  CHECK(a.max_input_distance == b.max_input_distance);

  IFScanOptions opt2 = opt;
  opt2.seed = 100;
  IFScanResult c = pairwise_if_scan(ds, outputs, {5, 20}, {1, 5}, opt2);
  CHECK(c.rows_scanned == 10);  // different seed still scans the cap
}
