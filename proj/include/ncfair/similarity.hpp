#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncfair/dataset.hpp"
#include "ncfair/error.hpp"

namespace ncfair {

/// Sample covariance of the input features plus the inverse used for
/// Mahalanobis distances. One-hot blocks make the covariance rank
/// deficient, so the inverse is the Moore-Penrose pseudo-inverse; when the
/// spectrum has eigenvalues in the ambiguous band between clearly-zero and
/// clearly-nonzero, a ridge (C + lambda I)^-1 with lambda recorded is used
/// instead of guessing the rank.
struct CovarianceModel {
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd inverse;
  Eigen::MatrixXd whitener;  // W with ||W(x-y)||^2 = (x-y)^T inverse (x-y)
  double lambda = 0.0;
  int rank = 0;

  std::size_t dimension() const { return static_cast<std::size_t>(covariance.rows()); }
};

namespace detail {

constexpr double kRankTolerance = 1e-10;      // relative: below = zero
constexpr double kBorderlineLow = 1e-12;      // relative band that triggers the ridge
constexpr double kBorderlineHigh = 1e-8;
constexpr double kRidgeLambda = 1e-6;

}  // namespace detail

inline CovarianceModel covariance_from_matrix(const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  if (n < 2) throw InsufficientDataError("covariance: need at least 2 rows");
  Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
  CovarianceModel m;
  m.covariance = (centered.transpose() * centered) / static_cast<double>(n - 1);
  // symmetrize against rounding
  m.covariance = ((m.covariance + m.covariance.transpose()) / 2.0).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.covariance);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd& V = es.eigenvectors();
  double max_ev = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;

  bool borderline = false;
  if (max_ev > 0) {
    for (int i = 0; i < ev.size(); ++i) {
      double rel = std::abs(ev[i]) / max_ev;
      if (rel > detail::kBorderlineLow && rel < detail::kBorderlineHigh) borderline = true;
    }
  }

  if (borderline) {
    m.lambda = detail::kRidgeLambda;
    Eigen::MatrixXd ridged = m.covariance;
    ridged.diagonal().array() += m.lambda;
    m.inverse = ridged.ldlt().solve(Eigen::MatrixXd::Identity(ridged.rows(), ridged.cols()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(ridged);
    Eigen::VectorXd inv_sqrt = es2.eigenvalues().cwiseInverse().cwiseSqrt();
    m.whitener = inv_sqrt.asDiagonal() * es2.eigenvectors().transpose();
    m.rank = static_cast<int>(ev.size());
    return m;
  }

  Eigen::VectorXd inv_ev = Eigen::VectorXd::Zero(ev.size());
  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (max_ev > 0 && ev[i] > detail::kRankTolerance * max_ev) {
      inv_ev[i] = 1.0 / ev[i];
      inv_sqrt[i] = 1.0 / std::sqrt(ev[i]);
      ++m.rank;
    }
  }
  m.inverse = V * inv_ev.asDiagonal() * V.transpose();
  m.whitener = inv_sqrt.asDiagonal() * V.transpose();
  return m;
}

/// Matrix of the dataset's feature columns (or all numeric columns when no
/// feature view was designated).
inline Eigen::MatrixXd feature_matrix(const Dataset& ds) {
  std::vector<std::string> names = ds.feature_columns();
  if (names.empty()) {
    for (const auto& [n, k] : ds.schema().columns)
      if (k != ColumnKind::categorical) names.push_back(n);
  }
  if (names.empty()) throw SchemaError("dataset has no numeric feature columns");
  Eigen::MatrixXd X(static_cast<long>(ds.row_count()), static_cast<long>(names.size()));
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto& v = ds.numeric(names[c]);
    for (std::size_t r = 0; r < v.size(); ++r) X(static_cast<long>(r), static_cast<long>(c)) = v[r];
  }
  return X;
}

inline CovarianceModel covariance(const Dataset& ds) {
  return covariance_from_matrix(feature_matrix(ds));
}

/// Mahalanobis distance sqrt((a-b)^T C^+ (a-b)); zero for identical rows,
/// symmetric, nonnegative.
inline double mahalanobis(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          const CovarianceModel& m) {
  if (a.size() != b.size() || static_cast<std::size_t>(a.size()) != m.dimension())
    throw DimensionError("mahalanobis: vector dimension does not match model");
  Eigen::VectorXd d = a - b;
  double q = d.dot(m.inverse * d);
  return std::sqrt(std::max(0.0, q));
}

inline double mahalanobis(std::span<const double> a, std::span<const double> b,
                          const CovarianceModel& m) {
  Eigen::VectorXd va = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<long>(a.size()));
  Eigen::VectorXd vb = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<long>(b.size()));
  return mahalanobis(va, vb, m);
}

/// Exhaustive (kappa, delta) sweep over input pairs: a cell counts the
/// pairs whose inputs are kappa-close but whose outputs differ by more
/// than delta. Output distance is the absolute label difference.
struct IFScanOptions {
  std::size_t pair_cap = 10000;  // rows, not pairs; above this, seeded subsampling
  std::uint64_t seed = 0;
};

struct IFScanCell {
  double kappa = 0, delta = 0;
  std::int64_t violations = 0;
  bool satisfied = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // original row indices
};

struct IFScanResult {
  std::vector<double> kappa_grid, delta_grid;
  std::vector<IFScanCell> cells;  // kappa-major order
  double max_input_distance = 0;
  std::size_t rows_scanned = 0;
  std::uint64_t seed = 0;
  bool subsampled = false;

  const IFScanCell& cell(std::size_t ki, std::size_t di) const {
    return cells[ki * delta_grid.size() + di];
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic choice of `k` of `n` indices, returned sorted.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::uint64_t st = seed ^ 0xda3e39cb94b95bdbULL;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(splitmix64(st) % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace detail

inline IFScanResult pairwise_if_scan(const Dataset& ds, std::span<const double> outputs,
                                     std::vector<double> kappa_grid,
                                     std::vector<double> delta_grid,
                                     const IFScanOptions& opt = {}) {
  if (outputs.size() != ds.row_count())
    throw DimensionError("if_scan: outputs not aligned with dataset rows");
  if (kappa_grid.empty() || delta_grid.empty())
    throw ConfigError("if_scan: kappa and delta grids must be nonempty");
  std::sort(kappa_grid.begin(), kappa_grid.end());
  std::sort(delta_grid.begin(), delta_grid.end());

  IFScanResult res;
  res.kappa_grid = kappa_grid;
  res.delta_grid = delta_grid;
  res.seed = opt.seed;
  const std::size_t nk = kappa_grid.size(), nd = delta_grid.size();
  res.cells.resize(nk * nd);
  for (std::size_t ki = 0; ki < nk; ++ki)
    for (std::size_t di = 0; di < nd; ++di) {
      res.cells[ki * nd + di].kappa = kappa_grid[ki];
      res.cells[ki * nd + di].delta = delta_grid[di];
    }
  if (ds.row_count() < 2) {
    res.rows_scanned = ds.row_count();
    return res;
  }

  std::vector<std::size_t> rows;
  if (ds.row_count() > opt.pair_cap) {
    rows = detail::sample_indices(ds.row_count(), opt.pair_cap, opt.seed);
    res.subsampled = true;
  } else {
    rows.resize(ds.row_count());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }
  res.rows_scanned = rows.size();

  CovarianceModel model = covariance(ds);
  Eigen::MatrixXd X = feature_matrix(ds);
  // whitened coordinates: pair distance becomes a plain Euclidean norm
  Eigen::MatrixXd Z = (model.whitener * X.transpose()).transpose();

  // Pairs are bucketed by (first kappa >= D, last delta < d); a cell then
  // aggregates buckets with kpos <= ki and dpos >= di.
  const std::size_t n = rows.size();
  std::vector<std::int64_t> bucket(nk * nd, 0);
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> bucket_witness(nk * nd);
  double max_d = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto ia = rows[a];
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ib = rows[b];
      double D = (Z.row(static_cast<long>(ia)) - Z.row(static_cast<long>(ib))).norm();
      max_d = std::max(max_d, D);
      auto kit = std::lower_bound(kappa_grid.begin(), kappa_grid.end(), D);
      if (kit == kappa_grid.end()) continue;  // farther than every kappa
      std::size_t kpos = static_cast<std::size_t>(kit - kappa_grid.begin());
      double d = std::abs(outputs[ia] - outputs[ib]);
      auto dit = std::lower_bound(delta_grid.begin(), delta_grid.end(), d);
      if (dit == delta_grid.begin()) continue;  // d <= every delta: no cell violated
      std::size_t dpos = static_cast<std::size_t>(dit - delta_grid.begin()) - 1;
      auto& w = bucket_witness[kpos * nd + dpos];
      if (!w) w = std::make_pair(ia, ib);
      ++bucket[kpos * nd + dpos];
    }
  }
  res.max_input_distance = max_d;

  for (std::size_t ki = 0; ki < nk; ++ki) {
    for (std::size_t di = 0; di < nd; ++di) {
      IFScanCell& cell = res.cells[ki * nd + di];
      for (std::size_t kp = 0; kp <= ki; ++kp) {
        for (std::size_t dp = di; dp < nd; ++dp) {
          cell.violations += bucket[kp * nd + dp];
          const auto& w = bucket_witness[kp * nd + dp];
          if (w && (!cell.witness || *w < *cell.witness)) cell.witness = w;
        }
      }
      cell.satisfied = cell.violations == 0;
    }
  }
  return res;
}

}  // namespace ncfair
