#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncfair/error.hpp"
#include "ncfair/rational.hpp"

namespace ncfair::synth {

/// Deterministic, platform-independent generator. Standard-library
/// distributions are implementation defined, so draws are derived directly
/// from splitmix64 outputs.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // [0, 1) with 53 bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

/// Finite toy world: n input points, a two-group assignment, lookup-table
/// relations f and g, reference labels for conditioning, Euclidean input
/// metric (or a supplied PSD weight matrix), absolute-difference output
/// metric. Everything reproducible from the seed.
struct FiniteInstance {
  std::vector<std::vector<double>> points;     // n x dim
  std::vector<int> group;                      // 0 = a, 1 = a'
  std::vector<int> f, g;                       // labels in [0, label_count)
  std::vector<int> truth;                      // reference labels for EO/calibration
  std::optional<std::vector<std::vector<double>>> metric_weights;  // dim x dim, PSD
  int label_count = 2;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }

  double input_distance(std::size_t i, std::size_t j) const {
    const auto& a = points[i];
    const auto& b = points[j];
    if (!metric_weights) {
      double s = 0;
      for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      return std::sqrt(s);
    }
    const auto& W = *metric_weights;
    double s = 0;
    for (std::size_t r = 0; r < a.size(); ++r)
      for (std::size_t c = 0; c < a.size(); ++c) s += (a[r] - b[r]) * W[r][c] * (a[c] - b[c]);
    return std::sqrt(s < 0 ? 0 : s);
  }

  int output_distance_f(std::size_t i, std::size_t j) const { return std::abs(f[i] - f[j]); }
  int output_distance_g(std::size_t i, std::size_t j) const { return std::abs(g[i] - g[j]); }

  int max_fg_distance() const {
    int m = 0;
    for (std::size_t i = 0; i < size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
    return m;
  }
};

/// g is f perturbed within +/- perturbation, so g is (perturbation+1)-close
/// to f by construction; checks still verify their own preconditions.
struct InstanceParams {
  std::size_t n = 10;
  int label_count = 2;
  std::size_t feature_dim = 3;
  int perturbation = 1;
};

inline FiniteInstance random_instance(std::uint64_t seed, const InstanceParams& p) {
  if (p.n < 2) throw Error("random_instance: need n >= 2");
  if (p.label_count < 2) throw Error("random_instance: need at least 2 labels");
  if (p.feature_dim < 1) throw Error("random_instance: need at least 1 feature");
  Rng rng(seed);
  FiniteInstance inst;
  inst.seed = seed;
  inst.label_count = p.label_count;
  inst.points.resize(p.n);
  inst.group.resize(p.n);
  inst.f.resize(p.n);
  inst.g.resize(p.n);
  inst.truth.resize(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    inst.points[i].resize(p.feature_dim);
    for (auto& x : inst.points[i]) x = rng.uniform();
    inst.group[i] = static_cast<int>(rng.below(2));
    inst.f[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(p.label_count)));
    inst.truth[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(p.label_count)));
    int delta = p.perturbation == 0
                    ? 0
                    : static_cast<int>(rng.below(2ull * p.perturbation + 1)) - p.perturbation;
    int gv = inst.f[i] + delta;
    if (gv < 0) gv = 0;
    if (gv >= p.label_count) gv = p.label_count - 1;
    inst.g[i] = gv;
  }
  // both groups nonempty, deterministically
  bool has0 = false, has1 = false;
  for (int gr : inst.group) (gr == 0 ? has0 : has1) = true;
  if (!has0) inst.group[0] = 0;
  if (!has1) inst.group[p.n > 1 ? 1 : 0] = 1;
  return inst;
}

inline FiniteInstance random_instance(std::uint64_t seed, std::size_t n, int label_count,
                                      std::size_t feature_dim) {
  return random_instance(seed, InstanceParams{n, label_count, feature_dim, 1});
}

enum class CheckStatus { passed, skipped, violated };

struct CheckResult {
  CheckStatus status = CheckStatus::passed;
  std::string detail;
  std::vector<std::pair<std::size_t, std::size_t>> violating_pairs;
};

/// Forward transfer on one instance. delta is derived from f over the
/// kappa-close pairs; requires g within epsilon of f everywhere (else the
/// instance is skipped). Expects no kappa-close pair with
/// d(g,g) >= 2*epsilon + delta.
inline CheckResult check_prop1(const FiniteInstance& inst, double kappa, const Rational& epsilon) {
  CheckResult res;
  Rational max_fg(inst.max_fg_distance());
  if (!(max_fg < epsilon)) {
    res.status = CheckStatus::skipped;
    res.detail = "g is not epsilon-close to f (max distance " + max_fg.to_string() + ")";
    return res;
  }
  int delta = 0;
  bool any_pair = false;
  const std::size_t n = inst.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (inst.input_distance(i, j) <= kappa) {
        any_pair = true;
        delta = std::max(delta, inst.output_distance_f(i, j));
      }
  if (!any_pair) {
    res.status = CheckStatus::skipped;
    res.detail = "no kappa-close pairs";
    return res;
  }
  Rational bound = Rational(2) * epsilon + Rational(delta);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (inst.input_distance(i, j) <= kappa &&
          Rational(inst.output_distance_g(i, j)) >= bound)
        res.violating_pairs.emplace_back(i, j);
  if (!res.violating_pairs.empty()) {
    res.status = CheckStatus::violated;
    res.detail = "pairs exceed 2e+d bound";
  }
  return res;
}

/// Converse: when f itself violates (kappa, delta) and g is epsilon-close,
/// some kappa-close pair must have d(g,g) > delta - 2*epsilon. A vacuous
/// bound (delta - 2*epsilon < 0) passes trivially.
inline CheckResult check_prop2(const FiniteInstance& inst, double kappa, const Rational& delta,
                               const Rational& epsilon) {
  CheckResult res;
  Rational max_fg(inst.max_fg_distance());
  if (!(max_fg < epsilon)) {
    res.status = CheckStatus::skipped;
    res.detail = "g is not epsilon-close to f";
    return res;
  }
  const std::size_t n = inst.size();
  bool f_violates = false;
  for (std::size_t i = 0; i < n && !f_violates; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (inst.input_distance(i, j) <= kappa && Rational(inst.output_distance_f(i, j)) > delta) {
        f_violates = true;
        break;
      }
  if (!f_violates) {
    res.status = CheckStatus::skipped;
    res.detail = "f does not violate (kappa, delta) on this instance";
    return res;
  }
  Rational bound = delta - Rational(2) * epsilon;
  if (bound < Rational(0)) return res;  // distances are nonnegative
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (inst.input_distance(i, j) <= kappa && Rational(inst.output_distance_g(i, j)) > bound)
        return res;
  res.status = CheckStatus::violated;
  res.detail = "no kappa-close pair with d(g,g) > delta - 2e";
  return res;
}

namespace detail {

struct ExactRate {
  bool defined = false;
  Rational value;
};

/// P[pred = y | condition, group]; conditioning event from `cond` (or all
/// rows when empty).
template <typename CondFn>
inline ExactRate exact_rate(const std::vector<int>& pred, const std::vector<int>& group,
                            int group_value, int y, CondFn cond) {
  long long hits = 0, support = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (group[i] != group_value) continue;
    if (!cond(i)) continue;
    ++support;
    if (pred[i] == y) ++hits;
  }
  if (support == 0) return {};
  return {true, Rational(hits, support)};
}

}  // namespace detail

enum class GroupNotion { statistical_parity, equal_opportunity, calibration };

/// Group-notion transfer on one instance, all label values y, exact
/// rational counting. delta is |notion gap of f|, M*epsilon is
/// max_a |rate(g,a) - rate(f,a)|; expects |notion gap of g| <= 2*M*e + delta.
/// Rates with empty conditioning events skip that label value; an instance
/// with every label value skipped is reported skipped.

inline CheckResult check_group_props(const FiniteInstance& inst, const Rational& epsilon,
                                     GroupNotion notion) {
  CheckResult res;
  Rational max_fg(inst.max_fg_distance());
  if (!(max_fg < epsilon)) {
    res.status = CheckStatus::skipped;
    res.detail = "g is not epsilon-close to f";
    return res;
  }
  bool any_defined = false;
  for (int y = 0; y < inst.label_count; ++y) {
    detail::ExactRate fa, fap, ga, gap;
    switch (notion) {
      case GroupNotion::statistical_parity: {
        auto all = [](std::size_t) { return true; };
        fa = detail::exact_rate(inst.f, inst.group, 0, y, all);
        fap = detail::exact_rate(inst.f, inst.group, 1, y, all);
        ga = detail::exact_rate(inst.g, inst.group, 0, y, all);
        gap = detail::exact_rate(inst.g, inst.group, 1, y, all);
        break;
      }
      case GroupNotion::equal_opportunity: {
        auto cond = [&](std::size_t i) { return inst.truth[i] == y; };
        fa = detail::exact_rate(inst.f, inst.group, 0, y, cond);
        fap = detail::exact_rate(inst.f, inst.group, 1, y, cond);
        ga = detail::exact_rate(inst.g, inst.group, 0, y, cond);
        gap = detail::exact_rate(inst.g, inst.group, 1, y, cond);
        break;
      }
      case GroupNotion::calibration: {
        // each relation conditions on its own favorable predictions
        auto cond_f = [&](std::size_t i) { return inst.f[i] == y; };
        auto cond_g = [&](std::size_t i) { return inst.g[i] == y; };
        fa = detail::exact_rate(inst.truth, inst.group, 0, y, cond_f);
        fap = detail::exact_rate(inst.truth, inst.group, 1, y, cond_f);
        ga = detail::exact_rate(inst.truth, inst.group, 0, y, cond_g);
        gap = detail::exact_rate(inst.truth, inst.group, 1, y, cond_g);
        break;
      }
    }
    if (!fa.defined || !fap.defined || !ga.defined || !gap.defined) continue;
    any_defined = true;
    Rational delta = (fa.value - fap.value).abs();
    Rational m_eps =
        ((ga.value - fa.value).abs() > (gap.value - fap.value).abs()) ? (ga.value - fa.value).abs()
                                                                      : (gap.value - fap.value).abs();
    Rational lhs = (ga.value - gap.value).abs();
    Rational bound = Rational(2) * m_eps + delta;
    if (lhs > bound) {
      res.status = CheckStatus::violated;
      res.detail = "label " + std::to_string(y) + ": |gap(g)| = " + lhs.to_string() +
                   " > " + bound.to_string();
      return res;
    }
  }
  if (!any_defined) {
    res.status = CheckStatus::skipped;
    res.detail = "all label values had empty conditioning events";
  }
  return res;
}

/// Campaign over seeded instances. Per check: pass / skip / violation
/// counts, with the seeds of any violations retained.
struct CampaignCheckStats {
  std::string name;
  std::size_t passed = 0, skipped = 0, violated = 0;
  std::vector<std::uint64_t> violation_seeds;

  void absorb(std::uint64_t seed, const CheckResult& r) {
    switch (r.status) {
      case CheckStatus::passed: ++passed; break;
      case CheckStatus::skipped: ++skipped; break;
      case CheckStatus::violated:
        ++violated;
        violation_seeds.push_back(seed);
        break;
    }
  }
};

struct CampaignReport {
  std::uint64_t base_seed = 0;
  std::size_t instances = 0;
  std::vector<CampaignCheckStats> checks;

  std::size_t total_violations() const {
    std::size_t v = 0;
    for (const auto& c : checks) v += c.violated;
    return v;
  }
};

inline CampaignReport run_campaign(std::uint64_t base_seed, std::size_t instances) {
  CampaignReport rep;
  rep.base_seed = base_seed;
  rep.instances = instances;
  for (const char* name : {"prop1_individual_transfer", "prop2_individual_converse",
                           "prop3_statistical_parity", "prop4_equal_opportunity",
                           "prop5_calibration"}) {
    CampaignCheckStats s;
    s.name = name;
    rep.checks.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < instances; ++i) {
    std::uint64_t seed = base_seed + i;
    Rng cfg(seed ^ 0xabcdef1234567890ULL);
    InstanceParams p;
    p.n = 4 + cfg.below(27);                                 // 4..30 points
    p.label_count = 2 + static_cast<int>(cfg.below(9));      // 2..10 labels
    p.feature_dim = 1 + cfg.below(4);                        // 1..4 features
    p.perturbation = static_cast<int>(cfg.below(std::min<std::uint64_t>(3, p.label_count - 1)));
    FiniteInstance inst = random_instance(seed, p);
    Rational epsilon(p.perturbation + 1);

    // kappa at roughly half the largest pair distance keeps both close and
    // non-close pairs in play
    double dmax = 0;
    for (std::size_t a = 0; a < inst.size(); ++a)
      for (std::size_t b = a + 1; b < inst.size(); ++b)
        dmax = std::max(dmax, inst.input_distance(a, b));
    double kappa = dmax / 2;

    rep.checks[0].absorb(seed, check_prop1(inst, kappa, epsilon));

    // choose a delta that f actually violates when possible
    int fmax = 0;
    for (std::size_t a = 0; a < inst.size(); ++a)
      for (std::size_t b = a + 1; b < inst.size(); ++b)
        if (inst.input_distance(a, b) <= kappa)
          fmax = std::max(fmax, inst.output_distance_f(a, b));
    Rational delta2 = fmax > 0 ? Rational(fmax - 1) : Rational(0);
    rep.checks[1].absorb(seed, check_prop2(inst, kappa, delta2, epsilon));

    rep.checks[2].absorb(seed, check_group_props(inst, epsilon, GroupNotion::statistical_parity));
    rep.checks[3].absorb(seed, check_group_props(inst, epsilon, GroupNotion::equal_opportunity));
    rep.checks[4].absorb(seed, check_group_props(inst, epsilon, GroupNotion::calibration));
  }
  return rep;
}

}  // namespace ncfair::synth
