#pragma once

#include "twistor/catalog.hpp"
#include "twistor/connection.hpp"
#include "twistor/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace twistor {

enum class Condition { F, D1, D2, D3 };
/// The +1 eigendistribution of K_nu and its orthogonal complement.
enum class Distribution { Primary, Complement };
enum class Verdict { Holds, Fails, Inconclusive };

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::F: return "F";
    case Condition::D1: return "D1";
    case Condition::D2: return "D2";
    case Condition::D3: return "D3";
  }
  return "?";
}
inline const char* to_string(Distribution d) { return d == Distribution::Primary ? "D" : "D-perp"; }
inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline Verdict verdict_for(double residual, double tol) {
  if (residual < tol) return Verdict::Holds;
  if (residual > 100.0 * tol) return Verdict::Fails;
  return Verdict::Inconclusive;
}

struct SamplingConfig {
  int base_points = 20;
  int kappas = 5;
  int tuples = 10;
  std::uint64_t seed = 1;

  void validate() const {
    if (base_points < 20 || kappas < 5 || tuples < 10) {
      throw Error(ErrorKind::Precondition,
                  "sampling needs at least 20 base points, 5 twistor points each and 10 tuples per condition");
    }
  }
  SamplingConfig doubled() const { return {base_points, kappas, 2 * tuples, seed}; }
};

/// Data at one twistor point: the curvature at its base point and raw argument pairs (xi, eta).
struct SampleEntry {
  std::size_t site = 0;
  TwistorPoint kappa;
  std::vector<std::pair<PTangent, PTangent>> pairs;
};

struct SampleSet {
  std::string chart_id;
  std::vector<FrameCurvature> sites;
  std::vector<SampleEntry> entries;
  std::uint64_t seed = 0;

  std::size_t tuple_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.pairs.size();
    return n;
  }
};

inline SampleSet draw_samples(const MetricChart& chart, int base_count, int kappas, int tuples, std::uint64_t seed) {
  SampleSet s;
  s.chart_id = chart.id();
  s.seed = seed;
  TupleSource src(seed);
  for (const Point& p : base_points(chart, base_count)) {
    s.sites.push_back(frame_curvature(chart, p));
    for (int j = 0; j < kappas; ++j) {
      SampleEntry e;
      e.site = s.sites.size() - 1;
      e.kappa = src.kappa(s.sites.back().frame);
      for (int n = 0; n < tuples; ++n) e.pairs.emplace_back(src.tangent(e.kappa), src.tangent(e.kappa));
      s.entries.push_back(std::move(e));
    }
  }
  return s;
}

inline SampleSet draw_samples(const MetricChart& chart, const SamplingConfig& c) {
  return draw_samples(chart, c.base_points, c.kappas, c.tuples, c.seed);
}

/// G_t-orthonormal basis of the fibre of D_nu or D_nu-perp at k, built on the adapted frame.
inline std::vector<PTangent> distribution_basis(const TwistorPoint& k, int nu_value, const MetricParams& t,
                                                Distribution d) {
  const ProductStructureIndex nu(nu_value);
  const AdaptedFrame f = adapted_frame(k);
  const bool primary = d == Distribution::Primary;
  std::vector<PTangent> out;
  const int first = primary ? 2 : 0;
  out.push_back(PTangent::horizontal(f[first]));
  out.push_back(PTangent::horizontal(f[first + 1]));
  const bool plus_in_primary = nu.epsilon() > 0.0;
  const bool minus_in_primary = nu.epsilon() * nu.minus_sign() > 0.0;
  if (plus_in_primary == primary)
    for (const Vec3& v : complement_basis(k.plus)) out.push_back(PTangent::vertical(v / std::sqrt(t.t1), Vec3::Zero()));
  if (minus_in_primary == primary)
    for (const Vec3& v : complement_basis(k.minus)) out.push_back(PTangent::vertical(Vec3::Zero(), v / std::sqrt(t.t2)));
  return out;
}

namespace detail {

inline double dak(const FrameCurvature& curv, const TwistorPoint& k, int nu, const MetricParams& t, Distribution d,
                  const PTangent& xi, const PTangent& eta, const PTangent& out) {
  return d == Distribution::Primary ? daf_plus(curv, k, nu, t, xi, eta, out) : daf_minus(curv, k, nu, t, xi, eta, out);
}

/// xi rescaled so that A = xi +- K xi has G_t-norm one; nullopt if A vanishes.
inline std::optional<PTangent> unit_generator(const TwistorPoint& k, int nu, const MetricParams& t, Distribution d,
                                              const PTangent& xi) {
  const double s = d == Distribution::Primary ? 1.0 : -1.0;
  const PTangent a = xi + s * k_nu(nu, k, xi);
  const double n = norm_t(t, a);
  if (n < 1e-8) return std::nullopt;
  return (1.0 / n) * xi;
}

inline PTangent generated(const TwistorPoint& k, int nu, Distribution d, const PTangent& xi) {
  const double s = d == Distribution::Primary ? 1.0 : -1.0;
  return xi + s * k_nu(nu, k, xi);
}

}  // namespace detail

/// Coefficients of (D_A K_nu)(B) in a G_t-orthonormal basis of T_k P, where A and B are
/// generated by xi and eta in the chosen distribution.
inline Eigen::VectorXd dak_vector(const FrameCurvature& curv, const TwistorPoint& k, int nu, const MetricParams& t,
                                  Distribution d, const PTangent& xi, const PTangent& eta) {
  auto basis = distribution_basis(k, nu, t, Distribution::Primary);
  const auto rest = distribution_basis(k, nu, t, Distribution::Complement);
  basis.insert(basis.end(), rest.begin(), rest.end());
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = detail::dak(curv, k, nu, t, d, xi, eta, basis[i]);
  return v;
}

/// alpha(X) = sum_l G_t((D_{E_l} K)(E_l), X) for X running over a G_t-orthonormal basis
/// of the complementary distribution.
struct AlphaForm {
  TwistorPoint kappa;
  Distribution distribution = Distribution::Primary;
  std::vector<PTangent> complement;
  Eigen::VectorXd values;

  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
  /// alpha applied to a combination of the complement basis.
  double operator()(const Eigen::VectorXd& coefficients) const { return values.dot(coefficients); }
};

inline AlphaForm alpha_form(const FrameCurvature& curv, const TwistorPoint& k, int nu, const MetricParams& t,
                            Distribution d) {
  AlphaForm a;
  a.kappa = k;
  a.distribution = d;
  const auto basis = distribution_basis(k, nu, t, d);
  a.complement = distribution_basis(k, nu, t, d == Distribution::Primary ? Distribution::Complement : Distribution::Primary);
  a.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.complement.size()));
  for (std::size_t j = 0; j < a.complement.size(); ++j) {
    double v = 0.0;
    // E_l = xi + K xi with xi = E_l / 2, since K E_l = +-E_l on the distribution
    for (const PTangent& e : basis) v += detail::dak(curv, k, nu, t, d, 0.5 * e, 0.5 * e, a.complement[j]);
    a.values[static_cast<Eigen::Index>(j)] = v;
  }
  return a;
}

struct Witness {
  Point x = Point::Zero();
  Vec3 plus = Vec3::Zero();
  Vec3 minus = Vec3::Zero();
  PTangent a;
  PTangent b;
};

struct ConditionReport {
  Condition condition = Condition::F;
  Distribution distribution = Distribution::Primary;
  double residual = 0.0;
  std::size_t samples = 0;
  double tolerance = 1e-6;
  Verdict verdict = Verdict::Holds;
  Witness witness;

  bool holds() const { return verdict == Verdict::Holds; }
};

/// Supremum of the defect of one Gil-Medrano condition over a sample set, G_t-unit arguments.
inline ConditionReport condition_residual(Condition c, Distribution d, int nu, const MetricParams& t,
                                          const SampleSet& samples, double tol) {
  ConditionReport r;
  r.condition = c;
  r.distribution = d;
  r.tolerance = tol;
  auto consider = [&](double value, const SampleEntry& e, const PTangent& a, const PTangent& b) {
    ++r.samples;
    if (value > r.residual || r.samples == 1) {
      r.residual = std::max(r.residual, value);
      r.witness = {e.kappa.x(), e.kappa.plus, e.kappa.minus, a, b};
    }
  };
  for (const SampleEntry& e : samples.entries) {
    const FrameCurvature& curv = samples.sites[e.site];
    const TwistorPoint& k = e.kappa;
    if (c == Condition::D2) {
      const AlphaForm alpha = alpha_form(curv, k, nu, t, d);
      consider(alpha.max_abs(), e, PTangent{}, PTangent{});
      continue;
    }
    std::optional<AlphaForm> alpha;
    std::vector<PTangent> complement;
    double m = 0.0;
    if (c == Condition::D3) {
      alpha = alpha_form(curv, k, nu, t, d);
      complement = alpha->complement;
      m = static_cast<double>(distribution_basis(k, nu, t, d).size());
    }
    for (const auto& [raw_xi, raw_eta] : e.pairs) {
      const auto xi = detail::unit_generator(k, nu, t, d, raw_xi);
      const auto eta = detail::unit_generator(k, nu, t, d, raw_eta);
      if (!xi || !eta) continue;
      const PTangent a = detail::generated(k, nu, d, *xi);
      const PTangent b = detail::generated(k, nu, d, *eta);
      if (c == Condition::F || c == Condition::D1) {
        const Eigen::VectorXd ab = dak_vector(curv, k, nu, t, d, *xi, *eta);
        const Eigen::VectorXd ba = dak_vector(curv, k, nu, t, d, *eta, *xi);
        const double defect = c == Condition::F ? (ab - ba).norm() : (ab + ba).norm();
        consider(defect, e, a, b);
      } else {
        const double gab = g_t(t, a, b);
        double worst = 0.0;
        for (std::size_t j = 0; j < complement.size(); ++j) {
          const double lhs = detail::dak(curv, k, nu, t, d, *xi, *eta, complement[j]) +
                             detail::dak(curv, k, nu, t, d, *eta, *xi, complement[j]);
          worst = std::max(worst, std::abs(lhs - (2.0 / m) * gab * alpha->values[static_cast<Eigen::Index>(j)]));
        }
        consider(worst, e, a, b);
      }
    }
  }
  r.verdict = verdict_for(r.residual, tol);
  return r;
}

inline const char* kLabelW12345 = "W1⊕W2⊕W4⊕W5";
inline const char* kLabelW145 = "W1⊕W4⊕W5";
inline const char* kLabelW14 = "W1⊕W4";
inline const char* kLabelW45 = "W4⊕W5";
inline const char* kLabelW4 = "W4";
inline const char* kUnclassified = "unclassified";

struct DistributionSummary {
  bool integrable = false;
  bool minimal = false;
  bool totally_geodesic = false;
};

struct ClassReport {
  int nu = 1;
  MetricParams t;
  std::string chart_id;
  std::vector<ConditionReport> reports;
  std::string label;
  std::string pattern;
  DistributionSummary primary;
  DistributionSummary complement;
  bool d1_implies_d2_d3 = true;
  bool budget_doubled = false;
  std::size_t tuples = 0;
  double tolerance = 1e-6;

  const ConditionReport& get(Condition c, Distribution d) const {
    for (const auto& r : reports)
      if (r.condition == c && r.distribution == d) return r;
    throw Error(ErrorKind::Precondition, "missing condition report");
  }
};

/// Whenever D1 holds, D2 and D3 must hold on the same samples.
inline bool d1_implies_d2_d3(const std::vector<ConditionReport>& reports) {
  for (Distribution d : {Distribution::Primary, Distribution::Complement}) {
    const ConditionReport* d1 = nullptr;
    const ConditionReport* d2 = nullptr;
    const ConditionReport* d3 = nullptr;
    for (const auto& r : reports) {
      if (r.distribution != d) continue;
      if (r.condition == Condition::D1) d1 = &r;
      if (r.condition == Condition::D2) d2 = &r;
      if (r.condition == Condition::D3) d3 = &r;
    }
    if (d1 && d1->holds() && ((d2 && !d2->holds()) || (d3 && !d3->holds()))) return false;
  }
  return true;
}

/// Verdict pattern as text, e.g. "D:F-,D1+,D2+,D3+ D-perp:F-,D1-,D2+,D3-" (+ holds, - fails, ? inconclusive).
inline std::string verdict_pattern(const std::vector<ConditionReport>& reports) {
  std::string s;
  for (Distribution d : {Distribution::Primary, Distribution::Complement}) {
    if (!s.empty()) s += ' ';
    s += to_string(d);
    s += ':';
    bool first = true;
    for (const auto& r : reports) {
      if (r.distribution != d) continue;
      if (!first) s += ',';
      first = false;
      s += to_string(r.condition);
      s += r.verdict == Verdict::Holds ? '+' : r.verdict == Verdict::Fails ? '-' : '?';
    }
  }
  return s;
}

/// Class label from the verdicts, using only the combinations that occur in the theorems
/// for the given nu.
inline std::string infer_label(int nu, const std::vector<ConditionReport>& reports) {
  auto find = [&](Condition c, Distribution d) -> const ConditionReport& {
    for (const auto& r : reports)
      if (r.condition == c && r.distribution == d) return r;
    throw Error(ErrorKind::Precondition, "missing condition report");
  };
  for (const auto& r : reports)
    if (r.verdict == Verdict::Inconclusive) return kUnclassified;
  const bool f = find(Condition::F, Distribution::Primary).holds();
  const bool d1 = find(Condition::D1, Distribution::Primary).holds();
  const bool d1p = find(Condition::D1, Distribution::Complement).holds();
  const bool d2 = find(Condition::D2, Distribution::Primary).holds();
  const bool d2p = find(Condition::D2, Distribution::Complement).holds();
  if (!d2 || !d2p) return kUnclassified;
  switch (nu) {
    case 1:
      return d1 && d1p ? kLabelW14 : kLabelW12345;
    case 2:
    case 4:
      if (d1 && d1p) return kLabelW14;
      if (d1) return kLabelW145;
      if (d1p) return kUnclassified;
      return kLabelW12345;
    case 3:
      if (!d1) return kUnclassified;
      if (f && d1p) return kLabelW4;
      if (f) return kLabelW45;
      if (!d1p) return kLabelW145;
      return kUnclassified;
    default:
      throw Error(ErrorKind::Precondition, "structure index must be in 1..4");
  }
}

inline ClassReport classify_on(int nu, const MetricParams& t, const MetricChart& chart, const SampleSet& samples,
                               double tol) {
  ClassReport r;
  r.nu = nu;
  r.t = t;
  r.chart_id = chart.id();
  r.tolerance = tol;
  r.tuples = samples.tuple_count();
  for (Distribution d : {Distribution::Primary, Distribution::Complement})
    for (Condition c : {Condition::F, Condition::D1, Condition::D2, Condition::D3})
      r.reports.push_back(condition_residual(c, d, nu, t, samples, tol));
  r.label = infer_label(nu, r.reports);
  r.pattern = verdict_pattern(r.reports);
  r.d1_implies_d2_d3 = d1_implies_d2_d3(r.reports);
  auto summary = [&](Distribution d) {
    return DistributionSummary{r.get(Condition::F, d).holds(), r.get(Condition::D2, d).holds(),
                               r.get(Condition::D1, d).holds()};
  };
  r.primary = summary(Distribution::Primary);
  r.complement = summary(Distribution::Complement);
  return r;
}

/// Classifies (P, K_nu, G_t) over the chart. An inconclusive verdict doubles the tuple budget once.
inline ClassReport classify(int nu, const MetricParams& t, const MetricChart& chart, const SamplingConfig& config,
                            std::optional<double> tol_override = std::nullopt) {
  config.validate();
  const double tol = tol_override.value_or(tolerance(chart.tier()));
  ClassReport r = classify_on(nu, t, chart, draw_samples(chart, config), tol);
  const bool inconclusive = std::any_of(r.reports.begin(), r.reports.end(),
                                        [](const ConditionReport& c) { return c.verdict == Verdict::Inconclusive; });
  if (inconclusive) {
    r = classify_on(nu, t, chart, draw_samples(chart, config.doubled()), tol);
    r.budget_doubled = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Critical parameter search

enum class TParameter { T1, T2, Equal };

inline const char* to_string(TParameter p) {
  switch (p) {
    case TParameter::T1: return "t1";
    case TParameter::T2: return "t2";
    case TParameter::Equal: return "t1=t2";
  }
  return "?";
}

inline MetricParams params_for(TParameter p, double value, double other) {
  switch (p) {
    case TParameter::T1: return {value, other};
    case TParameter::T2: return {other, value};
    case TParameter::Equal: return {value, value};
  }
  return {};
}

/// Minimizer of a unimodal function on [lo, hi] by golden-section search.
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double width = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > width * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct CriticalTResult {
  int nu = 1;
  Distribution distribution = Distribution::Primary;
  TParameter parameter = TParameter::T1;
  double lower = 0.0;
  double upper = 0.0;
  double fixed_other = 1.0;
  double scalar = 0.0;
  bool constant_curvature = false;
  bool degenerate = false;
  double t_star = 0.0;
  double residual_at_star = 0.0;
  /// reference values: 6/s always, 3/(8 chi) only for constant curvature chi = s/12
  double six_over_s = 0.0;
  std::optional<double> three_over_eight_chi;
  std::string matches;
  std::vector<std::pair<double, double>> curve;
};

inline double d1_residual(const SampleSet& samples, int nu, Distribution d, const MetricParams& t) {
  return condition_residual(Condition::D1, d, nu, t, samples, 1.0).residual;
}

/// Locates the parameter value making the distribution totally geodesic on an Einstein chart
/// with positive scalar curvature.
inline CriticalTResult critical_t_search(const MetricChart& chart, int nu, Distribution d, TParameter p, double lo,
                                         double hi, double fixed_other = 1.0, const SamplingConfig& config = {},
                                         std::optional<double> tol_override = std::nullopt) {
  if (!(lo > 0.0 && hi > lo)) throw Error(ErrorKind::Precondition, "search interval must satisfy 0 < lo < hi");
  const double tol = tol_override.value_or(tolerance(chart.tier()));
  const SampleSet samples = draw_samples(chart, config);
  CriticalTResult r;
  r.nu = nu;
  r.distribution = d;
  r.parameter = p;
  r.lower = lo;
  r.upper = hi;
  r.fixed_other = fixed_other;
  double smin = std::numeric_limits<double>::infinity();
  double smax = -smin;
  bool einstein = true;
  bool conformally_flat = true;
  for (const auto& site : samples.sites) {
    const auto dec = decompose(site);
    smin = std::min(smin, dec.scalar);
    smax = std::max(smax, dec.scalar);
    einstein = einstein && dec.einstein(tol);
    conformally_flat = conformally_flat && dec.self_dual(tol) && dec.anti_self_dual(tol);
  }
  if (!einstein || !(smin > 0.0) || smax - smin > tol * std::max(1.0, smax)) {
    throw Error(ErrorKind::Precondition, "critical-t search needs an Einstein chart with positive scalar curvature");
  }
  r.scalar = 0.5 * (smin + smax);
  r.constant_curvature = conformally_flat;
  r.six_over_s = 6.0 / r.scalar;
  if (r.constant_curvature) r.three_over_eight_chi = 3.0 / (8.0 * (r.scalar / 12.0));

  auto objective = [&](double v) { return d1_residual(samples, nu, d, params_for(p, v, fixed_other)); };
  constexpr int kCurve = 21;
  double curve_max = 0.0;
  for (int i = 0; i < kCurve; ++i) {
    const double v = lo + (hi - lo) * i / (kCurve - 1);
    const double f = objective(v);
    r.curve.emplace_back(v, f);
    curve_max = std::max(curve_max, f);
  }
  if (curve_max < tol) {
    r.degenerate = true;
    r.matches = "degenerate";
    return r;
  }
  // bracket the golden-section search around the best grid point
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.curve.size(); ++i)
    if (r.curve[i].second < r.curve[best].second) best = i;
  const double step = (hi - lo) / (kCurve - 1);
  const double a = std::max(lo, r.curve[best].first - step);
  const double b = std::min(hi, r.curve[best].first + step);
  r.t_star = golden_section_minimize(objective, a, b);
  r.residual_at_star = objective(r.t_star);
  const double edge = 1e-6 * (hi - lo);
  if (r.residual_at_star >= tol && (r.t_star - lo < edge || hi - r.t_star < edge)) {
    throw Error(ErrorKind::Precondition, "no interior minimum of the D1 residual in the search interval");
  }
  auto close = [&](double ref) { return std::abs(r.t_star - ref) < 1e-6 * std::max(1.0, ref); };
  const bool m6 = close(r.six_over_s);
  const bool m38 = r.three_over_eight_chi && close(*r.three_over_eight_chi);
  r.matches = m6 && m38 ? "both" : m6 ? "6/s" : m38 ? "3/(8chi)" : "neither";
  return r;
}

}  // namespace twistor
