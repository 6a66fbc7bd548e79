#pragma once

#include "twistor/classifier.hpp"

#include <set>

namespace twistor {

struct TheoremRow {
  std::string clause;
  std::string chart;
  int nu = 0;
  MetricParams t;
  std::string expected;
  std::string observed;
  double residual = 0.0;
  bool pass = false;
};

struct TheoremTable {
  std::vector<TheoremRow> rows;
  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const TheoremRow& r) { return r.pass; });
  }
};

/// Allowed labels per structure, from the class theorems.
inline const std::set<std::string>& allowed_labels(int nu) {
  static const std::array<std::set<std::string>, 4> table{{
      {kLabelW12345, kLabelW14},
      {kLabelW12345, kLabelW145, kLabelW14},
      {kLabelW145, kLabelW45, kLabelW4},
      {kLabelW12345, kLabelW145, kLabelW14},
  }};
  return table.at(static_cast<std::size_t>(nu - 1));
}

/// Constant curvature decided from the decomposition at the sample sites.
inline bool constant_curvature(const SampleSet& s, double tol) {
  for (const auto& site : s.sites) {
    const auto d = decompose(site);
    if (!(d.einstein(tol) && d.self_dual(tol) && d.anti_self_dual(tol))) return false;
  }
  return true;
}

/// Norm of the Nijenhuis witnesses at kappa = (s1+, s1-), U = (s2+, 0): N(E3^h, U) for nu = 1, 2
/// and N(E1^h, U) for nu = 3, 4, which are 2 E2^h and -2 E4^h.
inline PTangent nijenhuis_witness(const FrameCurvature& curv, int nu) {
  const TwistorPoint k{curv.frame, Vec3::UnitX(), Vec3::UnitX()};
  const PTangent u = PTangent::vertical(Vec3::UnitY(), Vec3::Zero());
  const Vec4 x = nu <= 2 ? Vec4::Unit(2) : Vec4::Unit(0);
  return nijenhuis(curv, k, nu, MetricParams{}, PTangent::horizontal(x), u);
}

struct VerifyTarget {
  std::string id;
  MetricChart chart;
};

inline TheoremTable verify_theorems(const std::vector<VerifyTarget>& charts, const std::vector<MetricParams>& grid,
                                    const SamplingConfig& config, const std::string& clause = "",
                                    std::optional<double> tol_override = std::nullopt) {
  TheoremTable table;
  auto add = [&](TheoremRow row) {
    if (clause.empty() || row.clause == clause) table.rows.push_back(std::move(row));
  };
  auto verdict_row = [&](const std::string& id, const std::string& chart, int nu, const MetricParams& t,
                         const ConditionReport& r, bool expect_holds) {
    TheoremRow row{id, chart, nu, t, expect_holds ? "holds" : "fails", to_string(r.verdict), r.residual, false};
    row.pass = expect_holds ? r.verdict == Verdict::Holds : r.verdict == Verdict::Fails;
    add(std::move(row));
  };
  for (const auto& target : charts) {
    const double tol = tol_override.value_or(tolerance(target.chart.tier()));
    const SampleSet samples = draw_samples(target.chart, config);
    const bool cc = constant_curvature(samples, tol);
    for (int nu = 1; nu <= 4; ++nu) {
      const PTangent n = nijenhuis_witness(samples.sites.front(), nu);
      const double size = std::sqrt(n.h.squaredNorm() + n.vp.squaredNorm() + n.vm.squaredNorm());
      add({"nonintegrable", target.id, nu, MetricParams{}, "nonzero", size > 1.0 ? "nonzero" : "zero", size,
           size > 1.0});
    }
    for (const MetricParams& t : grid) {
      for (int nu = 1; nu <= 4; ++nu) {
        const ClassReport r = classify_on(nu, t, target.chart, samples, tol);
        const auto& fd = r.get(Condition::F, Distribution::Primary);
        const auto& fp = r.get(Condition::F, Distribution::Complement);
        if (nu != 3) verdict_row("D.F-fails", target.id, nu, t, fd, false);
        else verdict_row("D3.F-iff-constant-curvature", target.id, nu, t, fd, cc);
        verdict_row("D.minimal", target.id, nu, t, r.get(Condition::D2, Distribution::Primary), true);
        if (nu == 3) verdict_row("D3.totally-geodesic", target.id, nu, t, r.get(Condition::D1, Distribution::Primary), true);
        if (nu != 1) verdict_row("D-perp.F-fails", target.id, nu, t, fp, false);
        else verdict_row("D1-perp.F-iff-constant-curvature", target.id, nu, t, fp, cc);
        verdict_row("D-perp.minimal", target.id, nu, t, r.get(Condition::D2, Distribution::Complement), true);
        if (nu == 1) {
          verdict_row("D1-perp.totally-geodesic", target.id, nu, t, r.get(Condition::D1, Distribution::Complement), true);
        }
        const std::string theorem = "class-nu" + std::to_string(nu);
        add({theorem, target.id, nu, t, "one of the listed classes", r.label, 0.0, allowed_labels(nu).count(r.label) > 0});
        if (nu == 3) {
          const bool constant_class = r.label == kLabelW45 || r.label == kLabelW4;
          add({"class-nu3-constant-curvature", target.id, nu, t, cc ? "W4⊕W5 or W4" : "W1⊕W4⊕W5", r.label, fd.residual, constant_class == cc});
        }
        add({"d1-implies-d2-d3", target.id, nu, t, "consistent", r.d1_implies_d2_d3 ? "consistent" : "inconsistent", 0.0,
             r.d1_implies_d2_d3});
      }
    }
  }
  return table;
}

}  // namespace twistor
