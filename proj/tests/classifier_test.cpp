#include "support.hpp"
#include "twistor/classifier.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace twistor;

namespace {

const SamplingConfig kCfg{};

/// Reports with the given verdicts; anything not listed holds.
std::vector<ConditionReport> synthesized(const std::map<std::pair<Condition, Distribution>, Verdict>& v) {
  std::vector<ConditionReport> out;
  for (Distribution d : {Distribution::Primary, Distribution::Complement})
    for (Condition c : {Condition::F, Condition::D1, Condition::D2, Condition::D3}) {
      ConditionReport r;
      r.condition = c;
      r.distribution = d;
      const auto it = v.find({c, d});
      r.verdict = it == v.end() ? Verdict::Holds : it->second;
      out.push_back(r);
    }
  return out;
}

constexpr auto P = Distribution::Primary;
constexpr auto C = Distribution::Complement;
constexpr auto X = Verdict::Fails;

}  // namespace

TEST(Verdict, Thresholds) {
  EXPECT_EQ(verdict_for(0.5e-6, 1e-6), Verdict::Holds);
  EXPECT_EQ(verdict_for(5e-6, 1e-6), Verdict::Inconclusive);
  EXPECT_EQ(verdict_for(2e-4, 1e-6), Verdict::Fails);
}

TEST(Sampling, BudgetBelowMinimumIsRejected) {
  try {
    classify(1, {}, make_flat(), SamplingConfig{5, 5, 10, 1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(Sampling, DeterministicForSeed) {
  const SampleSet a = draw_samples(make_cp2(), kCfg);
  const SampleSet b = draw_samples(make_cp2(), kCfg);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  EXPECT_EQ(a.tuple_count(), 1000u);
  EXPECT_EQ(a.entries.back().kappa.plus, b.entries.back().kappa.plus);
}

TEST(DistributionBasis, EigenspacesOfKnu) {
  std::mt19937_64 rng(3);
  const OrthonormalFrame f = orthonormal_frame(make_cp2(), Point(0.1, 0.2, 0.3, -0.1));
  const TwistorPoint k = make_twistor_point(f, twistor::testing::random_vec3(rng), twistor::testing::random_vec3(rng));
  const MetricParams t(0.3, 2.5);
  const std::map<int, std::size_t> dims{{1, 6}, {2, 4}, {3, 2}, {4, 4}};
  for (int nu = 1; nu <= 4; ++nu) {
    const auto d = distribution_basis(k, nu, t, P);
    const auto dp = distribution_basis(k, nu, t, C);
    EXPECT_EQ(d.size(), dims.at(nu));
    EXPECT_EQ(d.size() + dp.size(), 8u);
    std::vector<PTangent> all = d;
    all.insert(all.end(), dp.begin(), dp.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      const double sign = i < d.size() ? 1.0 : -1.0;
      EXPECT_LT((k_nu(nu, k, all[i]) - sign * all[i]).stacked().norm(), 1e-12);
      for (std::size_t j = 0; j < all.size(); ++j) EXPECT_NEAR(g_t(t, all[i], all[j]), i == j ? 1.0 : 0.0, 1e-12);
    }
    int horizontal = 0;
    for (const PTangent& v : d) horizontal += v.is_horizontal();
    EXPECT_EQ(horizontal, 2);
  }
}

TEST(Classify, MinimalityHoldsThroughoutCatalog) {
  for (const auto& e : default_catalog()) {
    for (int nu = 1; nu <= 4; ++nu) {
      const ClassReport r = classify(nu, MetricParams(0.7, 1.3), e.chart, kCfg);
      EXPECT_TRUE(r.get(Condition::D2, P).holds()) << e.id << " nu=" << nu;
      EXPECT_TRUE(r.get(Condition::D2, C).holds()) << e.id << " nu=" << nu;
      EXPECT_TRUE(r.d1_implies_d2_d3) << e.id;
    }
  }
}

TEST(Classify, SphereNuThree) {
  const MetricChart s = make_round_sphere();
  EXPECT_EQ(classify(3, {}, s, kCfg).label, kLabelW45);
  const ClassReport crit = classify(3, MetricParams(0.5, 0.5), s, kCfg);
  EXPECT_EQ(crit.label, kLabelW4);
  EXPECT_TRUE(crit.primary.integrable && crit.complement.totally_geodesic);
  EXPECT_EQ(classify(3, MetricParams(0.75, 0.75), s, kCfg).label, kLabelW45);
}

TEST(Classify, FlatSpace) {
  const MetricChart f = make_flat();
  const ClassReport r1 = classify(1, MetricParams(0.4, 2.0), f, kCfg);
  EXPECT_EQ(r1.get(Condition::F, P).verdict, Verdict::Fails);
  EXPECT_EQ(r1.label, kLabelW12345);
  EXPECT_EQ(classify(3, MetricParams(0.4, 2.0), f, kCfg).label, kLabelW45);
}

TEST(Classify, ProductOfSpheresIsGeneric) {
  const MetricChart c = make_s2xs2(1.0, 2.0);
  EXPECT_EQ(classify(1, {}, c, kCfg).label, kLabelW12345);
  EXPECT_EQ(classify(2, {}, c, kCfg).label, kLabelW12345);
}

TEST(Classify, OrientationFlipExchangesTwoAndFour) {
  const MetricChart cp2 = make_cp2();
  const MetricChart flipped = cp2.flipped();
  const ClassReport a = classify(4, MetricParams(1.0, 0.25), cp2, kCfg);
  const ClassReport b = classify(2, MetricParams(0.25, 1.0), flipped, kCfg);
  EXPECT_EQ(a.label, kLabelW145);
  EXPECT_EQ(b.label, kLabelW145);
  EXPECT_EQ(classify(2, MetricParams(0.25, 1.0), cp2, kCfg).label, kLabelW12345);
  EXPECT_EQ(classify(4, MetricParams(1.0, 0.6), cp2, kCfg).label, kLabelW12345);
}

TEST(Classify, NearCriticalDoublesBudget) {
  const ClassReport r = classify(2, MetricParams(0.5 + 1e-6, 1.0), make_round_sphere(), kCfg);
  EXPECT_TRUE(r.budget_doubled);
  EXPECT_EQ(r.tuples, 2000u);
}

TEST(AlphaForm, VanishesWhenMinimal) {
  const SampleSet s = draw_samples(make_perturbed_flat(), kCfg);
  const auto& e = s.entries.front();
  for (int nu = 1; nu <= 4; ++nu)
    for (Distribution d : {P, C}) {
      const AlphaForm a = alpha_form(s.sites[e.site], e.kappa, nu, {}, d);
      EXPECT_EQ(a.values.size(), static_cast<Eigen::Index>(distribution_basis(e.kappa, nu, {}, d == P ? C : P).size()));
      EXPECT_LT(a.max_abs(), 1e-10);
    }
}

TEST(CriticalT, ResidualScanHasSingleZero) {
  // nu = 2, D over t1 on the unit sphere: scan (0, 10] independently of the search
  const SampleSet s = draw_samples(make_round_sphere(), kCfg);
  int zeros = 0;
  double at = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double v = 0.05 * i;
    if (d1_residual(s, 2, P, MetricParams(v, 1.0)) < 1e-6) {
      ++zeros;
      at = v;
    }
  }
  EXPECT_EQ(zeros, 1);
  EXPECT_NEAR(at, 0.5, 1e-12);
  EXPECT_GT(d1_residual(s, 2, P, MetricParams(0.45, 1.0)), 1e-2);
  EXPECT_GT(d1_residual(s, 2, P, MetricParams(0.55, 1.0)), 1e-2);
}

TEST(CriticalT, ScalesWithRadiusSquared) {
  for (double r : {1.0, 2.0}) {
    const CriticalTResult c =
        critical_t_search(make_round_sphere(r), 2, P, TParameter::T1, 0.05, 4.0 * r * r, 1.0, kCfg);
    EXPECT_NEAR(c.t_star, 0.5 * r * r, 1e-7 * r * r);
    EXPECT_LT(c.residual_at_star, 1e-6);
    EXPECT_TRUE(c.constant_curvature);
    EXPECT_EQ(c.matches, "6/s");
  }
}

TEST(CriticalT, ComplexProjectivePlane) {
  const CriticalTResult c = critical_t_search(make_cp2(), 4, P, TParameter::T2, 0.05, 2.0, 1.0, kCfg);
  EXPECT_NEAR(c.t_star, 0.25, 1e-7);
  EXPECT_FALSE(c.constant_curvature);
  EXPECT_FALSE(c.three_over_eight_chi.has_value());
}

TEST(CriticalT, PreconditionsAndDegenerateCase) {
  for (const MetricChart& m : {make_s2xs2(1.0, 2.0), make_perturbed_flat(), make_flat()}) {
    try {
      critical_t_search(m, 2, P, TParameter::T1, 0.1, 3.0, 1.0, kCfg);
      FAIL() << "expected an error for " << m.id();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Precondition);
    }
  }
  EXPECT_THROW(critical_t_search(make_round_sphere(), 2, P, TParameter::T1, 2.0, 1.0), Error);
  EXPECT_TRUE(critical_t_search(make_round_sphere(), 3, P, TParameter::Equal, 0.1, 3.0, 1.0, kCfg).degenerate);
}

TEST(GoldenSection, QuadraticMinimum) {
  EXPECT_NEAR(golden_section_minimize([](double x) { return (x - 1.3) * (x - 1.3) + 2.0; }, -4.0, 5.0), 1.3, 1e-6);
  EXPECT_NEAR(golden_section_minimize([](double x) { return std::abs(x - 0.2); }, 0.0, 1.0), 0.2, 1e-10);
}

TEST(Labels, TheoremCombinations) {
  EXPECT_EQ(infer_label(1, synthesized({})), kLabelW14);
  EXPECT_EQ(infer_label(1, synthesized({{{Condition::D1, C}, X}})), kLabelW12345);
  EXPECT_EQ(infer_label(2, synthesized({{{Condition::D1, C}, X}})), kLabelW145);
  EXPECT_EQ(infer_label(4, synthesized({{{Condition::D1, P}, X}, {{Condition::D1, C}, X}})), kLabelW12345);
  EXPECT_EQ(infer_label(3, synthesized({})), kLabelW4);
  EXPECT_EQ(infer_label(3, synthesized({{{Condition::D1, C}, X}})), kLabelW45);
  EXPECT_EQ(infer_label(3, synthesized({{{Condition::F, P}, X}, {{Condition::D1, C}, X}})), kLabelW145);
}

TEST(Labels, CombinationsOutsideTheTheoremsAreUnclassified) {
  // D-perp totally geodesic while D is not
  EXPECT_EQ(infer_label(2, synthesized({{{Condition::D1, P}, X}})), kUnclassified);
  EXPECT_EQ(infer_label(3, synthesized({{{Condition::D1, P}, X}})), kUnclassified);
  EXPECT_EQ(infer_label(1, synthesized({{{Condition::D2, C}, X}})), kUnclassified);
  EXPECT_EQ(infer_label(2, synthesized({{{Condition::D3, P}, Verdict::Inconclusive}})), kUnclassified);
  EXPECT_THROW(infer_label(5, synthesized({})), Error);
}

TEST(Labels, D1ImpliesD2AndD3) {
  EXPECT_TRUE(d1_implies_d2_d3(synthesized({{{Condition::D1, P}, X}, {{Condition::D3, P}, X}})));
  EXPECT_FALSE(d1_implies_d2_d3(synthesized({{{Condition::D3, C}, X}})));
  EXPECT_EQ(verdict_pattern(synthesized({{{Condition::F, P}, X}})), "D:F-,D1+,D2+,D3+ D-perp:F+,D1+,D2+,D3+");
}
