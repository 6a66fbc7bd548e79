#include "support.hpp"
#include "twistor/curvature.hpp"

#include <gtest/gtest.h>

using namespace twistor;
using twistor::testing::random_point;
using twistor::testing::random_vec3;
using twistor::testing::random_vec4;
using twistor::testing::random_vec6;

namespace {

const Vec4 e1 = Vec4::Unit(0), e2 = Vec4::Unit(1), e3 = Vec4::Unit(2), e4 = Vec4::Unit(3);

/// g on bivectors through the wedge basis, where |E_a ^ E_b|^2 = 1/2.
double wedge_basis_metric(const Vec6& a, const Vec6& b) { return 0.5 * to_wedge_basis(a).dot(to_wedge_basis(b)); }

Vec6 random_in_half(Half h, std::mt19937_64& rng) {
  const Vec3 v = random_vec3(rng);
  return h == Half::Plus ? plus_part(v) : minus_part(v);
}

}  // namespace

TEST(Lambda2, HalfDeterminantOnWedgeBasis) {
  EXPECT_DOUBLE_EQ(metric_lambda2(wedge(e1, e2), wedge(e1, e2)), 0.5);
  EXPECT_DOUBLE_EQ(metric_lambda2_det(e1, e2, e1, e2), 0.5);
}

TEST(Lambda2, SplitBasisIsOrthonormal) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      EXPECT_NEAR(wedge_basis_metric(Vec6::Unit(i), Vec6::Unit(j)), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(Lambda2, RandomWedgesMatchDeterminant) {
  std::mt19937_64 rng(1);
  for (int n = 0; n < 100; ++n) {
    const Vec4 v1 = random_vec4(rng), v2 = random_vec4(rng), v3 = random_vec4(rng), v4 = random_vec4(rng);
    EXPECT_NEAR(metric_lambda2(wedge(v1, v2), wedge(v3, v4)), metric_lambda2_det(v1, v2, v3, v4), 1e-12);
    const Vec6 a = random_vec6(rng);
    const Vec6 b = random_vec6(rng);
    EXPECT_NEAR(metric_lambda2(a, b), wedge_basis_metric(a, b), 1e-12);
    EXPECT_LT((from_wedge_basis(to_wedge_basis(a)) - a).norm(), 1e-14);
  }
}

TEST(Lambda2, MismatchedBasePointsThrow) {
  const Bivector a{Point::Zero(), Vec6::Unit(0)};
  const Bivector b{Point(0.1, 0.0, 0.0, 0.0), Vec6::Unit(0)};
  EXPECT_THROW(metric_lambda2(a, b), Error);
}

TEST(Hodge, StarOnBasis) {
  EXPECT_LT((hodge_star(wedge(e1, e2)) - wedge(e3, e4)).norm(), 1e-15);
  EXPECT_LT((hodge_star(Vec6::Unit(4)) + Vec6::Unit(4)).norm(), 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_LT((hodge_star(Vec6::Unit(i)) - Vec6::Unit(i)).norm(), 1e-15);
}

TEST(Hodge, InvolutionAndOrthogonalSplit) {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 50; ++n) {
    const Vec6 a = random_vec6(rng);
    EXPECT_LT((hodge_star(hodge_star(a)) - a).norm(), 1e-14);
    const SelfDualSplit s = sd_split(a);
    EXPECT_LT((s.plus + s.minus - a).norm(), 1e-14);
    EXPECT_NEAR(a.squaredNorm(), s.plus.squaredNorm() + s.minus.squaredNorm(), 1e-12);
    EXPECT_LT(s.plus.tail<3>().norm() + s.minus.head<3>().norm(), 1e-15);
  }
}

TEST(KEndo, ActionOnAdaptedBasis) {
  const Mat4 kp = k_plus(Vec3::UnitX());
  const Mat4 km = k_minus(Vec3::UnitX());
  EXPECT_LT((kp * e1 - e2).norm(), 1e-15);
  EXPECT_LT((kp * e3 - e4).norm(), 1e-15);
  EXPECT_LT((km * e1 - e2).norm(), 1e-15);
  EXPECT_LT((km * e3 + e4).norm(), 1e-15);
}

TEST(KEndo, DefiningIdentityAndComplexStructure) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 50; ++n) {
    const Vec6 a = random_vec6(rng);
    const Vec4 x = random_vec4(rng), y = random_vec4(rng);
    EXPECT_NEAR((k_endo(a) * x).dot(y), 2.0 * metric_lambda2(a, wedge(x, y)), 1e-12);
    EXPECT_LT((k_endo(a) + k_endo(a).transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((bivector_of_endo(k_endo(a)) - a).norm(), 1e-14);
  }
  for (int i = 0; i < 6; ++i) {
    const Mat4 k = k_endo(Vec6::Unit(i));
    EXPECT_LT((k * k + Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(KEndo, GammaMetricIsTwiceBivectorMetric) {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 100; ++n) {
    const Vec6 a = random_vec6(rng), b = random_vec6(rng);
    EXPECT_NEAR(gamma_metric(k_endo(a), k_endo(b)), 2.0 * metric_lambda2(a, b), 1e-12);
  }
}

TEST(KEndo, MixedHalvesCommuteSameHalfAnticommute) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 100; ++n) {
    const Mat4 a = k_plus(random_vec3(rng));
    const Mat4 b = k_minus(random_vec3(rng));
    EXPECT_LT((a * b - b * a).cwiseAbs().maxCoeff(), 1e-12);
    for (Half h : {Half::Plus, Half::Minus}) {
      Vec6 p = random_in_half(h, rng);
      Vec6 q = random_in_half(h, rng);
      q -= q.dot(p) / p.dot(p) * p;
      const Mat4 kp = k_endo(p), kq = k_endo(q);
      EXPECT_LT((kp * kq + kq * kp).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Cross, BasisAndSelf) {
  EXPECT_LT((cross(Vec6::Unit(0), Vec6::Unit(1)) - Vec6::Unit(2)).norm(), 1e-15);
  EXPECT_LT((cross(Vec6::Unit(3), Vec6::Unit(4)) - Vec6::Unit(5)).norm(), 1e-15);
  const Vec6 b = plus_part(Vec3(0.3, -1.0, 2.0));
  EXPECT_EQ(cross(b, b).norm(), 0.0);
}

TEST(Cross, MixedHalvesThrow) {
  try {
    cross(Vec6::Unit(0), Vec6::Unit(3));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MixedHalves);
  }
}

TEST(Cross, ProductOfStructuresBothBranches) {
  // K_b K_c = -g(b,c) Id + K_{bxc} on the plus half, - K_{bxc} on the minus half
  std::mt19937_64 rng(6);
  for (Half h : {Half::Plus, Half::Minus}) {
    for (int n = 0; n < 100; ++n) {
      const Vec6 b = random_in_half(h, rng), c = random_in_half(h, rng);
      const Mat4 lhs = k_endo(b) * k_endo(c);
      const Mat4 rhs = -metric_lambda2(b, c) * Mat4::Identity() + half_sign(h) * k_endo(cross(b, c));
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(CurvatureOperator, CurvatureOnBivectorsAgreesWithOperator) {
  // g(R(a)b, c) = +- g(R(a), b x c), sign by the half of b and c; 30 points per chart
  std::mt19937_64 rng(7);
  for (const auto& e : default_catalog()) {
    double worst = 0.0;
    for (int n = 0; n < 30; ++n) {
      const FrameCurvature fc = frame_curvature(e.chart, random_point(e.chart, rng));
      const Vec6 a = random_vec6(rng);
      for (Half h : {Half::Plus, Half::Minus}) {
        const Vec6 b = random_in_half(h, rng), c = random_in_half(h, rng);
        const double lhs = fc.on_bivector(a, b).dot(c);
        const double rhs = half_sign(h) * fc.apply(a).dot(cross(b, c));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    EXPECT_LT(worst, 1e-6) << e.id;
  }
}

TEST(CurvatureOperator, SymmetricAndMatchesTensor) {
  std::mt19937_64 rng(8);
  for (const auto& e : default_catalog()) {
    const Point x = random_point(e.chart, rng);
    const FrameCurvature fc = frame_curvature(e.chart, x);
    EXPECT_LT((fc.op - fc.op.transpose()).cwiseAbs().maxCoeff(), 1e-10) << e.id;
    const Vec4 u = random_vec4(rng), v = random_vec4(rng), z = random_vec4(rng), w = random_vec4(rng);
    // g(R(X ^ Y), Z ^ T) = g(R(X,Y)Z, T)
    double direct = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) direct += fc(a, b, c, d) * u[a] * v[b] * z[c] * w[d];
    EXPECT_NEAR(fc.apply(wedge(u, v)).dot(wedge(z, w)), direct, 1e-9) << e.id;
  }
}

TEST(CurvatureOperator, FlatIsZero) {
  EXPECT_EQ(curvature_operator(make_flat(), Point::Zero()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CurvatureOperator, UnitSphereIsTwiceIdentity) {
  // constant curvature 1 under the half-determinant metric: eigenvalue s/6 = 2 on both halves
  std::mt19937_64 rng(9);
  const MetricChart s = make_round_sphere(1.0);
  for (int n = 0; n < 10; ++n) {
    const Mat6 op = curvature_operator(s, random_point(s, rng));
    EXPECT_LT((op - 2.0 * Mat6::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Decomposition, ReconstructionAndBlockShapes) {
  std::mt19937_64 rng(10);
  for (const auto& e : default_catalog()) {
    for (int n = 0; n < 30; ++n) {
      const FrameCurvature fc = frame_curvature(e.chart, random_point(e.chart, rng));
      const CurvatureDecomposition d = decompose(fc);
      EXPECT_LT(d.residual, 1e-6) << e.id;
      EXPECT_LT(std::abs(d.weyl_plus.trace()) + std::abs(d.weyl_minus.trace()), 1e-9) << e.id;
      // B exchanges the halves
      EXPECT_LT(d.traceless_ricci.topLeftCorner(3, 3).cwiseAbs().maxCoeff(), 1e-9) << e.id;
      EXPECT_LT(d.traceless_ricci.bottomRightCorner(3, 3).cwiseAbs().maxCoeff(), 1e-9) << e.id;
      EXPECT_LT((d.weyl_plus - d.weyl_plus.transpose()).cwiseAbs().maxCoeff(), 1e-9) << e.id;
    }
  }
}

TEST(Decomposition, TracelessRicciMatchesWedgeFormula) {
  // B(X ^ Y) = rho X ^ Y + X ^ rho Y - s/2 X ^ Y
  std::mt19937_64 rng(11);
  const MetricChart c = make_s2xs2(1.0, 2.0);
  const FrameCurvature fc = frame_curvature(c, random_point(c, rng));
  const CurvatureDecomposition d = decompose(fc);
  for (int n = 0; n < 20; ++n) {
    const Vec4 x = random_vec4(rng), y = random_vec4(rng);
    const Vec6 expected = wedge(fc.rho * x, y) + wedge(x, fc.rho * y) - 0.5 * fc.scalar * wedge(x, y);
    EXPECT_LT((d.traceless_ricci * wedge(x, y) - expected).norm(), 1e-10);
  }
  EXPECT_GT(d.traceless_ricci.norm(), 0.1);
}

TEST(Decomposition, FlatAllZeroAndSphereScalarOnly) {
  const CurvatureDecomposition f = decompose(frame_curvature(make_flat(), Point::Zero()));
  EXPECT_EQ(f.full.cwiseAbs().maxCoeff(), 0.0);
  const CurvatureDecomposition s = decompose(frame_curvature(make_round_sphere(), Point(0.1, 0.2, 0.3, -0.1)));
  EXPECT_TRUE(s.einstein(1e-9));
  EXPECT_TRUE(s.self_dual(1e-9));
  EXPECT_TRUE(s.anti_self_dual(1e-9));
  EXPECT_NEAR(s.scalar, 12.0, 1e-10);
}

TEST(Decomposition, ComplexProjectivePlaneIsOneSided) {
  // complex orientation: W- vanishes; the reversed orientation swaps the halves
  const Point x(0.3, -0.2, 0.1, 0.4);
  const CurvatureDecomposition d = decompose(frame_curvature(make_cp2(1), x));
  EXPECT_TRUE(d.einstein(1e-9));
  EXPECT_LT(d.weyl_minus.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_GT(d.weyl_plus.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_NEAR(d.weyl_plus.trace(), 0.0, 1e-9);
  const CurvatureDecomposition r = decompose(frame_curvature(make_cp2(-1), x));
  EXPECT_LT(r.weyl_plus.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_GT(r.weyl_minus.cwiseAbs().maxCoeff(), 1.0);
}
