#pragma once

#include "twistor/twistor.hpp"

#include <Eigen/QR>

// Independent check of the closed forms: the bundle is modelled in the coordinates
// (x~, u+, u-) where u+- are orthographic coordinates on the two unit spheres of
// split coefficients y+- against the canonical frame field. G_t and F_{t,nu} are assembled
// as 8x8 matrices, the Christoffel symbols of G_t and the covariant derivative of F are
// taken by central differences in those coordinates.

namespace twistor {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat10x8 = Eigen::Matrix<double, 10, 8>;

/// Orthographic chart of the unit 2-sphere: the coordinate `axis` is solved for, with sign `sign`.
struct SphereChart {
  int axis = 0;
  double sign = 1.0;

  static SphereChart around(const Vec3& y) {
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(y[i]) > std::abs(y[k])) k = i;
    return {k, y[k] >= 0.0 ? 1.0 : -1.0};
  }

  int other(int j) const { return j < axis ? j : j + 1; }

  Eigen::Vector2d chart_of(const Vec3& y) const { return {y[other(0)], y[other(1)]}; }

  Vec3 point(const Eigen::Vector2d& u) const {
    const double q = 1.0 - u.squaredNorm();
    if (!(q > 0.0)) throw Error(ErrorKind::DegenerateChart, "orthographic sphere chart left its domain");
    Vec3 y;
    y[axis] = sign * std::sqrt(q);
    y[other(0)] = u[0];
    y[other(1)] = u[1];
    return y;
  }

  Eigen::Matrix<double, 3, 2> jacobian(const Eigen::Vector2d& u) const {
    const double root = std::sqrt(1.0 - u.squaredNorm());
    Eigen::Matrix<double, 3, 2> j = Eigen::Matrix<double, 3, 2>::Zero();
    j(other(0), 0) = 1.0;
    j(other(1), 1) = 1.0;
    j(axis, 0) = -sign * u[0] / root;
    j(axis, 1) = -sign * u[1] / root;
    return j;
  }
};

/// Metric and fundamental form of (P, G_t, K_nu) in the coordinates xi = (x~, u+, u-).
struct CoordinateModel {
  MetricChart chart;
  ProductStructureIndex nu{1};
  MetricParams t;
  SphereChart plus_chart;
  SphereChart minus_chart;

  struct Sample {
    /// Columns: (horizontal frame components, V+ coefficients, V- coefficients) of d/dxi_i.
    Mat10x8 psi = Mat10x8::Zero();
    Mat8 g = Mat8::Zero();
    Mat8 f = Mat8::Zero();
    OrthonormalFrame frame;
  };

  Sample at(const Vec8& xi) const {
    Sample s;
    const Point x = xi.head<4>();
    const FrameConnection fc = frame_connection(chart, x);
    const auto conn = split_connection(fc);
    const Eigen::Vector2d up = xi.segment<2>(4);
    const Eigen::Vector2d um = xi.segment<2>(6);
    const Vec3 yp = plus_chart.point(up);
    const Vec3 ym = minus_chart.point(um);
    const Vec6 y = from_halves(yp, ym);
    s.frame = fc.frame;
    s.psi.topLeftCorner<4, 4>() = fc.frame.e.inverse();
    for (int m = 0; m < 4; ++m) s.psi.block<6, 1>(4, m) = conn[m] * y;
    s.psi.block<3, 2>(4, 4) = plus_chart.jacobian(up);
    s.psi.block<3, 2>(7, 6) = minus_chart.jacobian(um);

    Eigen::Matrix<double, 10, 10> dg = Eigen::Matrix<double, 10, 10>::Identity();
    dg.block<3, 3>(4, 4) *= t.t1;
    dg.block<3, 3>(7, 7) *= t.t2;
    Eigen::Matrix<double, 10, 10> k = Eigen::Matrix<double, 10, 10>::Zero();
    k.topLeftCorner<4, 4>() = k_plus(yp) * k_minus(ym);
    k.block<3, 3>(4, 4) = nu.epsilon() * Mat3::Identity();
    k.block<3, 3>(7, 7) = nu.epsilon() * nu.minus_sign() * Mat3::Identity();
    s.g = s.psi.transpose() * dg * s.psi;
    s.f = s.psi.transpose() * k.transpose() * dg * s.psi;
    return s;
  }
};

/// Covariant derivative data of F at one point of the coordinate model.
struct OracleEvaluation {
  CoordinateModel model;
  Vec8 xi = Vec8::Zero();
  CoordinateModel::Sample center;
  /// gamma[d](a,b) = Christoffel symbol Gamma^d_ab of G_t.
  std::array<Mat8, 8> gamma{};
  /// df[a](b,c) = (D_a F)_bc.
  std::array<Mat8, 8> df{};

  /// Coordinate components of a tangent vector given at the twistor point.
  Vec8 coordinates(const TwistorPoint& k, const PTangent& v) const {
    const Vec4 hc = center.frame.to_frame(k.frame.e * v.h);
    const Vec6 vc = bivector_from_coordinates(center.frame, bivector_coordinates(k.frame, from_halves(v.vp, v.vm)));
    Eigen::Matrix<double, 10, 1> target;
    target << hc, vc;
    return center.psi.colPivHouseholderQr().solve(target);
  }

  double value(const Vec8& a, const Vec8& b, const Vec8& c) const {
    double v = 0.0;
    for (int i = 0; i < 8; ++i)
      if (a[i] != 0.0) v += a[i] * b.dot(df[i] * c);
    return v;
  }
};

namespace detail {

/// Coordinates of k in a model whose sphere charts are centred on k's own coefficients.
inline Vec8 model_coordinates(const CoordinateModel& m, const TwistorPoint& k, const OrthonormalFrame& canonical) {
  const Vec6 y = bivector_from_coordinates(canonical, bivector_coordinates(k.frame, k.sigma()));
  Vec8 xi;
  xi.head<4>() = k.x();
  xi.segment<2>(4) = m.plus_chart.chart_of(y.head<3>());
  xi.segment<2>(6) = m.minus_chart.chart_of(y.tail<3>());
  return xi;
}

}  // namespace detail

/// Builds the coordinate model around k and differentiates it numerically (step h on every
/// coordinate, fourth-order central stencil).
inline OracleEvaluation oracle_at(const MetricChart& chart, int nu, const MetricParams& t, const TwistorPoint& k,
                                  double h = 1e-4) {
  const OrthonormalFrame canonical = orthonormal_frame(chart, k.x());
  const Vec6 y = bivector_from_coordinates(canonical, bivector_coordinates(k.frame, k.sigma()));
  OracleEvaluation ev{CoordinateModel{chart, ProductStructureIndex(nu), t, SphereChart::around(y.head<3>()),
                                      SphereChart::around(y.tail<3>())}};
  ev.xi = detail::model_coordinates(ev.model, k, canonical);
  ev.center = ev.model.at(ev.xi);

  std::array<Mat8, 8> dgm{};
  std::array<Mat8, 8> dfm{};
  for (int a = 0; a < 8; ++a) {
    Mat8 gsum = Mat8::Zero();
    Mat8 fsum = Mat8::Zero();
    const double weights[4] = {1.0, -8.0, 8.0, -1.0};
    const double offsets[4] = {-2.0, -1.0, 1.0, 2.0};
    for (int s = 0; s < 4; ++s) {
      Vec8 p = ev.xi;
      p[a] += offsets[s] * h;
      const auto smp = ev.model.at(p);
      gsum += weights[s] * smp.g;
      fsum += weights[s] * smp.f;
    }
    dgm[a] = gsum / (12.0 * h);
    dfm[a] = fsum / (12.0 * h);
  }
  const Mat8 ginv = ev.center.g.inverse();
  for (int d = 0; d < 8; ++d) {
    Mat8 gd = Mat8::Zero();
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        double v = 0.0;
        for (int l = 0; l < 8; ++l) v += ginv(d, l) * (dgm[a](l, b) + dgm[b](l, a) - dgm[l](a, b));
        gd(a, b) = 0.5 * v;
      }
    ev.gamma[d] = gd;
  }
  const Mat8& f = ev.center.f;
  for (int a = 0; a < 8; ++a) {
    Mat8 m = dfm[a];
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        double v = 0.0;
        for (int d = 0; d < 8; ++d) v += ev.gamma[d](a, b) * f(d, c) + ev.gamma[d](a, c) * f(b, d);
        m(b, c) -= v;
      }
    ev.df[a] = m;
  }
  return ev;
}

/// (D_A F_{t,nu})(B, C) computed through the coordinate model.
inline double numeric_df_oracle(const MetricChart& chart, int nu, const MetricParams& t, const TwistorPoint& k,
                                const PTangent& a, const PTangent& b, const PTangent& c) {
  const OracleEvaluation ev = oracle_at(chart, nu, t, k);
  return ev.value(ev.coordinates(k, a), ev.coordinates(k, b), ev.coordinates(k, c));
}

/// Largest horizontal Christoffel component Gamma^{x}_{uv} over vertical coordinate pairs;
/// zero when the fibres are totally geodesic.
inline double fibre_geodesy_defect(const OracleEvaluation& ev) {
  double worst = 0.0;
  for (int d = 0; d < 4; ++d)
    for (int a = 4; a < 8; ++a)
      for (int b = 4; b < 8; ++b) worst = std::max(worst, std::abs(ev.gamma[d](a, b)));
  return worst;
}

}  // namespace twistor
