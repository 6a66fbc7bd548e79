#pragma once

#include "twistor/jet.hpp"
#include "twistor/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

namespace twistor {

/// Metric components and their partials at one chart point.
/// dg[c](a,b) = d_c g_ab, d2g[c][d](a,b) = d_c d_d g_ab.
struct MetricSample {
  Mat4 g = Mat4::Zero();
  std::array<Mat4, 4> dg{};
  std::array<std::array<Mat4, 4>, 4> d2g{};
};

using MetricFn = std::function<Mat4(const Point&)>;
using MetricJetFn = std::function<MetricSample(const Point&)>;

/// Coordinate patch of an oriented Riemannian 4-manifold.
///
/// Charts built from a jet function carry exact partials (analytic tier);
/// charts built from a plain metric function fall back to Richardson-extrapolated
/// central differences (finite-difference tier). Immutable after construction.
class MetricChart {
 public:
  MetricChart(std::string id, Vec4 lower, Vec4 upper, MetricFn metric, MetricJetFn jet = {},
              int orientation = 1)
      : id_(std::move(id)),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        metric_(std::move(metric)),
        jet_(std::move(jet)),
        orientation_(orientation >= 0 ? 1 : -1) {
    if (!metric_) throw Error(ErrorKind::Precondition, "chart '" + id_ + "' has no metric");
    for (int i = 0; i < 4; ++i) {
      if (!(lower_[i] < upper_[i])) {
        throw Error(ErrorKind::Precondition, "chart '" + id_ + "' has an empty domain");
      }
    }
  }

  const std::string& id() const { return id_; }
  const Vec4& lower() const { return lower_; }
  const Vec4& upper() const { return upper_; }
  int orientation() const { return orientation_; }
  bool analytic() const { return static_cast<bool>(jet_); }
  ToleranceTier tier() const {
    return analytic() ? ToleranceTier::Analytic : ToleranceTier::FiniteDifference;
  }

  /// Same metric, opposite orientation.
  MetricChart flipped() const {
    MetricChart c = *this;
    c.orientation_ = -orientation_;
    return c;
  }

  MetricChart with_id(std::string id) const {
    MetricChart c = *this;
    c.id_ = std::move(id);
    return c;
  }

  /// Finite-difference step for first partials along axis i.
  double first_step(int i) const { return 1e-5 * (upper_[i] - lower_[i]); }
  /// Step for second partials; combined with Richardson extrapolation.
  double second_step(int i) const { return 1e-3 * (upper_[i] - lower_[i]); }

  /// Width of the stencil that must fit inside the domain around a point.
  double margin(int i) const { return analytic() ? 0.0 : 2.0 * second_step(i); }

  bool contains(const Point& x, double extra = 0.0) const {
    for (int i = 0; i < 4; ++i) {
      const double m = margin(i) + extra * (upper_[i] - lower_[i]);
      if (!(x[i] > lower_[i] + m && x[i] < upper_[i] - m)) return false;
    }
    return true;
  }

  void require_inside(const Point& x) const {
    if (!contains(x)) {
      std::ostringstream os;
      os << "point (" << x.transpose() << ") not inside chart '" << id_ << "'";
      throw Error(ErrorKind::OutsideDomain, os.str());
    }
  }

  Mat4 metric(const Point& x) const {
    require_inside(x);
    return metric_(x);
  }

  MetricSample sample(const Point& x) const {
    require_inside(x);
    MetricSample s = jet_ ? jet_(x) : finite_difference_sample(x);
    check_positive(s.g, x);
    return s;
  }

 private:
  void check_positive(const Mat4& g, const Point& x) const {
    Eigen::LLT<Mat4> llt(g);
    if (llt.info() != Eigen::Success || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * g.norm()) {
      std::ostringstream os;
      os << "metric of chart '" << id_ << "' is not positive definite at (" << x.transpose() << ")";
      throw Error(ErrorKind::NotPositiveDefinite, os.str());
    }
  }

  MetricSample finite_difference_sample(const Point& x) const {
    MetricSample s;
    s.g = metric_(x);
    auto shifted = [&](int i, double hi, int j, double hj) {
      Point y = x;
      y[i] += hi;
      y[j] += hj;
      return metric_(y);
    };
    for (int i = 0; i < 4; ++i) {
      const double h = first_step(i);
      auto central = [&](double step) {
        return Mat4((shifted(i, step, i, 0.0) - shifted(i, -step, i, 0.0)) / (2.0 * step));
      };
      s.dg[i] = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        const double hi = second_step(i);
        const double hj = second_step(j);
        auto second = [&](double f) {
          const double a = f * hi;
          const double b = f * hj;
          if (i == j) {
            return Mat4((shifted(i, a, i, 0.0) - 2.0 * s.g + shifted(i, -a, i, 0.0)) / (a * a));
          }
          return Mat4((shifted(i, a, j, b) - shifted(i, a, j, -b) - shifted(i, -a, j, b) +
                       shifted(i, -a, j, -b)) /
                      (4.0 * a * b));
        };
        s.d2g[i][j] = (4.0 * second(0.5) - second(1.0)) / 3.0;
        s.d2g[j][i] = s.d2g[i][j];
      }
    }
    return s;
  }

  std::string id_;
  Vec4 lower_;
  Vec4 upper_;
  MetricFn metric_;
  MetricJetFn jet_;
  int orientation_;
};

/// Builds an analytic-tier chart from a metric written generically over its scalar type.
/// `fn` maps std::array<S,4> to std::array<std::array<S,4>,4> for S = double and S = Jet.
template <class Fn>
MetricChart make_jet_chart(std::string id, Vec4 lower, Vec4 upper, Fn fn, int orientation = 1) {
  auto shared = std::make_shared<Fn>(std::move(fn));
  MetricFn metric = [shared](const Point& x) {
    const std::array<double, 4> p{x[0], x[1], x[2], x[3]};
    const auto m = (*shared)(p);
    Mat4 g;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) g(a, b) = m[a][b];
    return Mat4(0.5 * (g + g.transpose()));
  };
  MetricJetFn jet = [shared](const Point& x) {
    std::array<Jet, 4> p;
    for (int i = 0; i < 4; ++i) p[i] = Jet::variable(i, x[i]);
    const auto m = (*shared)(p);
    MetricSample s;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const Jet& e = m[a][b];
        s.g(a, b) = e.v;
        for (int c = 0; c < 4; ++c) {
          s.dg[c](a, b) = e.d[c];
          for (int d = 0; d < 4; ++d) s.d2g[c][d](a, b) = e.h[c][d];
        }
      }
    }
    s.g = 0.5 * (s.g + s.g.transpose());
    return s;
  };
  return MetricChart(std::move(id), std::move(lower), std::move(upper), std::move(metric),
                     std::move(jet), orientation);
}

/// Christoffel symbols: gamma[c](a,b) = Gamma^c_{ab}.
using Christoffel = std::array<Mat4, 4>;

namespace detail {

inline Christoffel christoffel_from(const MetricSample& s, const Mat4& ginv) {
  // lowered[k](a,b) = Gamma_{k a b}
  std::array<Mat4, 4> lowered;
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        lowered[k](a, b) = 0.5 * (s.dg[a](k, b) + s.dg[b](k, a) - s.dg[k](a, b));
  Christoffel gamma;
  for (int c = 0; c < 4; ++c) {
    gamma[c].setZero();
    for (int k = 0; k < 4; ++k) gamma[c] += ginv(c, k) * lowered[k];
  }
  return gamma;
}

}  // namespace detail

inline Christoffel christoffel(const MetricChart& chart, const Point& x) {
  const MetricSample s = chart.sample(x);
  return detail::christoffel_from(s, s.g.inverse());
}

/// Riemann tensor with R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y], the opposite of the
/// more common sign. With this sign g(R(X,Y)X,Y) is the sectional curvature numerator,
/// positive on round spheres.
struct CurvatureTensor {
  Point x = Point::Zero();
  Mat4 g = Mat4::Identity();
  /// r[a*64 + b*16 + c*4 + d] = g(R(d_a, d_b) d_c, d_d).
  std::array<double, 256> r{};
  /// Ricci operator as a (1,1) tensor: g(rho X, Y) = Ric(X, Y).
  Mat4 ricci_operator = Mat4::Zero();
  Mat4 ricci = Mat4::Zero();
  double scalar = 0.0;

  double operator()(int a, int b, int c, int d) const { return r[a * 64 + b * 16 + c * 4 + d]; }
  double& at(int a, int b, int c, int d) { return r[a * 64 + b * 16 + c * 4 + d]; }

  /// Sectional curvature of the plane spanned by coordinate vectors u, v.
  double sectional(const Vec4& u, const Vec4& v) const {
    double num = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) num += (*this)(a, b, c, d) * u[a] * v[b] * u[c] * v[d];
    const double area = u.dot(g * u) * v.dot(g * v) - std::pow(u.dot(g * v), 2);
    return num / area;
  }
};

inline CurvatureTensor riemann(const MetricChart& chart, const Point& x) {
  const MetricSample s = chart.sample(x);
  const Mat4 ginv = s.g.inverse();
  const Christoffel gamma = detail::christoffel_from(s, ginv);

  // dgamma[m][c](a,b) = d_m Gamma^c_{ab}
  std::array<Christoffel, 4> dgamma;
  for (int m = 0; m < 4; ++m) {
    const Mat4 dginv = -ginv * s.dg[m] * ginv;
    for (int c = 0; c < 4; ++c) {
      dgamma[m][c].setZero();
      for (int k = 0; k < 4; ++k) {
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            const double low = 0.5 * (s.dg[a](k, b) + s.dg[b](k, a) - s.dg[k](a, b));
            const double dlow =
                0.5 * (s.d2g[m][a](k, b) + s.d2g[m][b](k, a) - s.d2g[m][k](a, b));
            dgamma[m][c](a, b) += dginv(c, k) * low + ginv(c, k) * dlow;
          }
        }
      }
    }
  }

  CurvatureTensor t;
  t.x = x;
  t.g = s.g;
  // Common-sign components Rstd^p_{q m n} = d_m G^p_{nq} - d_n G^p_{mq} + G^p_{ml} G^l_{nq} - G^p_{nl} G^l_{mq}
  std::array<double, 256> up{};
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          double v = dgamma[m][p](n, q) - dgamma[n][p](m, q);
          for (int l = 0; l < 4; ++l) v += gamma[p](m, l) * gamma[l](n, q) - gamma[p](n, l) * gamma[l](m, q);
          up[p * 64 + q * 16 + m * 4 + n] = v;
        }
  // Our R(d_a,d_b)d_c = -Rstd^p_{c a b} d_p, lowered with g on the last slot.
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = 0.0;
          for (int p = 0; p < 4; ++p) v -= s.g(d, p) * up[p * 64 + c * 16 + a * 4 + b];
          t.at(a, b, c, d) = v;
        }
  // Ric(Y,Z) = trace of X -> R(X,Y)X paired with Z
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) v += ginv(a, c) * t(a, b, c, d);
      t.ricci(b, d) = v;
    }
  t.ricci = 0.5 * (t.ricci + t.ricci.transpose());
  t.ricci_operator = ginv * t.ricci;
  t.scalar = t.ricci_operator.trace();
  return t;
}

/// Oriented orthonormal frame: columns of `e` are the coordinate components of E_1..E_4.
struct OrthonormalFrame {
  Point x = Point::Zero();
  Mat4 e = Mat4::Identity();
  Mat4 gram = Mat4::Identity();

  /// Frame components of a coordinate vector.
  Vec4 to_frame(const Vec4& v) const { return e.partialPivLu().solve(v); }
  Vec4 to_coordinates(const Vec4& f) const { return e * f; }
};

namespace detail {

/// Gram-Schmidt frame E = L^{-T} for g = L L^T; E_3 and E_4 swap for reversed orientation.
inline Mat4 gram_schmidt(const Mat4& g, int orientation) {
  const Mat4 l = Eigen::LLT<Mat4>(g).matrixL();
  Mat4 e = l.transpose().inverse();
  if (orientation < 0) e.col(2).swap(e.col(3));
  return e;
}

inline Mat4 lower_half(const Mat4& m) {
  Mat4 r = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    r(i, i) = 0.5 * m(i, i);
    for (int j = 0; j < i; ++j) r(i, j) = m(i, j);
  }
  return r;
}

}  // namespace detail

inline OrthonormalFrame orthonormal_frame(const MetricChart& chart, const Point& x) {
  const Mat4 g = chart.metric(x);
  Eigen::LLT<Mat4> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "degenerate metric in chart '" + chart.id() + "'");
  }
  OrthonormalFrame f;
  f.x = x;
  f.e = detail::gram_schmidt(g, chart.orientation());
  f.gram = f.e.transpose() * g * f.e;
  return f;
}

/// Frame, Christoffel symbols and the Levi-Civita connection matrices of the
/// Gram-Schmidt frame field at a point: nabla_{d_m} E_a = sum_b theta[m](a,b) E_b.
struct FrameConnection {
  OrthonormalFrame frame;
  Christoffel gamma{};
  std::array<Mat4, 4> de{};
  std::array<Mat4, 4> theta{};

  /// theta(X) for X given in frame components.
  Mat4 along(const Vec4& x_frame) const {
    const Vec4 xc = frame.e * x_frame;
    Mat4 t = Mat4::Zero();
    for (int m = 0; m < 4; ++m) t += xc[m] * theta[m];
    return t;
  }
};

inline FrameConnection frame_connection(const MetricChart& chart, const Point& x) {
  const MetricSample s = chart.sample(x);
  const Mat4 ginv = s.g.inverse();
  FrameConnection fc;
  fc.gamma = detail::christoffel_from(s, ginv);
  fc.frame.x = x;
  const Mat4 l = Eigen::LLT<Mat4>(s.g).matrixL();
  const Mat4 linv = l.inverse();
  Mat4 e = linv.transpose();
  for (int m = 0; m < 4; ++m) {
    const Mat4 dl = l * detail::lower_half(linv * s.dg[m] * linv.transpose());
    fc.de[m] = -e * dl.transpose() * e;
  }
  if (chart.orientation() < 0) {
    e.col(2).swap(e.col(3));
    for (auto& d : fc.de) d.col(2).swap(d.col(3));
  }
  fc.frame.e = e;
  fc.frame.gram = e.transpose() * s.g * e;
  for (int m = 0; m < 4; ++m) {
    Mat4 gm;
    for (int c = 0; c < 4; ++c)
      for (int b = 0; b < 4; ++b) gm(c, b) = fc.gamma[c](m, b);
    const Mat4 cov = fc.de[m] + gm * e;  // columns: nabla_m E_a in coordinates
    fc.theta[m] = (e.transpose() * s.g * cov).transpose();
  }
  return fc;
}

}  // namespace twistor
