#pragma once

#include "twistor/bivector.hpp"
#include "twistor/chart.hpp"

#include <functional>
#include <sstream>

namespace twistor {

/// Fibre-scaling parameters of the metric G_t.
struct MetricParams {
  double t1 = 1.0;
  double t2 = 1.0;

  MetricParams() = default;
  MetricParams(double a, double b) : t1(a), t2(b) {
    if (!(t1 > 0.0 && t2 > 0.0)) {
      std::ostringstream os;
      os << "metric parameters must be positive, got (" << t1 << ", " << t2 << ")";
      throw Error(ErrorKind::Precondition, os.str());
    }
  }
};

/// Index of one of the four almost product structures.
class ProductStructureIndex {
 public:
  explicit ProductStructureIndex(int nu) : nu_(nu) {
    if (nu < 1 || nu > 4) throw Error(ErrorKind::Precondition, "structure index must be in 1..4");
  }
  int value() const { return nu_; }
  /// +1 for 1, 2 and -1 for 3, 4.
  double epsilon() const { return nu_ <= 2 ? 1.0 : -1.0; }
  /// (-1)^(nu+1)
  double minus_sign() const { return nu_ % 2 == 1 ? 1.0 : -1.0; }
  /// (-1)^nu
  double parity() const { return -minus_sign(); }

 private:
  int nu_;
};

/// A point of the product of the two twistor spaces: unit bivectors sigma+ and sigma-
/// over a base point, in split coefficients of `frame`.
struct TwistorPoint {
  OrthonormalFrame frame;
  Vec3 plus = Vec3::UnitX();
  Vec3 minus = Vec3::UnitX();

  const Point& x() const { return frame.x; }
  Vec6 sigma() const { return from_halves(plus, minus); }
};

inline TwistorPoint make_twistor_point(const OrthonormalFrame& frame, const Vec3& plus, const Vec3& minus) {
  const double np = plus.norm();
  const double nm = minus.norm();
  if (!(np > 0.0 && nm > 0.0)) throw Error(ErrorKind::Precondition, "twistor point needs nonzero bivectors");
  return TwistorPoint{frame, plus / np, minus / nm};
}

inline void validate(const TwistorPoint& k, double tol = 1e-10) {
  if (std::abs(k.plus.norm() - 1.0) > tol || std::abs(k.minus.norm() - 1.0) > tol) {
    throw Error(ErrorKind::Precondition, "twistor point bivectors must be unit");
  }
}

/// Tangent vector of the product bundle at a point, split as X^h + (V+, V-).
/// X is in frame components, V+ and V- in split coefficients (each orthogonal to sigma+-).
struct PTangent {
  Vec4 h = Vec4::Zero();
  Vec3 vp = Vec3::Zero();
  Vec3 vm = Vec3::Zero();

  static PTangent horizontal(const Vec4& x) { return {x, Vec3::Zero(), Vec3::Zero()}; }
  static PTangent vertical(const Vec3& vp, const Vec3& vm) { return {Vec4::Zero(), vp, vm}; }

  PTangent& operator+=(const PTangent& o) {
    h += o.h;
    vp += o.vp;
    vm += o.vm;
    return *this;
  }
  friend PTangent operator+(PTangent a, const PTangent& b) { return a += b; }
  friend PTangent operator-(const PTangent& a, const PTangent& b) { return {a.h - b.h, a.vp - b.vp, a.vm - b.vm}; }
  friend PTangent operator*(double s, const PTangent& a) { return {s * a.h, s * a.vp, s * a.vm}; }

  bool is_horizontal() const { return vp.isZero(0.0) && vm.isZero(0.0); }
  bool is_vertical() const { return h.isZero(0.0); }
  PTangent horizontal_part() const { return horizontal(h); }
  PTangent vertical_part() const { return vertical(vp, vm); }

  Eigen::Matrix<double, 10, 1> stacked() const {
    Eigen::Matrix<double, 10, 1> r;
    r << h, vp, vm;
    return r;
  }
};

struct VerticalVector {
  Vec3 plus = Vec3::Zero();
  Vec3 minus = Vec3::Zero();
  PTangent tangent() const { return PTangent::vertical(plus, minus); }
};

/// P = K_{sigma+} K_{sigma-}: an involution of the tangent space with 2-dimensional eigenspaces.
inline Mat4 p_kappa(const TwistorPoint& k) { return k_plus(k.plus) * k_minus(k.minus); }

/// Oriented orthonormal basis with sigma+- = E1^E2 +- E3^E4.
struct AdaptedFrame {
  /// Columns: frame components (w.r.t. the point's frame) of E1..E4.
  Mat4 basis = Mat4::Identity();
  /// Columns: coordinate components of E1..E4.
  Mat4 coordinates = Mat4::Identity();

  Vec4 operator[](int i) const { return basis.col(i); }
};

namespace detail {

/// Unit vector in the range of the projector, taken from the first basis vector with a
/// non-negligible projection.
inline Vec4 first_projected(const Mat4& projector) {
  for (int i = 0; i < 4; ++i) {
    const Vec4 v = projector.col(i);
    if (v.norm() > 0.5) return v.normalized();
  }
  // a rank-2 orthogonal projector always has a column of length >= 1/sqrt(2)
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (projector.col(i).norm() > projector.col(best).norm()) best = i;
  return projector.col(best).normalized();
}

}  // namespace detail

inline AdaptedFrame adapted_frame(const TwistorPoint& k) {
  const Mat4 p = p_kappa(k);
  const Mat4 kp = k_plus(k.plus);
  const Mat4 neg = 0.5 * (Mat4::Identity() - p);
  const Mat4 pos = 0.5 * (Mat4::Identity() + p);
  AdaptedFrame f;
  const Vec4 e1 = detail::first_projected(neg);
  const Vec4 e2 = kp * e1;
  Vec4 e3 = detail::first_projected(pos);
  Vec4 e4 = kp * e3;
  f.basis.col(0) = e1;
  f.basis.col(1) = e2;
  f.basis.col(2) = e3;
  f.basis.col(3) = e4;
  if (f.basis.determinant() < 0.0) {
    e3 = -e3;
    f.basis.col(2) = e3;
  }
  f.coordinates = k.frame.e * f.basis;
  return f;
}

/// The almost product structure K_nu on a tangent vector.
inline PTangent k_nu(const ProductStructureIndex& nu, const TwistorPoint& k, const PTangent& a) {
  PTangent r;
  r.h = p_kappa(k) * a.h;
  r.vp = nu.epsilon() * a.vp;
  r.vm = nu.epsilon() * nu.minus_sign() * a.vm;
  return r;
}

inline PTangent k_nu(int nu, const TwistorPoint& k, const PTangent& a) {
  return k_nu(ProductStructureIndex(nu), k, a);
}

/// G_t(X^h + V, Y^h + W) = g(X,Y) + t1 g(V+,W+) + t2 g(V-,W-).
inline double g_t(const MetricParams& t, const PTangent& a, const PTangent& b) {
  return a.h.dot(b.h) + t.t1 * a.vp.dot(b.vp) + t.t2 * a.vm.dot(b.vm);
}

inline double norm_t(const MetricParams& t, const PTangent& a) { return std::sqrt(g_t(t, a, a)); }

/// Vertical vector a+- - g(a+-, sigma+-) sigma+-.
inline VerticalVector vertical_projection(const TwistorPoint& k, const Vec3& a_plus, const Vec3& a_minus) {
  return {a_plus - a_plus.dot(k.plus) * k.plus, a_minus - a_minus.dot(k.minus) * k.minus};
}

/// Orthonormal basis (two vectors) of the orthogonal complement of a unit 3-vector.
inline std::array<Vec3, 2> complement_basis(const Vec3& s) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(s[i]) < std::abs(s[axis])) axis = i;
  Vec3 a = Vec3::Unit(axis) - s[axis] * s;
  a.normalize();
  return {a, s.cross(a)};
}

/// Matrix of the 8x8 operator K_nu in the frame (E1^h..E4^h, V+_1, V+_2, V-_1, V-_2)
/// built from complement bases; used for eigenspace counts.
inline Eigen::Matrix<double, 8, 8> k_nu_matrix(const ProductStructureIndex& nu, const TwistorPoint& k) {
  const auto bp = complement_basis(k.plus);
  const auto bm = complement_basis(k.minus);
  std::array<PTangent, 8> basis;
  for (int i = 0; i < 4; ++i) basis[i] = PTangent::horizontal(Vec4::Unit(i));
  basis[4] = PTangent::vertical(bp[0], Vec3::Zero());
  basis[5] = PTangent::vertical(bp[1], Vec3::Zero());
  basis[6] = PTangent::vertical(Vec3::Zero(), bm[0]);
  basis[7] = PTangent::vertical(Vec3::Zero(), bm[1]);
  const MetricParams unit(1.0, 1.0);
  Eigen::Matrix<double, 8, 8> m;
  for (int j = 0; j < 8; ++j) {
    const PTangent img = k_nu(nu, k, basis[j]);
    for (int i = 0; i < 8; ++i) m(i, j) = g_t(unit, basis[i], img);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Coordinate model (x~_alpha, y+_j, y-_j) of the bundle over a chart.

/// Oriented orthonormal frame field on the chart; columns are coordinate components.
using FrameField = std::function<OrthonormalFrame(const Point&)>;

inline FrameField canonical_frame_field(const MetricChart& chart) {
  return [chart](const Point& x) { return orthonormal_frame(chart, x); };
}

/// Coordinate components B^{ab} of a bivector given in split coefficients of a frame.
inline Mat4 bivector_coordinates(const OrthonormalFrame& f, const Vec6& c) {
  return f.e * skew_of(c) * f.e.transpose();
}

inline Vec6 bivector_from_coordinates(const OrthonormalFrame& f, const Mat4& b) {
  const Mat4 einv = f.e.inverse();
  return split_of(einv * b * einv.transpose());
}

struct BundleCoordinates {
  Point x = Point::Zero();
  Vec3 y_plus = Vec3::Zero();
  Vec3 y_minus = Vec3::Zero();
};

/// y+-_j = g(sigma+-, s+-_j) against the split basis of `field` at the base point.
inline BundleCoordinates coordinates_on_p(const FrameField& field, const TwistorPoint& k) {
  const OrthonormalFrame f = field(k.x());
  const Mat4 b = bivector_coordinates(k.frame, k.sigma());
  const Vec6 y = bivector_from_coordinates(f, b);
  return {k.x(), y.head<3>(), y.tail<3>()};
}

inline TwistorPoint point_from_coordinates(const FrameField& field, const BundleCoordinates& c) {
  const OrthonormalFrame f = field(c.x);
  const double np = c.y_plus.norm();
  const double nm = c.y_minus.norm();
  if (std::abs(np - 1.0) > 1e-9 || std::abs(nm - 1.0) > 1e-9) {
    throw Error(ErrorKind::Precondition, "bundle coordinates must lie on the unit spheres");
  }
  return TwistorPoint{f, c.y_plus, c.y_minus};
}

/// Connection matrix on the split basis of the canonical frame field along coordinate
/// direction m: (A_m y)_k = sum_j y_j g(nabla_m s_j, s_k). Block diagonal.
inline std::array<Mat6, 4> split_connection(const FrameConnection& fc) {
  std::array<Mat6, 4> a;
  for (int m = 0; m < 4; ++m) a[m] = bivector_action(fc.theta[m].transpose());
  return a;
}

/// Horizontal lift at k of a coordinate vector X, as components along
/// (d/dx~_1..4, d/dy+_1..3, d/dy-_1..3) of the canonical frame field's coordinates.
inline Eigen::Matrix<double, 10, 1> horizontal_lift(const MetricChart& chart, const TwistorPoint& k,
                                                    const Vec4& x_coordinates) {
  const FrameConnection fc = frame_connection(chart, k.x());
  const auto conn = split_connection(fc);
  const Vec6 y = bivector_from_coordinates(fc.frame, bivector_coordinates(k.frame, k.sigma()));
  Vec6 dy = Vec6::Zero();
  for (int m = 0; m < 4; ++m) dy -= x_coordinates[m] * (conn[m] * y);
  Eigen::Matrix<double, 10, 1> r;
  r << x_coordinates, dy;
  return r;
}

}  // namespace twistor
