#pragma once

#include "twistor/types.hpp"

#include <array>
#include <cmath>

// Bivectors at a point are stored by their coefficients in the split basis
// (s1+, s2+, s3+, s1-, s2-, s3-) of an oriented orthonormal frame:
//   s1 = E1^E2 +- E3^E4,  s2 = E1^E3 +- E4^E2,  s3 = E1^E4 +- E2^E3.
// The induced metric g(v1^v2, v3^v4) = det[g(vi,vj)]/2 makes this basis orthonormal,
// so the metric on bivectors is the Euclidean dot product of coefficients.
// Vectors are frame components, so g on vectors is the Euclidean dot product too.

namespace twistor {

namespace detail {

/// Skew 4x4 matrix v w^T - w v^T representing v ^ w.
inline Mat4 wedge_matrix(const Vec4& v, const Vec4& w) { return v * w.transpose() - w * v.transpose(); }

inline Vec4 unit(int i) { return Vec4::Unit(i); }

inline const std::array<Mat4, 6>& split_basis_matrices() {
  static const std::array<Mat4, 6> basis = [] {
    const Vec4 e1 = unit(0), e2 = unit(1), e3 = unit(2), e4 = unit(3);
    std::array<Mat4, 6> b;
    for (int sign = 0; sign < 2; ++sign) {
      const double pm = sign == 0 ? 1.0 : -1.0;
      b[3 * sign + 0] = wedge_matrix(e1, e2) + pm * wedge_matrix(e3, e4);
      b[3 * sign + 1] = wedge_matrix(e1, e3) + pm * wedge_matrix(e4, e2);
      b[3 * sign + 2] = wedge_matrix(e1, e4) + pm * wedge_matrix(e2, e3);
    }
    return b;
  }();
  return basis;
}

/// Wedge basis order: 12, 13, 14, 23, 24, 34.
inline constexpr std::array<std::array<int, 2>, 6> kWedgePairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

}  // namespace detail

/// Skew matrix of a bivector given by split coefficients.
inline Mat4 skew_of(const Vec6& c) {
  const auto& basis = detail::split_basis_matrices();
  Mat4 w = Mat4::Zero();
  for (int i = 0; i < 6; ++i) w += c[i] * basis[i];
  return w;
}

/// Split coefficients of a bivector given by its skew matrix.
inline Vec6 split_of(const Mat4& w) {
  const auto& basis = detail::split_basis_matrices();
  Vec6 c;
  for (int i = 0; i < 6; ++i) c[i] = 0.25 * (w.cwiseProduct(basis[i])).sum();
  return c;
}

inline Vec6 wedge(const Vec4& v, const Vec4& w) { return split_of(detail::wedge_matrix(v, w)); }

/// Split coefficients from coefficients in the wedge basis {E_a ^ E_b : a < b}.
inline Vec6 from_wedge_basis(const Vec6& w) {
  Mat4 m = Mat4::Zero();
  for (int k = 0; k < 6; ++k) {
    const auto [a, b] = detail::kWedgePairs[k];
    m(a, b) += w[k];
    m(b, a) -= w[k];
  }
  return split_of(m);
}

inline Vec6 to_wedge_basis(const Vec6& c) {
  const Mat4 m = skew_of(c);
  Vec6 w;
  for (int k = 0; k < 6; ++k) w[k] = m(detail::kWedgePairs[k][0], detail::kWedgePairs[k][1]);
  return w;
}

/// Bivector at a base point, in split coefficients of the frame at that point.
struct Bivector {
  Point x = Point::Zero();
  Vec6 c = Vec6::Zero();
};

/// Induced metric on bivectors.
inline double metric_lambda2(const Vec6& a, const Vec6& b) { return a.dot(b); }

inline double metric_lambda2(const Bivector& a, const Bivector& b) {
  if ((a.x - b.x).cwiseAbs().maxCoeff() > 0.0) {
    throw Error(ErrorKind::MismatchedBasePoint, "bivectors live over different points");
  }
  return metric_lambda2(a.c, b.c);
}

/// g(v1^v2, v3^v4) = det[g(vi,vj)]/2, straight from the Gram determinant.
inline double metric_lambda2_det(const Vec4& v1, const Vec4& v2, const Vec4& v3, const Vec4& v4) {
  return 0.5 * (v1.dot(v3) * v2.dot(v4) - v1.dot(v4) * v2.dot(v3));
}

inline Vec6 hodge_star(const Vec6& a) {
  Vec6 r = a;
  r.tail<3>() *= -1.0;
  return r;
}

struct SelfDualSplit {
  Vec6 plus = Vec6::Zero();
  Vec6 minus = Vec6::Zero();
};

inline SelfDualSplit sd_split(const Vec6& a) {
  SelfDualSplit s;
  s.plus = 0.5 * (a + hodge_star(a));
  s.minus = 0.5 * (a - hodge_star(a));
  return s;
}

inline Vec6 from_halves(const Vec3& plus, const Vec3& minus) {
  Vec6 r;
  r << plus, minus;
  return r;
}
inline Vec6 plus_part(const Vec3& v) { return from_halves(v, Vec3::Zero()); }
inline Vec6 minus_part(const Vec3& v) { return from_halves(Vec3::Zero(), v); }

/// Skew endomorphism K_a with g(K_a X, Y) = 2 g(a, X ^ Y).
inline Mat4 k_endo(const Vec6& a) { return -skew_of(a); }
inline Mat4 k_plus(const Vec3& a) { return k_endo(plus_part(a)); }
inline Mat4 k_minus(const Vec3& a) { return k_endo(minus_part(a)); }

/// Bivector dual to a skew endomorphism: inverse of k_endo.
inline Vec6 bivector_of_endo(const Mat4& k) { return split_of(-0.5 * (k - k.transpose())); }

/// gamma(P, Q) = -Trace(PQ)/2 on skew endomorphisms.
inline double gamma_metric(const Mat4& p, const Mat4& q) { return -0.5 * (p * q).trace(); }

enum class Half { Plus, Minus };

/// Which half a bivector lies in; throws if it has components in both.
inline Half half_of(const Vec6& a, double tol = 1e-12) {
  const double scale = std::max(1.0, a.norm());
  const bool has_plus = a.head<3>().norm() > tol * scale;
  const bool has_minus = a.tail<3>().norm() > tol * scale;
  if (has_plus && has_minus) throw Error(ErrorKind::MixedHalves, "bivector is not in a single half");
  return has_minus ? Half::Minus : Half::Plus;
}

/// Cross product on the oriented 3-space Lambda^2_+ or Lambda^2_-.
inline Vec6 cross(const Vec6& b, const Vec6& c) {
  const bool b_zero = b.norm() == 0.0;
  const bool c_zero = c.norm() == 0.0;
  if (b_zero || c_zero) return Vec6::Zero();
  const Half hb = half_of(b);
  const Half hc = half_of(c);
  if (hb != hc) throw Error(ErrorKind::MixedHalves, "cross product of bivectors from different halves");
  if (hb == Half::Plus) return plus_part(Vec3(b.head<3>()).cross(Vec3(c.head<3>())));
  return minus_part(Vec3(b.tail<3>()).cross(Vec3(c.tail<3>())));
}

/// Matrix (in split coefficients) of the derivation a -> M.a induced on bivectors by
/// an endomorphism M of the tangent space: M.(v^w) = Mv ^ w + v ^ Mw.
inline Mat6 bivector_action(const Mat4& m) {
  const auto& basis = detail::split_basis_matrices();
  Mat6 r;
  for (int j = 0; j < 6; ++j) r.col(j) = split_of(m * basis[j] + basis[j] * m.transpose());
  return r;
}

inline Vec6 act(const Mat4& m, const Vec6& a) { return split_of(m * skew_of(a) + skew_of(a) * m.transpose()); }

/// Sign attached to a half in the cross-product identities: + on Lambda^2_+, - on Lambda^2_-.
inline double half_sign(Half h) { return h == Half::Plus ? 1.0 : -1.0; }

}  // namespace twistor
