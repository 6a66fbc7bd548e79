#pragma once

#include "twistor/curvature.hpp"
#include "twistor/twistor.hpp"

// Closed-form Levi-Civita data of (P, G_t) at a point k = (sigma+, sigma-).
// All routines take the curvature at the base point expressed in the same frame as k.

namespace twistor {

namespace detail {

inline Vec6 sigma_cross(const TwistorPoint& k, double c_plus, const Vec3& up, double c_minus, const Vec3& um) {
  return from_halves(c_plus * k.plus.cross(up), c_minus * k.minus.cross(um));
}

inline void require_same_point(const FrameCurvature& curv, const TwistorPoint& k) {
  if ((curv.frame.x - k.x()).cwiseAbs().maxCoeff() > 0.0 ||
      (curv.frame.e - k.frame.e).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::MismatchedBasePoint, "curvature and twistor point use different frames");
  }
}

}  // namespace detail

/// R(a) k = (R(a) sigma+, R(a) sigma-), from the Riemann tensor acting as a derivation.
inline VerticalVector curvature_on_kappa(const FrameCurvature& curv, const TwistorPoint& k, const Vec6& a) {
  const Mat4 r = curv.endo(a);
  return {act(r, plus_part(k.plus)).head<3>(), act(r, minus_part(k.minus)).tail<3>()};
}

inline VerticalVector curvature_on_kappa(const FrameCurvature& curv, const TwistorPoint& k, const Vec4& x,
                                         const Vec4& y) {
  return curvature_on_kappa(curv, k, wedge(x, y));
}

/// D_{X^h} Y^h at k for normal extensions of X and Y: the vertical part R(X,Y)k / 2.
inline PTangent d_hh(const FrameCurvature& curv, const TwistorPoint& k, const MetricParams&, const Vec4& x,
                     const Vec4& y) {
  const VerticalVector r = curvature_on_kappa(curv, k, x, y);
  return PTangent::vertical(0.5 * r.plus, 0.5 * r.minus);
}

/// D_V X^h = -(R(t1 sigma+ x V+ - t2 sigma- x V-) X)^h / 2.
inline PTangent d_vh(const FrameCurvature& curv, const TwistorPoint& k, const MetricParams& t, const VerticalVector& v,
                     const Vec4& x) {
  const Vec6 a = detail::sigma_cross(k, t.t1, v.plus, -t.t2, v.minus);
  return PTangent::horizontal(-0.5 * curv.endo(a) * x);
}

/// The six cases of (D_A F)(B, C) for pure horizontal/vertical arguments.
enum class DFCase { HHH = 1, HHV = 2, VHH = 3, HVV = 4, VHV = 5, VVV = 6 };

/// (D_{X^h} F)(Y^h, U).
inline double df_hhv(const FrameCurvature& curv, const TwistorPoint& k, const ProductStructureIndex& nu,
                     const MetricParams& t, const Vec4& x, const Vec4& y, const Vec3& up, const Vec3& um) {
  const Mat4 p = p_kappa(k);
  const Vec6 first = detail::sigma_cross(k, t.t1, up, nu.parity() * t.t2, um);
  const Vec6 second = detail::sigma_cross(k, t.t1, up, -t.t2, um);
  return -0.5 * nu.epsilon() * curv.apply(first).dot(wedge(x, y)) + 0.5 * curv.apply(second).dot(wedge(x, p * y));
}

/// (D_U F)(Y^h, Z^h).
inline double df_vhh(const FrameCurvature& curv, const TwistorPoint& k, const MetricParams& t, const Vec3& up,
                     const Vec3& um, const Vec4& y, const Vec4& z) {
  const Mat4 p = p_kappa(k);
  const Mat4 ksp = k_plus(k.plus);
  const Mat4 ksm = k_minus(k.minus);
  const Mat4 kup = k_plus(up);
  const Mat4 kum = k_minus(um);
  const double algebraic = ((ksm * kup + ksp * kum) * y).dot(z);
  const Vec6 a = detail::sigma_cross(k, t.t1, up, -t.t2, um);
  return algebraic + 0.5 * curv.apply(a).dot(wedge(y, p * z) - wedge(p * y, z));
}

/// A request for (D_A F_{t,nu})(B, C).
struct DFRequest {
  int nu = 1;
  MetricParams t;
  PTangent direction;
  PTangent b;
  PTangent c;
};

/// Closed-form (D_A F_{t,nu})(B, C) for arbitrary A, B, C, assembled by trilinearity
/// and symmetry in (B, C) from the two nonzero cases; the other four vanish.
inline double df(const FrameCurvature& curv, const TwistorPoint& k, const DFRequest& req) {
  detail::require_same_point(curv, k);
  const ProductStructureIndex nu(req.nu);
  const PTangent& a = req.direction;
  const PTangent& b = req.b;
  const PTangent& c = req.c;
  double v = 0.0;
  if (!a.h.isZero(0.0)) {
    v += df_hhv(curv, k, nu, req.t, a.h, b.h, c.vp, c.vm);
    v += df_hhv(curv, k, nu, req.t, a.h, c.h, b.vp, b.vm);
  }
  if (!(a.vp.isZero(0.0) && a.vm.isZero(0.0))) v += df_vhh(curv, k, req.t, a.vp, a.vm, b.h, c.h);
  return v;
}

inline double df(const FrameCurvature& curv, const TwistorPoint& k, int nu, const MetricParams& t, const PTangent& a,
                 const PTangent& b, const PTangent& c) {
  return df(curv, k, DFRequest{nu, t, a, b, c});
}

/// Which of the six pure cases a request falls in; throws for mixed arguments.
inline DFCase df_case(const DFRequest& req) {
  auto kind = [](const PTangent& v) {
    if (v.is_horizontal()) return 'h';
    if (v.is_vertical()) return 'v';
    throw Error(ErrorKind::Precondition, "argument is neither horizontal nor vertical");
  };
  const std::string key{kind(req.direction), kind(req.b), kind(req.c)};
  if (key == "hhh") return DFCase::HHH;
  if (key == "hhv" || key == "hvh") return DFCase::HHV;
  if (key == "vhh") return DFCase::VHH;
  if (key == "hvv") return DFCase::HVV;
  if (key == "vhv" || key == "vvh") return DFCase::VHV;
  return DFCase::VVV;
}

/// Nijenhuis tensor of K_nu at k, bilinear and antisymmetric; zero on two vertical arguments.
inline PTangent nijenhuis(const FrameCurvature& curv, const TwistorPoint& k, int nu_value, const MetricParams&,
                          const PTangent& a, const PTangent& b) {
  detail::require_same_point(curv, k);
  const ProductStructureIndex nu(nu_value);
  const Mat4 p = p_kappa(k);
  PTangent out;
  // N(X^h, Y^h)
  {
    const Vec4& x = a.h;
    const Vec4& y = b.h;
    const VerticalVector r1 = curvature_on_kappa(curv, k, wedge(x, y) + wedge(p * x, p * y));
    const VerticalVector r2 = curvature_on_kappa(curv, k, wedge(x, p * y) + wedge(p * x, y));
    const PTangent k2 = k_nu(nu, k, r2.tangent());
    out += r1.tangent() - k2;
  }
  // N(X^h, U) with U vertical: horizontal
  auto hv = [&](const Vec4& x, const Vec3& up, const Vec3& um) {
    const Mat4 ksp = k_plus(k.plus);
    const Mat4 ksm = k_minus(k.minus);
    const Mat4 kup = k_plus(up);
    const Mat4 kum = k_minus(um);
    const double e = nu.epsilon();
    const Mat4 m = ksp * kup + ksm * kum + e * ksm * kup + e * nu.minus_sign() * ksp * kum;
    return Vec4(-(m * x));
  };
  out.h += hv(a.h, b.vp, b.vm);
  out.h -= hv(b.h, a.vp, a.vm);
  return out;
}

/// Right-hand side of G_t(N(A,B), C) written through the covariant derivative of F.
inline double nijenhuis_via_df(const FrameCurvature& curv, const TwistorPoint& k, int nu, const MetricParams& t,
                               const PTangent& a, const PTangent& b, const PTangent& c) {
  const PTangent ka = k_nu(nu, k, a);
  const PTangent kb = k_nu(nu, k, b);
  return df(curv, k, nu, t, a, kb, c) - df(curv, k, nu, t, b, ka, c) + df(curv, k, nu, t, ka, b, c) -
         df(curv, k, nu, t, kb, a, c);
}

/// G_t((D_A K_nu)(B), C) for A = xi + K xi, B = eta + K eta (sign = +1, the +1 distribution)
/// or A = xi - K xi, B = eta - K eta (sign = -1, the -1 distribution), evaluated through df.
inline double dak_via_df(const FrameCurvature& curv, const TwistorPoint& k, int nu, const MetricParams& t,
                         const PTangent& xi, const PTangent& eta, const PTangent& c, double sign) {
  const PTangent a = xi + sign * k_nu(nu, k, xi);
  const PTangent b = eta + sign * k_nu(nu, k, eta);
  return df(curv, k, nu, t, a, b, c);
}

namespace detail {

/// Shared shape of the two explicit formulas. `c1`, `c2` weight the horizontal-output terms,
/// `d1`, `d2` the vertical-output term; `s` is +1 for D and -1 for D-perp.
inline double dak_explicit(const FrameCurvature& curv, const TwistorPoint& k, const MetricParams& t,
                           const PTangent& xi, const PTangent& eta, const PTangent& out, double c1, double c2,
                           double d1, double d2, double s) {
  const Mat4 p = p_kappa(k);
  const Vec4& x = xi.h;
  const Vec4& y = eta.h;
  const Vec4& z = out.h;
  const Vec4 px = p * x;
  const Vec4 py = p * y;
  const Vec4 pz = p * z;
  double v = 0.0;
  const Vec6 wv = sigma_cross(k, c1 * t.t1, eta.vp, c2 * t.t2, eta.vm);
  v -= 0.5 * curv.apply(wv).dot(wedge(x, z) - s * wedge(x, pz) + s * wedge(px, z) - wedge(px, pz));
  const Vec6 wu = sigma_cross(k, c1 * t.t1, xi.vp, c2 * t.t2, xi.vm);
  v -= 0.5 * curv.apply(wu).dot(wedge(y, z) - s * wedge(y, pz) + s * wedge(py, z) - wedge(py, pz));
  const Mat4 m = c1 * k_minus(k.minus) * k_plus(xi.vp) - c2 * k_plus(k.plus) * k_minus(xi.vm);
  v += s * ((m * (y + s * py)).dot(z));
  const Vec6 ww = sigma_cross(k, d1 * t.t1, out.vp, d2 * t.t2, out.vm);
  v -= 0.5 * curv.apply(ww).dot(wedge(x, y) + s * wedge(x, py) + s * wedge(px, y) + wedge(px, py));
  return v;
}

}  // namespace detail

/// G_t((D_A K_nu)(B), C) with A = (X^h+U) + K_nu(X^h+U), B = (Y^h+V) + K_nu(Y^h+V),
/// C = Z^h + W, by the explicit formula for the +1 distribution.
inline double daf_plus(const FrameCurvature& curv, const TwistorPoint& k, int nu_value, const MetricParams& t,
                       const PTangent& xi, const PTangent& eta, const PTangent& out) {
  detail::require_same_point(curv, k);
  const ProductStructureIndex nu(nu_value);
  const double e = nu.epsilon();
  const double sgn = nu.parity();
  return detail::dak_explicit(curv, k, t, xi, eta, out, e + 1.0, e * sgn - 1.0, e - 1.0, e * sgn + 1.0, 1.0);
}

/// Same with A = (X^h+U) - K_nu(X^h+U), B = (Y^h+V) - K_nu(Y^h+V): the -1 distribution.
inline double daf_minus(const FrameCurvature& curv, const TwistorPoint& k, int nu_value, const MetricParams& t,
                        const PTangent& xi, const PTangent& eta, const PTangent& out) {
  detail::require_same_point(curv, k);
  const ProductStructureIndex nu(nu_value);
  const double e = nu.epsilon();
  const double sgn = nu.parity();
  return detail::dak_explicit(curv, k, t, xi, eta, out, e - 1.0, e * sgn + 1.0, e + 1.0, e * sgn - 1.0, -1.0);
}

}  // namespace twistor
