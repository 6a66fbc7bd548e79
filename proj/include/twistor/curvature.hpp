#pragma once

#include "twistor/bivector.hpp"
#include "twistor/chart.hpp"

namespace twistor {

/// Curvature at a point expressed in the chart's oriented orthonormal frame.
struct FrameCurvature {
  OrthonormalFrame frame;
  /// r[a*64+b*16+c*4+d] = g(R(E_a,E_b)E_c, E_d)
  std::array<double, 256> r{};
  /// Curvature operator on bivectors, split basis: op(j,i) = g(R(s_i), s_j).
  Mat6 op = Mat6::Zero();
  /// Ricci operator in frame components.
  Mat4 rho = Mat4::Zero();
  double scalar = 0.0;

  double operator()(int a, int b, int c, int d) const { return r[a * 64 + b * 16 + c * 4 + d]; }

  /// R(E_a, E_b) as a frame matrix.
  Mat4 endo(int a, int b) const {
    Mat4 m;
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d) m(d, c) = (*this)(a, b, c, d);
    return m;
  }

  /// R(X, Y) on the tangent space, computed from the Riemann tensor.
  Mat4 endo(const Vec4& x, const Vec4& y) const {
    Mat4 m = Mat4::Zero();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (x[a] * y[b] != 0.0) m += x[a] * y[b] * endo(a, b);
    return m;
  }

  /// R(a) on the tangent space for a bivector a, computed from the Riemann tensor.
  Mat4 endo(const Vec6& a) const {
    const Mat4 w = skew_of(a);
    Mat4 m = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (w(i, j) != 0.0) m += 0.5 * w(i, j) * endo(i, j);
    return m;
  }

  /// R(a) acting on the bivector b as a derivation.
  Vec6 on_bivector(const Vec6& a, const Vec6& b) const { return act(endo(a), b); }

  /// Curvature operator applied through the split-basis matrix.
  Vec6 apply(const Vec6& a) const { return op * a; }
};

inline FrameCurvature frame_curvature(const CurvatureTensor& t, const OrthonormalFrame& frame) {
  FrameCurvature fc;
  fc.frame = frame;
  const Mat4& e = frame.e;
  // Contract index by index: four successive changes of basis.
  std::array<double, 256> tmp = t.r;
  for (int slot = 0; slot < 4; ++slot) {
    std::array<double, 256> next{};
    const int stride = 1 << (2 * (3 - slot));
    for (int idx = 0; idx < 256; ++idx) {
      const int digit = (idx / stride) % 4;
      const int base = idx - digit * stride;
      double v = 0.0;
      for (int k = 0; k < 4; ++k) v += tmp[base + k * stride] * e(k, digit);
      next[idx] = v;
    }
    tmp = next;
  }
  fc.r = tmp;
  const auto& basis = detail::split_basis_matrices();
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          if (basis[i](a, b) == 0.0) continue;
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) v += basis[i](a, b) * basis[j](c, d) * fc(a, b, c, d);
        }
      fc.op(j, i) = 0.25 * v;
    }
  }
  fc.op = 0.5 * (fc.op + fc.op.transpose());
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += fc(a, b, a, d);
      fc.rho(d, b) = v;
    }
  fc.rho = 0.5 * (fc.rho + fc.rho.transpose());
  fc.scalar = fc.rho.trace();
  return fc;
}

inline FrameCurvature frame_curvature(const MetricChart& chart, const Point& x) {
  return frame_curvature(riemann(chart, x), orthonormal_frame(chart, x));
}

/// Curvature operator on bivectors, 6x6 symmetric in the split basis.
inline Mat6 curvature_operator(const MetricChart& chart, const Point& x) {
  return frame_curvature(chart, x).op;
}

/// Blocks of the curvature operator: s/6 Id + B + W+ + W-.
struct CurvatureDecomposition {
  double scalar = 0.0;
  Mat6 full = Mat6::Zero();
  /// Traceless Ricci part, exchanges the two halves.
  Mat6 traceless_ricci = Mat6::Zero();
  Mat3 weyl_plus = Mat3::Zero();
  Mat3 weyl_minus = Mat3::Zero();
  /// max |R - (s/6 + B + W+ + W-)| entrywise.
  double residual = 0.0;

  double scalar_part() const { return scalar / 6.0; }

  Mat6 reconstruct() const {
    Mat6 w = Mat6::Zero();
    w.topLeftCorner<3, 3>() = weyl_plus;
    w.bottomRightCorner<3, 3>() = weyl_minus;
    return scalar_part() * Mat6::Identity() + traceless_ricci + w;
  }

  bool einstein(double tol) const { return traceless_ricci.cwiseAbs().maxCoeff() < tol; }
  /// W- = 0
  bool self_dual(double tol) const { return weyl_minus.cwiseAbs().maxCoeff() < tol; }
  /// W+ = 0
  bool anti_self_dual(double tol) const { return weyl_plus.cwiseAbs().maxCoeff() < tol; }
};

/// rho is the Ricci operator in frame components, s its trace.
inline CurvatureDecomposition decompose(const Mat6& op, const Mat4& rho, double s) {
  CurvatureDecomposition d;
  d.scalar = s;
  d.full = op;
  // B(X^Y) = rho X ^ Y + X ^ rho Y - s/2 X^Y
  d.traceless_ricci = bivector_action(rho) - 0.5 * s * Mat6::Identity();
  const Mat6 weyl = op - (s / 6.0) * Mat6::Identity() - d.traceless_ricci;
  d.weyl_plus = weyl.topLeftCorner<3, 3>();
  d.weyl_minus = weyl.bottomRightCorner<3, 3>();
  d.residual = (op - d.reconstruct()).cwiseAbs().maxCoeff();
  return d;
}

inline CurvatureDecomposition decompose(const FrameCurvature& fc) {
  return decompose(fc.op, fc.rho, fc.scalar);
}

}  // namespace twistor
