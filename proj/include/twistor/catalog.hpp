#pragma once

#include "twistor/chart.hpp"
#include "twistor/curvature.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace twistor {

template <class S>
using MetricArray = std::array<std::array<S, 4>, 4>;

inline MetricChart make_flat() {
  return make_jet_chart("flat", Vec4::Constant(-1.0), Vec4::Constant(1.0), [](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    MetricArray<S> g{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) g[a][b] = S(a == b ? 1.0 : 0.0);
    return g;
  });
}

/// Stereographic chart of the round 4-sphere of radius r: g = 4 r^4 / (r^2 + |x|^2)^2 delta.
inline MetricChart make_round_sphere(double r = 1.0) {
  if (!(r > 0.0)) throw Error(ErrorKind::Precondition, "sphere radius must be positive");
  std::ostringstream id;
  id << "sphere(r=" << r << ")";
  return make_jet_chart(id.str(), Vec4::Constant(-0.8 * r), Vec4::Constant(0.8 * r), [r](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    S q = S(r * r);
    for (int i = 0; i < 4; ++i) q = q + x[i] * x[i];
    const S phi = S(4.0 * r * r * r * r) / (q * q);
    MetricArray<S> g{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) g[a][b] = a == b ? phi : S(0.0);
    return g;
  });
}

/// Fubini-Study metric on the affine chart C^2 of CP^2, z1 = x1 + i x2, z2 = x3 + i x4,
/// normalized to holomorphic sectional curvature 4 (scalar curvature 24).
/// Orientation +1 is the complex orientation.
inline MetricChart make_cp2(int orientation = 1) {
  return make_jet_chart(orientation > 0 ? "cp2" : "cp2(reversed)", Vec4::Constant(-1.0), Vec4::Constant(1.0),
                        [](const auto& x) {
                          using S = std::decay_t<decltype(x[0])>;
                          const S n = S(1.0) + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
                          const S n2 = n * n;
                          MetricArray<S> g{};
                          for (int j = 0; j < 2; ++j) {
                            for (int k = 0; k < 2; ++k) {
                              const S& pj = x[2 * j];
                              const S& qj = x[2 * j + 1];
                              const S& pk = x[2 * k];
                              const S& qk = x[2 * k + 1];
                              // z_j conj(z_k)
                              const S re = pj * pk + qj * qk;
                              const S im = qj * pk - pj * qk;
                              const S a = ((j == k ? n : S(0.0)) - re) / n2;
                              const S b = -im / n2;
                              g[2 * j][2 * k] = a;
                              g[2 * j][2 * k + 1] = -b;
                              g[2 * j + 1][2 * k] = b;
                              g[2 * j + 1][2 * k + 1] = a;
                            }
                          }
                          return g;
                        },
                        orientation);
}

/// Product of round 2-spheres of radii a and b, each in stereographic coordinates.
inline MetricChart make_s2xs2(double a = 1.0, double b = 1.0) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::Precondition, "radii must be positive");
  std::ostringstream id;
  id << "s2xs2(a=" << a << ",b=" << b << ")";
  Vec4 hi(0.8 * a, 0.8 * a, 0.8 * b, 0.8 * b);
  return make_jet_chart(id.str(), Vec4(-hi), hi, [a, b](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    const S qa = S(a * a) + x[0] * x[0] + x[1] * x[1];
    const S qb = S(b * b) + x[2] * x[2] + x[3] * x[3];
    const S fa = S(4.0 * a * a * a * a) / (qa * qa);
    const S fb = S(4.0 * b * b * b * b) / (qb * qb);
    MetricArray<S> g{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g[i][j] = S(0.0);
    g[0][0] = fa;
    g[1][1] = fa;
    g[2][2] = fb;
    g[3][3] = fb;
    return g;
  });
}

/// Generic test metric e^{2f}(delta + h) on [-1/2, 1/2]^4: f is a fixed cubic polynomial and
/// h a quadratic symmetric-matrix field, both with seeded coefficients scaled by `amplitude`.
/// The non-conformal term h makes both Weyl halves nonzero.
inline MetricChart make_perturbed_flat(double amplitude = 0.1, unsigned seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::array<double, 4> lin{};
  std::array<std::array<double, 4>, 4> quad{};
  std::array<double, 4> cub{};
  for (auto& v : lin) v = coef(rng);
  for (auto& row : quad)
    for (auto& v : row) v = coef(rng);
  for (auto& v : cub) v = coef(rng);
  // h_ab = sum_{c<=d} w[ab][c][d] x_c x_d, symmetric in ab
  std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4> w{};
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = c; d < 4; ++d) {
          const double v = coef(rng);
          w[a][b][c][d] = v;
          w[b][a][c][d] = v;
        }
  std::ostringstream id;
  id << "perturbed(amp=" << amplitude << ",seed=" << seed << ")";
  auto chart = make_jet_chart(id.str(), Vec4::Constant(-0.5), Vec4::Constant(0.5), [=](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    S f = S(0.0);
    for (int i = 0; i < 4; ++i) {
      f = f + lin[i] * x[i] + cub[i] * x[i] * x[i] * x[i];
      for (int j = 0; j < 4; ++j) f = f + 0.5 * quad[i][j] * x[i] * x[j];
    }
    f = amplitude * f;
    using std::exp;
    const S conf = exp(2.0 * f);
    MetricArray<S> g{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        S h = S(0.0);
        for (int c = 0; c < 4; ++c)
          for (int d = c; d < 4; ++d) h = h + w[a][b][c][d] * x[c] * x[d];
        g[a][b] = conf * ((a == b ? S(1.0) : S(0.0)) + amplitude * h);
      }
    return g;
  });
  // positive definiteness over the closed box, checked on a grid
  for (int i = 0; i < 81; ++i) {
    Point p;
    int k = i;
    for (int axis = 0; axis < 4; ++axis) {
      p[axis] = -0.5 + 0.5 * (k % 3);
      k /= 3;
    }
    p *= 0.999;
    Eigen::LLT<Mat4> llt(chart.metric(p));
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::NotPositiveDefinite, "perturbation amplitude too large: " + id.str());
    }
  }
  return chart;
}

/// Curvature facts a catalog entry claims; re-verified numerically, never trusted.
struct KnownProperties {
  bool einstein = false;
  std::optional<double> constant_curvature;
  bool self_dual = false;
  bool anti_self_dual = false;
  std::optional<double> scalar_curvature;
};

struct CatalogEntry {
  std::string id;
  MetricChart chart;
  KnownProperties known;
};

/// The five built-in charts used by the verification suites.
inline std::vector<CatalogEntry> default_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"flat", make_flat(), {true, 0.0, true, true, 0.0}});
  c.push_back({"sphere", make_round_sphere(1.0), {true, 1.0, true, true, 12.0}});
  c.push_back({"cp2", make_cp2(1), {true, std::nullopt, true, false, 24.0}});
  c.push_back({"s2xs2", make_s2xs2(1.0, 2.0), {false, std::nullopt, false, false, 2.5}});
  c.push_back({"perturbed", make_perturbed_flat(0.1, 7), {false, std::nullopt, false, false, std::nullopt}});
  return c;
}

/// Numeric re-derivation of a catalog entry's claims at a handful of points.
struct CatalogVerification {
  std::string id;
  bool ok = true;
  double max_traceless_ricci = 0.0;
  double max_weyl_plus = 0.0;
  double max_weyl_minus = 0.0;
  double max_reconstruction = 0.0;
  double min_scalar = 0.0;
  double max_scalar = 0.0;
  std::vector<std::string> failures;
};

inline CatalogVerification verify_entry(const CatalogEntry& entry, int points = 5, double tol = 1e-6) {
  CatalogVerification v;
  v.id = entry.id;
  v.min_scalar = std::numeric_limits<double>::infinity();
  v.max_scalar = -std::numeric_limits<double>::infinity();
  const MetricChart& chart = entry.chart;
  for (int i = 0; i < points; ++i) {
    // deterministic interior points along a skew diagonal
    const double f = (i + 0.5) / points;
    Point p;
    for (int a = 0; a < 4; ++a) {
      const double frac = std::fmod(f * (a + 1) * 0.618034 + 0.13 * a, 1.0);
      p[a] = chart.lower()[a] + (0.15 + 0.7 * frac) * (chart.upper()[a] - chart.lower()[a]);
    }
    const auto d = decompose(frame_curvature(chart, p));
    v.max_traceless_ricci = std::max(v.max_traceless_ricci, d.traceless_ricci.cwiseAbs().maxCoeff());
    v.max_weyl_plus = std::max(v.max_weyl_plus, d.weyl_plus.cwiseAbs().maxCoeff());
    v.max_weyl_minus = std::max(v.max_weyl_minus, d.weyl_minus.cwiseAbs().maxCoeff());
    v.max_reconstruction = std::max(v.max_reconstruction, d.residual);
    v.min_scalar = std::min(v.min_scalar, d.scalar);
    v.max_scalar = std::max(v.max_scalar, d.scalar);
  }
  const KnownProperties& k = entry.known;
  auto check = [&](bool claim, double residual, const char* what) {
    const bool holds = residual < tol;
    const bool clearly_fails = residual > 100.0 * tol;
    if ((claim && !holds) || (!claim && !clearly_fails)) {
      v.ok = false;
      v.failures.push_back(std::string(what) + (claim ? " claimed but residual " : " denied but residual ") +
                           std::to_string(residual));
    }
  };
  check(k.einstein, v.max_traceless_ricci, "einstein");
  check(k.self_dual, v.max_weyl_minus, "self-dual");
  check(k.anti_self_dual, v.max_weyl_plus, "anti-self-dual");
  if (v.max_reconstruction > tol) {
    v.ok = false;
    v.failures.push_back("decomposition residual " + std::to_string(v.max_reconstruction));
  }
  if (k.scalar_curvature) {
    const double dev = std::max(std::abs(v.min_scalar - *k.scalar_curvature), std::abs(v.max_scalar - *k.scalar_curvature));
    if (dev > tol * std::max(1.0, std::abs(*k.scalar_curvature))) {
      v.ok = false;
      v.failures.push_back("scalar curvature off by " + std::to_string(dev));
    }
  }
  if (k.constant_curvature) {
    const bool cc = v.max_traceless_ricci < tol && v.max_weyl_plus < tol && v.max_weyl_minus < tol;
    const double chi = v.max_scalar / 12.0;
    if (!cc || std::abs(chi - *k.constant_curvature) > tol) {
      v.ok = false;
      v.failures.push_back("constant curvature claim not reproduced");
    }
  }
  return v;
}

}  // namespace twistor
