#pragma once

#include <array>
#include <cmath>

namespace twistor {

/// Second-order forward-mode jet in four variables: value, gradient and Hessian.
///
/// Metric component functions are written once as templates over the scalar
/// type and instantiated with Jet to obtain exact first and second partials.
struct Jet {
  double v = 0.0;
  std::array<double, 4> d{};
  std::array<std::array<double, 4>, 4> h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Jet variable(int i, double value) {
    Jet j(value);
    j.d[i] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < 4; ++i) {
      d[i] += o.d[i];
      for (int k = 0; k < 4; ++k) h[i][k] += o.h[i][k];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < 4; ++i) {
      d[i] -= o.d[i];
      for (int k = 0; k < 4; ++k) h[i][k] -= o.h[i][k];
    }
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(const Jet& a) {
    Jet r;
    r -= a;
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v);
    for (int i = 0; i < 4; ++i) {
      r.d[i] = a.d[i] * b.v + a.v * b.d[i];
      for (int k = 0; k < 4; ++k) {
        r.h[i][k] = a.h[i][k] * b.v + a.v * b.h[i][k] + a.d[i] * b.d[k] + a.d[k] * b.d[i];
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  /// Applies a scalar function given its value and first two derivatives at v.
  Jet chain(double f, double df, double ddf) const {
    Jet r(f);
    for (int i = 0; i < 4; ++i) {
      r.d[i] = df * d[i];
      for (int k = 0; k < 4; ++k) r.h[i][k] = df * h[i][k] + ddf * d[i] * d[k];
    }
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    const double inv = 1.0 / a.v;
    return a.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
};

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return a.chain(e, e, e);
}
inline Jet log(const Jet& a) { return a.chain(std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet sin(const Jet& a) { return a.chain(std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return a.chain(std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }

/// Real power with a constant exponent; integer exponents stay valid for negative bases.
inline Jet pow(const Jet& a, double p) {
  if (p == 0.0) return Jet(1.0);
  if (p == std::round(p) && std::abs(p) <= 16.0) {
    const int n = static_cast<int>(std::abs(p));
    Jet r = a;
    for (int i = 1; i < n; ++i) r = r * a;
    return p < 0 ? reciprocal(r) : r;
  }
  const double f = std::pow(a.v, p);
  const double df = p * std::pow(a.v, p - 1.0);
  const double ddf = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return a.chain(f, df, ddf);
}

}  // namespace twistor
