#pragma once

#include "twistor/catalog.hpp"
#include "twistor/sampling.hpp"

#include <random>

namespace twistor::testing {

/// Uniform random interior point, kept 15% away from each face.
inline Point random_point(const MetricChart& chart, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.15, 0.85);
  Point p;
  for (int i = 0; i < 4; ++i) p[i] = chart.lower()[i] + u(rng) * (chart.upper()[i] - chart.lower()[i]);
  return p;
}

inline Vec6 random_vec6(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = n(rng);
  return v;
}

inline Vec3 random_vec3(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(n(rng), n(rng), n(rng));
}

inline Vec4 random_vec4(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec4(n(rng), n(rng), n(rng), n(rng));
}

inline double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace twistor::testing
