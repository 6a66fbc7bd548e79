#pragma once

#include "twistor/twistor.hpp"

#include <boost/random/sobol.hpp>
#include <boost/random/uniform_01.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace twistor {

/// Quasi-random base points inside the chart box, kept `inset` (as a fraction of each
/// axis) away from the boundary in addition to the chart's own stencil margin.
inline std::vector<Point> base_points(const MetricChart& chart, int count, double inset = 0.1) {
  boost::random::sobol gen(4);
  boost::random::uniform_01<double> unit;
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  // skip the origin of the sequence, which sits on the box corner
  gen.discard(4);
  for (int n = 0; n < count; ++n) {
    Point p;
    for (int i = 0; i < 4; ++i) {
      const double w = chart.upper()[i] - chart.lower()[i];
      const double lo = chart.lower()[i] + inset * w + chart.margin(i);
      const double hi = chart.upper()[i] - inset * w - chart.margin(i);
      p[i] = lo + unit(gen) * (hi - lo);
    }
    out.push_back(p);
  }
  return out;
}

/// Seeded source of random bundle data.
class TupleSource {
 public:
  explicit TupleSource(std::uint64_t seed) : rng_(seed) {}

  Vec3 unit3() {
    Vec3 v;
    do {
      v = Vec3(normal_(rng_), normal_(rng_), normal_(rng_));
    } while (v.norm() < 1e-8);
    return v.normalized();
  }

  Vec4 vec4() { return Vec4(normal_(rng_), normal_(rng_), normal_(rng_), normal_(rng_)); }

  /// Uniform point of the fibre S^2 x S^2 over the frame's base point.
  TwistorPoint kappa(const OrthonormalFrame& frame) { return make_twistor_point(frame, unit3(), unit3()); }

  VerticalVector vertical(const TwistorPoint& k) {
    return vertical_projection(k, Vec3(normal_(rng_), normal_(rng_), normal_(rng_)),
                               Vec3(normal_(rng_), normal_(rng_), normal_(rng_)));
  }

  PTangent tangent(const TwistorPoint& k) {
    PTangent a = PTangent::horizontal(vec4());
    a += vertical(k).tangent();
    return a;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace twistor
