#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace twistor {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// A point of the coordinate patch.
using Point = Vec4;

enum class ErrorKind {
  OutsideDomain,
  NotPositiveDefinite,
  MismatchedBasePoint,
  MixedHalves,
  DegenerateChart,
  Precondition,
  Parse,
  Usage,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutsideDomain: return "point-outside-domain";
    case ErrorKind::NotPositiveDefinite: return "non-positive-definite-metric";
    case ErrorKind::MismatchedBasePoint: return "mismatched-base-point";
    case ErrorKind::MixedHalves: return "mixed-halves";
    case ErrorKind::DegenerateChart: return "degenerate-chart";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Residual tolerance tiers: metrics with exact partials vs finite-difference partials.
enum class ToleranceTier { Analytic, FiniteDifference };

inline double tolerance(ToleranceTier tier) {
  return tier == ToleranceTier::Analytic ? 1e-6 : 1e-4;
}

inline const char* to_string(ToleranceTier tier) {
  return tier == ToleranceTier::Analytic ? "analytic" : "fd";
}

}  // namespace twistor
