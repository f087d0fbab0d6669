#ifndef SCATLAB_GEOMETRY_HPP
#define SCATLAB_GEOMETRY_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace scatlab {

using Point2 = Eigen::Vector2d;

struct Circle {
  Point2 center{0.0, 0.0};
  double radius = 1.0;
  bool operator==(const Circle&) const = default;
};

struct Ellipse {
  Point2 center{0.0, 0.0};
  double a = 1.0;  // semi-axis along x
  double b = 1.0;  // semi-axis along y
  bool operator==(const Ellipse&) const = default;
};

/// The classical kite x(t) = c + s (cos t + 0.65 cos 2t - 0.65, 1.5 sin t).
struct Kite {
  Point2 center{0.0, 0.0};
  double scale = 1.0;
  bool operator==(const Kite&) const = default;
};

/// Star-shaped curve x(t) = c + r(t) (cos t, sin t) with
/// r(t) = r0 + sum_j (cos_coeffs[j-1] cos jt + sin_coeffs[j-1] sin jt).
/// Valid only while r(t) > 0 for every t.
struct TrigStar {
  Point2 center{0.0, 0.0};
  double base_radius = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  bool operator==(const TrigStar&) const = default;
};

/// Smooth simple closed curve with a 2pi-periodic, counterclockwise
/// parametrization. Construct through make_curve() or parse_curve() so that
/// the parameter ranges are checked.
using BoundaryCurve = std::variant<Circle, Ellipse, Kite, TrigStar>;

struct CurveSample {
  Point2 point;
  Point2 tangent;         // x'(t), not normalized
  Point2 second;          // x''(t)
  Point2 outward_normal;  // unit, points into the exterior
  double speed;           // |x'(t)|
};

/// Throws UsageError when the shape parameters are outside the documented
/// ranges (nonpositive lengths, a star with r(t) <= 0 somewhere).
BoundaryCurve make_curve(BoundaryCurve curve);

CurveSample curve_eval(const BoundaryCurve& curve, double t);

/// Points x(2 pi j / n), j = 0..n-1, as the columns of a 2 x n matrix.
Eigen::Matrix2Xd sample_points(const BoundaryCurve& curve, int n);

struct Ball2 {
  Point2 center;
  double radius;
};

/// Smallest disk containing a point set (Welzl's algorithm, deterministic
/// shuffle). Columns of `points` are the points.
Ball2 min_enclosing_ball(const Eigen::Ref<const Eigen::Matrix2Xd>& points);

/// Enclosing disk of the curve, refined so that every boundary point lies
/// inside it; radius is minimal to about 1e-8 for the preset families.
Ball2 min_enclosing_ball(const BoundaryCurve& curve);

/// Enclosing disk of several curves together.
Ball2 min_enclosing_ball(std::span<const BoundaryCurve> curves);

/// Parses `circle cx cy r`, `ellipse cx cy a b`, `kite cx cy s` or
/// `star cx cy r0 c1 ... cn` (cosine coefficients). Locale independent.
BoundaryCurve parse_curve(const std::string& spec);
std::string format_curve(const BoundaryCurve& curve);

/// Largest distance between two boundary points, from dense sampling.
double curve_diameter(const BoundaryCurve& curve);

/// Length of the curve (trapezoid rule, spectrally accurate).
double curve_length(const BoundaryCurve& curve);

/// Winding number of the closed polygon through `boundary` around `p`.
/// Nonzero means p is enclosed.
double winding_number(const Eigen::Ref<const Eigen::Matrix2Xd>& boundary, const Point2& p);

}  // namespace scatlab

#endif  // SCATLAB_GEOMETRY_HPP
