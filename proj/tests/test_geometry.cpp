#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scatlab/error.hpp"
#include "scatlab/geometry.hpp"

using namespace scatlab;

namespace {

const double kPi = std::numbers::pi;

std::vector<BoundaryCurve> presets() {
  return {Circle{{0.3, -0.2}, 1.5}, Ellipse{{0.0, 0.0}, 2.0, 1.0}, Kite{{0.0, 0.0}, 1.0},
          parse_curve("star 0.5 0.5 1 0.2 0.1 sin 0 0.05")};
}

}  // namespace

TEST_CASE("curve_eval examples") {
  const CurveSample c = curve_eval(Circle{{0.0, 0.0}, 1.0}, 0.0);
  CHECK(c.point.isApprox(Point2(1.0, 0.0)));
  CHECK((c.outward_normal - Point2(1.0, 0.0)).norm() <= 1e-15);
  CHECK(c.speed == doctest::Approx(1.0));

  const CurveSample k = curve_eval(Kite{{0.0, 0.0}, 1.0}, 0.0);
  CHECK((k.point - Point2(1.0, 0.0)).norm() <= 1e-15);

  const CurveSample e = curve_eval(Ellipse{{0.0, 0.0}, 2.0, 1.0}, kPi / 2);
  CHECK((e.point - Point2(0.0, 1.0)).norm() <= 1e-15);
  CHECK(e.speed == doctest::Approx(2.0));
}

TEST_CASE("tangent and second derivative match finite differences") {
  const double h = 1e-4;
  for (const BoundaryCurve& curve : presets()) {
    for (double t : {0.0, 0.7, 2.0, 4.5}) {
      const CurveSample s = curve_eval(curve, t);
      const Point2 p = curve_eval(curve, t + h).point;
      const Point2 m = curve_eval(curve, t - h).point;
      CHECK(((p - m) / (2 * h) - s.tangent).norm() <= 1e-7);
      CHECK(((p - 2 * s.point + m) / (h * h) - s.second).norm() <= 1e-5);
      CHECK(s.outward_normal.norm() == doctest::Approx(1.0));
      CHECK(std::abs(s.outward_normal.dot(s.tangent)) <= 1e-14);
    }
  }
}

TEST_CASE("presets wind once counterclockwise around an interior point") {
  for (const BoundaryCurve& curve : presets()) {
    const Eigen::Matrix2Xd pts = sample_points(curve, 512);
    const Point2 inside = min_enclosing_ball(curve).center;
    // the kite's enclosing center lies inside; the others are convex
    CHECK(winding_number(pts, inside) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(winding_number(pts, Point2(10.0, 10.0))) <= 1e-12);
    // outward normal points away from the interior
    const CurveSample s = curve_eval(curve, 1.0);
    CHECK(winding_number(pts, s.point + 1e-3 * s.outward_normal) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("enclosing ball examples") {
  const Ball2 c = min_enclosing_ball(BoundaryCurve{Circle{{0.3, -0.2}, 1.5}});
  CHECK((c.center - Point2(0.3, -0.2)).norm() <= 1e-8);
  CHECK(c.radius == doctest::Approx(1.5).epsilon(1e-8));

  const Ball2 e = min_enclosing_ball(BoundaryCurve{Ellipse{{0.0, 0.0}, 2.0, 1.0}});
  CHECK(e.center.norm() <= 1e-8);
  CHECK(e.radius == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("kite enclosing ball matches a dense-sampling oracle") {
  const BoundaryCurve kite = Kite{{0.0, 0.0}, 1.0};
  const Eigen::Matrix2Xd pts = sample_points(kite, 100000);
  // The kite is symmetric about the x axis; search the center on that axis.
  auto max_dist = [&](double cx) { return (pts.colwise() - Point2(cx, 0.0)).colwise().norm().maxCoeff(); };
  double lo = -2.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
    (max_dist(a) < max_dist(b) ? hi : lo) = (max_dist(a) < max_dist(b) ? b : a);
  }
  const double oracle = max_dist(0.5 * (lo + hi));
  const Ball2 ball = min_enclosing_ball(kite);
  CHECK(std::abs(ball.radius - oracle) <= 1e-6);
  CHECK(std::abs(ball.center.y()) <= 1e-6);
  CHECK((pts.colwise() - ball.center).colwise().norm().maxCoeff() <= ball.radius + 1e-12);
}

TEST_CASE("enclosing ball of a point set") {
  Eigen::Matrix2Xd pts(2, 4);
  pts << 0, 2, 1, 1, 0, 0, 1, 0.5;
  const Ball2 b = min_enclosing_ball(pts);
  CHECK((b.center - Point2(1.0, 0.0)).norm() <= 1e-12);
  CHECK(b.radius == doctest::Approx(1.0));
}

TEST_CASE("enclosing ball of several curves contains all of them") {
  const BoundaryCurve curves[] = {Circle{{0.0, 0.0}, 1.0}, Circle{{3.0, 0.0}, 1.0}};
  const Ball2 b = min_enclosing_ball(std::span<const BoundaryCurve>(curves));
  CHECK((b.center - Point2(1.5, 0.0)).norm() <= 1e-7);
  CHECK(b.radius == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("length and diameter") {
  CHECK(curve_length(Circle{{0.0, 0.0}, 2.0}) == doctest::Approx(4 * kPi).epsilon(1e-13));
  CHECK(curve_diameter(Ellipse{{0.0, 0.0}, 2.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("curve grammar round trip") {
  for (const BoundaryCurve& curve : presets()) CHECK(parse_curve(format_curve(curve)) == curve);
  CHECK(parse_curve("  kite 0 0 +1 ") == BoundaryCurve{Kite{{0.0, 0.0}, 1.0}});
  CHECK(parse_curve("circle -1 0.5 2e0") == BoundaryCurve{Circle{{-1.0, 0.5}, 2.0}});
}

TEST_CASE("invalid curves are rejected") {
  CHECK_THROWS_AS(parse_curve("circle 0 0 -1"), UsageError);
  CHECK_THROWS_AS(parse_curve("circle 0 0"), UsageError);
  CHECK_THROWS_AS(parse_curve("circle 0 0 1,5"), UsageError);
  CHECK_THROWS_AS(parse_curve("blob 0 0 1"), UsageError);
  CHECK_THROWS_AS(parse_curve("star 0 0 1 1.2"), UsageError);
  CHECK_THROWS_AS(make_curve(Ellipse{{0.0, 0.0}, 1.0, 0.0}), UsageError);
}
