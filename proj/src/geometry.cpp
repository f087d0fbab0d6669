#include "scatlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "scatlab/error.hpp"
#include "scatlab/parse.hpp"

namespace scatlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

struct Derivs {
  Point2 x, dx, ddx;
};

Derivs eval_circle(const Circle& c, double t) {
  const double ct = std::cos(t), st = std::sin(t);
  return {c.center + c.radius * Point2(ct, st), c.radius * Point2(-st, ct),
          -c.radius * Point2(ct, st)};
}

Derivs eval_ellipse(const Ellipse& e, double t) {
  const double ct = std::cos(t), st = std::sin(t);
  return {e.center + Point2(e.a * ct, e.b * st), Point2(-e.a * st, e.b * ct),
          Point2(-e.a * ct, -e.b * st)};
}

Derivs eval_kite(const Kite& k, double t) {
  const double s = k.scale;
  const double ct = std::cos(t), st = std::sin(t);
  const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t);
  return {k.center + s * Point2(ct + 0.65 * c2 - 0.65, 1.5 * st),
          s * Point2(-st - 1.3 * s2, 1.5 * ct), s * Point2(-ct - 2.6 * c2, -1.5 * st)};
}

Derivs eval_star(const TrigStar& s, double t) {
  double r = s.base_radius, dr = 0.0, ddr = 0.0;
  for (std::size_t j = 0; j < s.cos_coeffs.size(); ++j) {
    const double m = static_cast<double>(j + 1);
    const double c = std::cos(m * t), sn = std::sin(m * t);
    r += s.cos_coeffs[j] * c;
    dr -= m * s.cos_coeffs[j] * sn;
    ddr -= m * m * s.cos_coeffs[j] * c;
  }
  for (std::size_t j = 0; j < s.sin_coeffs.size(); ++j) {
    const double m = static_cast<double>(j + 1);
    const double c = std::cos(m * t), sn = std::sin(m * t);
    r += s.sin_coeffs[j] * sn;
    dr += m * s.sin_coeffs[j] * c;
    ddr -= m * m * s.sin_coeffs[j] * sn;
  }
  const Point2 e(std::cos(t), std::sin(t));
  const Point2 e_perp(-e.y(), e.x());
  return {s.center + r * e, dr * e + r * e_perp, ddr * e + 2.0 * dr * e_perp - r * e};
}

Derivs eval_derivs(const BoundaryCurve& curve, double t) {
  return std::visit(Overloaded{[t](const Circle& c) { return eval_circle(c, t); },
                               [t](const Ellipse& e) { return eval_ellipse(e, t); },
                               [t](const Kite& k) { return eval_kite(k, t); },
                               [t](const TrigStar& s) { return eval_star(s, t); }},
                    curve);
}

double star_radius(const TrigStar& s, double t) {
  double r = s.base_radius;
  for (std::size_t j = 0; j < s.cos_coeffs.size(); ++j) r += s.cos_coeffs[j] * std::cos((j + 1.0) * t);
  for (std::size_t j = 0; j < s.sin_coeffs.size(); ++j) r += s.sin_coeffs[j] * std::sin((j + 1.0) * t);
  return r;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw UsageError(std::string(what) + " must be positive and finite");
  }
}

bool inside(const Ball2& b, const Point2& p) {
  return (p - b.center).norm() <= b.radius * (1.0 + 1e-14) + 1e-15;
}

Ball2 ball_from(const Point2& a, const Point2& b) {
  return {0.5 * (a + b), 0.5 * (a - b).norm()};
}

Ball2 ball_from(const Point2& a, const Point2& b, const Point2& c) {
  const Point2 ab = b - a, ac = c - a;
  const double det = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
  if (std::abs(det) < 1e-300) {
    // collinear: the farthest pair spans the disk
    Ball2 best = ball_from(a, b);
    for (const Ball2& cand : {ball_from(a, c), ball_from(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
  const Point2 off((ac.y() * ab2 - ab.y() * ac2) / det, (ab.x() * ac2 - ac.x() * ab2) / det);
  return {a + off, off.norm()};
}

// Largest |x(t) - c| over the curve: dense sampling followed by golden-section
// refinement around every sampled local maximum that is close to the top.
double max_distance(const BoundaryCurve& curve, const Point2& c) {
  constexpr int kSamples = 1 << 14;
  const double dt = kTwoPi / kSamples;
  std::vector<double> d(kSamples);
  for (int i = 0; i < kSamples; ++i) d[i] = (eval_derivs(curve, i * dt).x - c).norm();
  const double top = *std::max_element(d.begin(), d.end());
  double best = top;
  auto dist = [&](double t) { return (eval_derivs(curve, t).x - c).norm(); };
  for (int i = 0; i < kSamples; ++i) {
    const double prev = d[(i + kSamples - 1) % kSamples];
    const double next = d[(i + 1) % kSamples];
    if (d[i] < prev || d[i] < next || d[i] < top - 1e-3 * (1.0 + top)) continue;
    double lo = (i - 1) * dt, hi = (i + 1) * dt;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
    double f1 = dist(x1), f2 = dist(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + kInvPhi * (hi - lo); f2 = dist(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - kInvPhi * (hi - lo); f1 = dist(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

constexpr int kBallSamples = 1 << 16;

}  // namespace

BoundaryCurve make_curve(BoundaryCurve curve) {
  std::visit(Overloaded{[](const Circle& c) { require_positive(c.radius, "circle radius"); },
                        [](const Ellipse& e) {
                          require_positive(e.a, "ellipse semi-axis a");
                          require_positive(e.b, "ellipse semi-axis b");
                        },
                        [](const Kite& k) { require_positive(k.scale, "kite scale"); },
                        [](const TrigStar& s) {
                          require_positive(s.base_radius, "star base radius");
                          constexpr int kCheck = 4096;
                          for (int i = 0; i < kCheck; ++i) {
                            if (!(star_radius(s, kTwoPi * i / kCheck) > 0.0)) {
                              throw UsageError("star radius function must stay positive");
                            }
                          }
                        }},
             curve);
  return curve;
}

CurveSample curve_eval(const BoundaryCurve& curve, double t) {
  t -= kTwoPi * std::floor(t / kTwoPi);
  const Derivs d = eval_derivs(curve, t);
  const double speed = d.dx.norm();
  return {d.x, d.dx, d.ddx, Point2(d.dx.y(), -d.dx.x()) / speed, speed};
}

Eigen::Matrix2Xd sample_points(const BoundaryCurve& curve, int n) {
  Eigen::Matrix2Xd pts(2, n);
  for (int j = 0; j < n; ++j) pts.col(j) = eval_derivs(curve, kTwoPi * j / n).x;
  return pts;
}

Ball2 min_enclosing_ball(const Eigen::Ref<const Eigen::Matrix2Xd>& points) {
  const Eigen::Index n = points.cols();
  if (n == 0) return {Point2::Zero(), 0.0};
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(20120210u);
  std::shuffle(order.begin(), order.end(), rng);

  Ball2 b{points.col(order[0]), 0.0};
  for (Eigen::Index i = 1; i < n; ++i) {
    const Point2 p = points.col(order[i]);
    if (inside(b, p)) continue;
    b = {p, 0.0};
    for (Eigen::Index j = 0; j < i; ++j) {
      const Point2 q = points.col(order[j]);
      if (inside(b, q)) continue;
      b = ball_from(p, q);
      for (Eigen::Index k = 0; k < j; ++k) {
        const Point2 r = points.col(order[k]);
        if (!inside(b, r)) b = ball_from(p, q, r);
      }
    }
  }
  return b;
}

Ball2 min_enclosing_ball(const BoundaryCurve& curve) {
  return min_enclosing_ball(std::span<const BoundaryCurve>(&curve, 1));
}

Ball2 min_enclosing_ball(std::span<const BoundaryCurve> curves) {
  if (curves.empty()) return {Point2::Zero(), 0.0};
  Eigen::Matrix2Xd pts(2, kBallSamples * static_cast<Eigen::Index>(curves.size()));
  for (std::size_t c = 0; c < curves.size(); ++c) {
    pts.middleCols(static_cast<Eigen::Index>(c) * kBallSamples, kBallSamples) =
        sample_points(curves[c], kBallSamples);
  }
  Ball2 b = min_enclosing_ball(pts);
  for (const BoundaryCurve& c : curves) b.radius = std::max(b.radius, max_distance(c, b.center));
  return b;
}

double curve_diameter(const BoundaryCurve& curve) {
  const Eigen::Matrix2Xd pts = sample_points(curve, 1024);
  double best = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < pts.cols(); ++j) {
      best = std::max(best, (pts.col(i) - pts.col(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double curve_length(const BoundaryCurve& curve) {
  constexpr int kNodes = 1024;
  double sum = 0.0;
  for (int j = 0; j < kNodes; ++j) sum += eval_derivs(curve, kTwoPi * j / kNodes).dx.norm();
  return sum * kTwoPi / kNodes;
}

double winding_number(const Eigen::Ref<const Eigen::Matrix2Xd>& boundary, const Point2& p) {
  const Eigen::Index n = boundary.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point2 a = boundary.col(i) - p;
    const Point2 b = boundary.col((i + 1) % n) - p;
    total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
  }
  return total / kTwoPi;
}

BoundaryCurve parse_curve(const std::string& spec) {
  const auto tok = split_whitespace(spec);
  if (tok.empty()) throw UsageError("empty curve spec");
  const std::string& kind = tok[0];
  auto num = [&](std::size_t i, const char* what) { return parse_double(tok[i], what); };
  auto expect = [&](std::size_t count) {
    if (tok.size() != count) {
      throw UsageError("curve spec '" + kind + "' expects " + std::to_string(count - 1) +
                       " numbers, got " + std::to_string(tok.size() - 1));
    }
  };
  if (kind == "circle") {
    expect(4);
    return make_curve(Circle{{num(1, "cx"), num(2, "cy")}, num(3, "radius")});
  }
  if (kind == "ellipse") {
    expect(5);
    return make_curve(Ellipse{{num(1, "cx"), num(2, "cy")}, num(3, "a"), num(4, "b")});
  }
  if (kind == "kite") {
    expect(4);
    return make_curve(Kite{{num(1, "cx"), num(2, "cy")}, num(3, "scale")});
  }
  if (kind == "star") {
    if (tok.size() < 4) throw UsageError("curve spec 'star' expects cx cy r0 [c1 ... cn] [sin s1 ... sm]");
    TrigStar s{{num(1, "cx"), num(2, "cy")}, num(3, "r0"), {}, {}};
    std::size_t i = 4;
    for (; i < tok.size() && tok[i] != "sin"; ++i) s.cos_coeffs.push_back(num(i, "cosine coefficient"));
    if (i < tok.size()) {
      for (++i; i < tok.size(); ++i) s.sin_coeffs.push_back(num(i, "sine coefficient"));
    }
    return make_curve(std::move(s));
  }
  throw UsageError("unknown curve kind '" + kind + "' (expected circle, ellipse, kite, star)");
}

std::string format_curve(const BoundaryCurve& curve) {
  auto f = [](double v) { return format_shortest(v); };
  return std::visit(
      Overloaded{
          [&](const Circle& c) {
            return "circle " + f(c.center.x()) + " " + f(c.center.y()) + " " + f(c.radius);
          },
          [&](const Ellipse& e) {
            return "ellipse " + f(e.center.x()) + " " + f(e.center.y()) + " " + f(e.a) + " " + f(e.b);
          },
          [&](const Kite& k) {
            return "kite " + f(k.center.x()) + " " + f(k.center.y()) + " " + f(k.scale);
          },
          [&](const TrigStar& s) {
            std::string out = "star " + f(s.center.x()) + " " + f(s.center.y()) + " " + f(s.base_radius);
            for (double c : s.cos_coeffs) out += " " + f(c);
            if (!s.sin_coeffs.empty()) {
              out += " sin";
              for (double c : s.sin_coeffs) out += " " + f(c);
            }
            return out;
          }},
      curve);
}

}  // namespace scatlab
