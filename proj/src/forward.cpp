#include "scatlab/forward.hpp"

#include <algorithm>
#include <string>

#include "scatlab/error.hpp"
#include "scatlab/parse.hpp"

namespace scatlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr Complex kI{0.0, 1.0};

// Kress' weights for int_0^{2pi} ln(4 sin^2((t - tau)/2)) f(tau) dtau on n
// equispaced nodes, as a function of the index offset.
Eigen::VectorXd log_weights(int n) {
  const int m = n / 2;
  Eigen::VectorXd r(n);
  for (int d = 0; d < n; ++d) {
    const double s = kTwoPi * d / n;
    double sum = 0.0;
    for (int l = 1; l < m; ++l) sum += std::cos(l * s) / l;
    r[d] = -(kTwoPi / m) * sum - (kPi / (static_cast<double>(m) * m)) * std::cos(m * s);
  }
  return r;
}

void check_far_field_inputs(const BoundaryCurve& curve, const Density& density, const WaveParams& wave) {
  if (!(density.curve == curve)) {
    throw MismatchError("density was computed for a different curve (" +
                        format_curve(density.curve) + " vs " + format_curve(curve) + ")");
  }
  if (!(density.wave == wave)) {
    throw MismatchError("density was computed for a different wave (k=" +
                        format_double(density.wave.k) + " vs k=" + format_double(wave.k) + ")");
  }
}

}  // namespace

WaveParams WaveParams::make(double k, const Point2& d) {
  if (!(k > 0.0) || !std::isfinite(k)) throw UsageError("wavenumber must be positive, got " + format_double(k));
  const double norm = d.norm();
  if (!(std::abs(norm - 1.0) <= 1e-12)) throw UsageError("incident direction must be a unit vector");
  return {k, d / norm};
}

Eigen::VectorXd angle_grid(int m) {
  if (m < 1) throw UsageError("angle grid needs at least one sample");
  Eigen::VectorXd a(m);
  for (int i = 0; i < m; ++i) a[i] = kTwoPi * i / m;
  return a;
}

int min_nodes(const BoundaryCurve& curve, double k) {
  int n = static_cast<int>(std::ceil(k * curve_length(curve) / kPi));
  n = std::max(n, 8);
  return n + (n % 2);
}

DirichletScatteringSolver::DirichletScatteringSolver(BoundaryCurve curve, double k, int n)
    : curve_(std::move(curve)), k_(k), n_(n) {
  if (!(k > 0.0) || !std::isfinite(k)) throw UsageError("wavenumber must be positive");
  if (n % 2 != 0) throw UsageError("node count must be even, got " + std::to_string(n));
  const int n_min = min_nodes(curve_, k);
  if (n < n_min) {
    throw ResolutionError("node count " + std::to_string(n) + " below the minimum " +
                          std::to_string(n_min) + " for k=" + format_double(k));
  }
  const double kd = k * curve_diameter(curve_);
  if (kd > kResolutionEnvelope) {
    throw ResolutionError("k * diameter = " + format_double(kd) + " exceeds the resolution envelope " +
                          format_double(kResolutionEnvelope));
  }

  const double eta = k;
  const Eigen::VectorXd weights = log_weights(n);
  const double h = kTwoPi / n;
  std::vector<CurveSample> s(n);
  points_.resize(2, n);
  for (int j = 0; j < n; ++j) {
    s[j] = curve_eval(curve_, h * j);
    points_.col(j) = s[j].point;
  }

  matrix_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2& dx = s[j].tangent;
      Complex k1, k2;
      if (i == j) {
        const Point2& ddx = s[j].second;
        const double sp = s[j].speed;
        const double l2 = (dx.x() * ddx.y() - dx.y() * ddx.x()) / (kTwoPi * sp * sp);
        const double m1 = -sp / kTwoPi;
        const Complex m2 = (0.5 * kI - kEulerGamma / kPi - std::log(0.5 * k * sp) / kPi) * sp;
        k1 = kI * eta * m1;
        k2 = l2 + kI * eta * m2;
      } else {
        const Point2 diff = s[i].point - s[j].point;
        const double r = diff.norm();
        const BesselPair b = bessel_01(k * r);
        // n(tau) . (x(t) - x(tau)) with n = (x2', -x1') the unnormalized normal
        const double nd = dx.y() * diff.x() - dx.x() * diff.y();
        const double sp = s[j].speed;
        const double ln4sin2 = std::log(4.0 * std::pow(std::sin(0.5 * h * (i - j)), 2));
        const Complex h0(b.j0, b.y0);
        const Complex h1(b.j1, b.y1);
        const Complex l = -0.5 * kI * k * nd * h1 / r;
        const double l1 = k / kTwoPi * nd * b.j1 / r;
        const Complex m = 0.5 * kI * h0 * sp;
        const double m1 = -b.j0 * sp / kTwoPi;
        k1 = l1 + kI * eta * m1;
        k2 = (l - l1 * ln4sin2) + kI * eta * (m - m1 * ln4sin2);
      }
      const int offset = (i - j + n) % n;
      matrix_(i, j) = (i == j ? 1.0 : 0.0) - (weights[offset] * k1 + h * k2);
    }
  }
  lu_.compute(matrix_);
  rcond_ = lu_.rcond();
}

Density DirichletScatteringSolver::solve(const Point2& direction) const {
  return solve(WaveParams::make(k_, direction));
}

Density DirichletScatteringSolver::solve(const WaveParams& wave) const {
  if (wave.k != k_) throw MismatchError("wave number differs from the assembled system");
  Eigen::VectorXcd rhs(n_);
  for (int j = 0; j < n_; ++j) rhs[j] = -2.0 * std::exp(kI * wave.k * points_.col(j).dot(wave.d));
  Density out;
  out.curve = curve_;
  out.wave = wave;
  out.coupling = k_;
  out.nodes = angle_grid(n_);
  out.values = lu_.solve(rhs);
  out.residual = (matrix_ * out.values - rhs).norm() / rhs.norm();
  if (!out.values.allFinite() || !(out.residual <= 1e-10)) {
    throw SingularSystemError("dense solve failed: relative residual " + format_double(out.residual) +
                                  ", reciprocal condition estimate " + format_double(rcond_),
                              rcond_);
  }
  return out;
}

Density solve_exterior_dirichlet(const BoundaryCurve& curve, const WaveParams& wave, int n) {
  return DirichletScatteringSolver(curve, wave.k, n).solve(wave);
}

Complex far_field_at(const BoundaryCurve& curve, const Density& density, const WaveParams& wave,
                     const Point2& xhat) {
  check_far_field_inputs(curve, density, wave);
  const Eigen::Index n = density.size();
  const double k = wave.k;
  const double h = kTwoPi / static_cast<double>(n);
  Complex sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const CurveSample s = curve_eval(curve, density.nodes[j]);
    const Point2 normal(s.tangent.y(), -s.tangent.x());  // unnormalized: carries ds
    sum += (k * normal.dot(xhat) + density.coupling * s.speed) *
           std::exp(-kI * k * xhat.dot(s.point)) * density.values[j];
  }
  const Complex gamma = std::exp(-0.25 * kI * kPi) / std::sqrt(8.0 * kPi * k);
  return gamma * h * sum;
}

FarFieldPattern far_field(const BoundaryCurve& curve, const Density& density, const WaveParams& wave,
                          const Eigen::Ref<const Eigen::VectorXd>& angles) {
  check_far_field_inputs(curve, density, wave);
  const Eigen::Index n = density.size();
  const double k = wave.k;
  const double h = kTwoPi / static_cast<double>(n);
  Eigen::Matrix2Xd normal(2, n), point(2, n);
  Eigen::VectorXd speed(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const CurveSample s = curve_eval(curve, density.nodes[j]);
    normal.col(j) = Point2(s.tangent.y(), -s.tangent.x());
    point.col(j) = s.point;
    speed[j] = s.speed;
  }
  const Complex gamma = std::exp(-0.25 * kI * kPi) / std::sqrt(8.0 * kPi * k);
  FarFieldPattern out{angles, Eigen::VectorXcd(angles.size()), wave};
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    const Point2 xhat(std::cos(angles[i]), std::sin(angles[i]));
    Complex sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      sum += (k * normal.col(j).dot(xhat) + density.coupling * speed[j]) *
             std::exp(-kI * k * xhat.dot(point.col(j))) * density.values[j];
    }
    out.values[i] = gamma * h * sum;
  }
  return out;
}

Eigen::VectorXcd scattered_field(const Density& density, const Eigen::Ref<const Eigen::Matrix2Xd>& points) {
  const Eigen::Index n = density.size();
  const double k = density.wave.k;
  const double h = kTwoPi / static_cast<double>(n);
  std::vector<CurveSample> s(n);
  for (Eigen::Index j = 0; j < n; ++j) s[j] = curve_eval(density.curve, density.nodes[j]);
  Eigen::VectorXcd out(points.cols());
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    const Point2 x = points.col(p);
    Complex sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Point2 diff = x - s[j].point;
      const double r = diff.norm();
      const Complex h0 = hankel1(0, k * r);
      const Complex h1 = hankel1(1, k * r);
      const Point2 normal(s[j].tangent.y(), -s[j].tangent.x());
      // dPhi/dnu(y) |x'| - i eta Phi |x'| with Phi = (i/4) H0(k r)
      const Complex dl = 0.25 * kI * k * h1 * normal.dot(diff) / r;
      const Complex sl = 0.25 * kI * h0 * s[j].speed;
      sum += (dl - kI * density.coupling * sl) * density.values[j];
    }
    out[p] = h * sum;
  }
  return out;
}

Eigen::VectorXcd total_field(const BoundaryCurve& curve, const Density& density, const WaveParams& wave,
                             const Eigen::Ref<const Eigen::Matrix2Xd>& points) {
  check_far_field_inputs(curve, density, wave);
  const Eigen::Index n = density.size();
  const int dense = static_cast<int>(std::max<Eigen::Index>(16 * n, 1024));
  const Eigen::Matrix2Xd boundary = sample_points(curve, dense);
  double max_speed = 0.0;
  for (int j = 0; j < dense; ++j) max_speed = std::max(max_speed, curve_eval(curve, kTwoPi * j / dense).speed);
  const double min_distance = 3.0 * (kTwoPi / static_cast<double>(n)) * max_speed;
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    const Point2 x = points.col(p);
    if (std::abs(winding_number(boundary, x)) > 0.5) {
      throw ProximityError("query point (" + format_double(x.x()) + ", " + format_double(x.y()) +
                           ") lies inside the obstacle");
    }
    const double dist = (boundary.colwise() - x).colwise().norm().minCoeff();
    // dense sampling overestimates the distance by at most ~(spacing)^2
    if (dist < min_distance * (1.0 - 1e-9)) {
      throw ProximityError("query point (" + format_double(x.x()) + ", " + format_double(x.y()) +
                           ") is " + format_double(dist) + " from the boundary; minimum is " +
                           format_double(min_distance));
    }
  }
  Eigen::VectorXcd u = scattered_field(density, points);
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    u[p] += std::exp(kI * wave.k * wave.d.dot(points.col(p)));
  }
  return u;
}

int min_disk_truncation(double k, double radius) { return static_cast<int>(std::ceil(k * radius)) + 20; }

FarFieldPattern disk_farfield_series(double radius, const WaveParams& wave,
                                     const Eigen::Ref<const Eigen::VectorXd>& angles, int truncation) {
  if (!(radius > 0.0)) throw UsageError("disk radius must be positive");
  if (truncation < min_disk_truncation(wave.k, radius)) {
    throw TruncationError("truncation " + std::to_string(truncation) + " below ceil(k a) + 20 = " +
                          std::to_string(min_disk_truncation(wave.k, radius)));
  }
  const double ka = wave.k * radius;
  // a_m = J_m / H_m; Y_m by forward recurrence, stopping once it leaves
  // double range (the remaining ratios are then below 1e-290).
  std::vector<Complex> ratio(truncation + 1, Complex(0.0));
  const BesselPair p = bessel_01(ka);
  double y_prev = p.y0, y = p.y1;
  for (int m = 0; m <= truncation; ++m) {
    double ym;
    if (m == 0) {
      ym = p.y0;
    } else if (m == 1) {
      ym = p.y1;
    } else {
      const double next = (2.0 * (m - 1) / ka) * y - y_prev;
      y_prev = y;
      y = next;
      ym = y;
    }
    if (!std::isfinite(ym) || std::abs(ym) > 1e290) break;
    const double jm = bessel_j(m, ka);
    ratio[m] = jm / Complex(jm, ym);
  }
  const double theta_d = wave.angle();
  const Complex pref = -std::sqrt(2.0 / (kPi * wave.k)) * std::exp(-0.25 * kI * kPi);
  FarFieldPattern out{angles, Eigen::VectorXcd(angles.size()), wave};
  for (Eigen::Index i = 0; i < angles.size(); ++i) {
    const double phi = angles[i] - theta_d;
    Complex sum = ratio[0];
    for (int m = 1; m <= truncation; ++m) sum += 2.0 * ratio[m] * std::cos(m * phi);
    out.values[i] = pref * sum;
  }
  return out;
}

double l2_distance(const FarFieldPattern& a, const FarFieldPattern& b) {
  if (a.values.size() != b.values.size()) throw MismatchError("far-field patterns use different angle grids");
  return circle_l2_norm(a.values - b.values);
}

double optical_theorem_residual(const BoundaryCurve& curve, const Density& density, const WaveParams& wave,
                                int m) {
  const FarFieldPattern f = far_field(curve, density, wave, angle_grid(m));
  const double energy = std::pow(circle_l2_norm(f.values), 2);
  const Complex forward = far_field_at(curve, density, wave, wave.d);
  const double rhs =
      optical_theorem_constant(wave.k) * (std::exp(Complex(0.0, kOpticalTheoremPhase)) * forward).imag();
  return std::abs(energy - rhs) / energy;
}

}  // namespace scatlab
