#ifndef SCATLAB_FORWARD_HPP
#define SCATLAB_FORWARD_HPP

#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/LU>

#include "scatlab/geometry.hpp"
#include "scatlab/specfun.hpp"

namespace scatlab {

/// Wavenumber k > 0 and unit incident direction d of the plane wave
/// exp(i k x.d).
struct WaveParams {
  double k = 1.0;
  Point2 d{1.0, 0.0};

  static WaveParams from_angle(double k, double theta) {
    return make(k, Point2(std::cos(theta), std::sin(theta)));
  }
  /// Validates k > 0 and |d| = 1 (to 1e-12; d is renormalized).
  static WaveParams make(double k, const Point2& d);

  double angle() const { return std::atan2(d.y(), d.x()); }
  bool operator==(const WaveParams&) const = default;
};

/// Layer density on the uniform parameter grid t_j = 2 pi j / n.
struct Density {
  BoundaryCurve curve;
  WaveParams wave;
  double coupling = 0.0;  // eta in the combined-field representation
  Eigen::VectorXd nodes;
  Eigen::VectorXcd values;
  double residual = 0.0;  // relative residual of the dense solve

  Eigen::Index size() const { return values.size(); }
};

struct FarFieldPattern {
  Eigen::VectorXd angles;
  Eigen::VectorXcd values;
  WaveParams wave;
};

/// theta_i = 2 pi i / m, i = 0..m-1.
Eigen::VectorXd angle_grid(int m = 360);

/// Smallest admissible node count for a curve at wavenumber k: at least 8 and
/// at least two nodes per wavelength along the boundary, rounded up to even.
int min_nodes(const BoundaryCurve& curve, double k);

/// Largest k * diameter accepted by the solver.
inline constexpr double kResolutionEnvelope = 50.0;

/// Nystrom discretization of the combined-field equation
///   phi + K phi - i eta S phi = -2 u_inc   on the boundary,
/// with eta = k, for the scattered field
///   w(x) = int (dPhi(x,y)/dnu(y) - i eta Phi(x,y)) phi(y) ds(y).
/// The logarithmic singularity of both kernels is integrated with the
/// trigonometric product weights of Kress; the smooth remainder with the
/// trapezoid rule. The matrix is assembled and factored once and may then
/// serve any number of incident directions.
class DirichletScatteringSolver {
 public:
  DirichletScatteringSolver(BoundaryCurve curve, double k, int n);

  Density solve(const Point2& direction) const;
  Density solve(const WaveParams& wave) const;

  const BoundaryCurve& curve() const { return curve_; }
  double wavenumber() const { return k_; }
  int nodes() const { return n_; }
  double rcond() const { return rcond_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  BoundaryCurve curve_;
  double k_;
  int n_;
  Eigen::Matrix2Xd points_;
  Eigen::MatrixXcd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double rcond_ = 0.0;
};

Density solve_exterior_dirichlet(const BoundaryCurve& curve, const WaveParams& wave, int n);

/// Far-field pattern F with w(r xhat) = exp(ikr)/sqrt(r) F(xhat) + O(r^{-3/2}).
FarFieldPattern far_field(const BoundaryCurve& curve, const Density& density,
                          const WaveParams& wave, const Eigen::Ref<const Eigen::VectorXd>& angles);

/// Far field in a single observation direction (unit vector).
Complex far_field_at(const BoundaryCurve& curve, const Density& density, const WaveParams& wave,
                     const Point2& xhat);

/// Total field u = exp(ik x.d) + w at exterior points (columns of `points`).
/// Points closer to the boundary than 3 (2pi/n) max|x'| are rejected.
Eigen::VectorXcd total_field(const BoundaryCurve& curve, const Density& density,
                             const WaveParams& wave, const Eigen::Ref<const Eigen::Matrix2Xd>& points);

/// Scattered field only (no proximity checks; used by the far-field
/// asymptotics study at large r).
Eigen::VectorXcd scattered_field(const Density& density, const Eigen::Ref<const Eigen::Matrix2Xd>& points);

/// Separation-of-variables far field of the sound-soft disk of the given
/// radius centred at the origin:
///   F(theta) = -sqrt(2/(pi k)) e^{-i pi/4} sum_m J_m(ka)/H_m(ka) e^{im(theta - theta_d)}.
FarFieldPattern disk_farfield_series(double radius, const WaveParams& wave,
                                     const Eigen::Ref<const Eigen::VectorXd>& angles, int truncation);

/// Minimum truncation accepted by disk_farfield_series.
int min_disk_truncation(double k, double radius);

/// L2 norm on the unit circle of samples on a uniform periodic grid
/// (trapezoid rule).
template <typename Derived>
double circle_l2_norm(const Eigen::MatrixBase<Derived>& values) {
  const auto m = values.size();
  if (m == 0) return 0.0;
  return std::sqrt(2.0 * std::numbers::pi / static_cast<double>(m) * values.squaredNorm());
}

/// L2 distance of two patterns on the same uniform angle grid.
double l2_distance(const FarFieldPattern& a, const FarFieldPattern& b);

/// Optical theorem under this normalization (derived from the disk series):
///   int |F|^2 dtheta = c(k) Im(e^{i alpha} F(d)),  c(k) = sqrt(8 pi / k),
///   alpha = -pi/4.
inline double optical_theorem_constant(double k) { return std::sqrt(8.0 * std::numbers::pi / k); }
inline constexpr double kOpticalTheoremPhase = -std::numbers::pi / 4.0;

/// Relative defect of the optical theorem for one scattering solution,
/// using an m-point angle grid for the energy integral.
double optical_theorem_residual(const BoundaryCurve& curve, const Density& density,
                                const WaveParams& wave, int m = 360);

}  // namespace scatlab

#endif  // SCATLAB_FORWARD_HPP
