#ifndef SCATLAB_SUPERSOLUTION_HPP
#define SCATLAB_SUPERSOLUTION_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "scatlab/eigencalc.hpp"

namespace scatlab {

// Positive functions v with  Laplace(v) + k0^2 v <= 0  (here with equality:
// each one is the first Dirichlet eigenfunction of a bounded factor of its
// region). Points passed to eval_candidate have the candidate's dimension;
// the 3D kinds use coordinates (x1, x2, x3).

/// v = J0(k0 |x|) on the disk |x| < R, k0 = gamma0 / R.
struct Disk2DCandidate {
  double radius = 1.0;
  double k0 = 0.0;
};

/// v = sin(k0 |x|) / |x| on the ball |x| < R in R^3, k0 = pi / R.
struct Ball3DCandidate {
  double radius = 1.0;
  double k0 = 0.0;
};

/// v = cos(pi x2 / 2R) cos(pi x3 / 2h) on R x ]-R,R[ x ]-h,h[.
struct RectProductCandidate {
  double half_width = 1.0;
  double half_height = 1.0;
  double k0 = 0.0;
};

/// v = cos(pi x3 / 2h) on R^2 x ]-h,h[.
struct SlabCosineCandidate {
  double half_length = 1.0;
  double k0 = 0.0;
};

/// Bilinear interpolant of the first FD eigenfunction on a grid domain,
/// scaled to max value 1. k0^2 is the discrete eigenvalue.
struct GridEigenfunctionCandidate {
  GridDomain grid;
  Eigen::ArrayXXd values;     // rows x cols, zero outside the mask
  Eigen::ArrayXXd laplacian;  // 5-point Laplacian at the interior nodes
  double k0 = 0.0;
  double lambda_error = 0.0;  // two-grid error estimate of k0^2
};

using SupersolutionCandidate = std::variant<Disk2DCandidate, Ball3DCandidate, RectProductCandidate,
                                            SlabCosineCandidate, GridEigenfunctionCandidate>;

SupersolutionCandidate make_disk_candidate(double radius);
SupersolutionCandidate make_ball_candidate(double radius);
SupersolutionCandidate make_rect_candidate(double half_width, double half_height);
SupersolutionCandidate make_slab_candidate(double half_length);
SupersolutionCandidate make_grid_candidate(const GridDomain& grid);

/// First-eigenfunction candidate for Ball, Rect, Interval, CylinderOverRect,
/// SlabOverInterval and GridDomain regions (Rect and Interval map to the
/// product and slab kinds, constant in the extra coordinates).
SupersolutionCandidate canonical_candidate(const RegionSpec& region);

double reference_wavenumber(const SupersolutionCandidate& c);
int dimension(const SupersolutionCandidate& c);
std::string kind_name(const SupersolutionCandidate& c);

/// `disk R`, `ball R`, `rect R h`, `slab h` or `grid <maskfile>`.
SupersolutionCandidate parse_candidate(const std::vector<std::string>& tokens);

struct CandidateValue {
  double value;
  double laplacian;
};

/// Value and Laplacian at a point of the closed region (analytic for the
/// closed-form kinds; interpolated 5-point Laplacian for the grid kind).
/// Throws OutOfRegionError outside the region.
CandidateValue eval_candidate(const SupersolutionCandidate& c, const Eigen::Ref<const Eigen::VectorXd>& point);

enum class ResidualMethod { Analytic, FiniteDifference };
std::string to_string(ResidualMethod m);

struct VerificationReport {
  double max_residual = 0.0;  // max of Laplace(v) + k^2 v over the nodes
  double min_value = 0.0;
  bool pass = false;
  Eigen::VectorXd witness_max;
  Eigen::VectorXd witness_min;
  double spacing = 0.0;
  ResidualMethod method = ResidualMethod::Analytic;
  double tolerance = 0.0;    // C h^2 for finite differences, 0 for analytic
  double fd_constant = 0.0;  // C
  double window = 0.0;       // half-width covered along unbounded coordinates
  long nodes = 0;
};

/// Checks Laplace(v) + k^2 v <= tolerance and v > 0 on the interior nodes of
/// a uniform grid over the region. Unbounded coordinates are covered over a
/// window [-W, W] with W the smallest bounded half-length; the candidates are
/// constant along them. The method defaults to analytic for closed forms and
/// finite differences for the grid kind. Throws ResolutionError when a
/// bounded dimension gets fewer than 16 nodes.
VerificationReport verify_supersolution(const SupersolutionCandidate& c, double k,
                                        std::optional<double> spacing = std::nullopt,
                                        std::optional<ResidualMethod> method = std::nullopt);

/// JSON object with max_residual, min_value, pass, witness_max, witness_min,
/// spacing, method.
std::string report_to_json(const VerificationReport& report);

/// A scalar field on the plane with a known Laplacian.
struct Field2D {
  std::function<double(const Point2&)> value;
  std::function<double(const Point2&)> laplacian;
};

/// The candidate restricted to the plane of its bounded coordinates
/// (x1, x2 for the planar kinds; x2, x3 for the product and slab kinds).
/// Ball3D has no planar section with the same Laplacian and is rejected.
Field2D planar_section(const SupersolutionCandidate& c);

/// Nodes origin + h (i, j), 0 <= i < nx, 0 <= j < ny.
struct Grid2D {
  Point2 origin{0.0, 0.0};
  double spacing = 0.1;
  int nx = 0;
  int ny = 0;
};

struct LiouvilleResidual {
  double identity_residual;     // max |div(v^2 grad(u/v)) - (v Lu - u Lv)|
  double transformed_residual;  // max |div(v^2 grad phi) + (Lv + k^2 v) v phi|
};

/// Discrete check of  div(v^2 grad(u/v)) = v Lap(u) - u Lap(v)  and of its
/// Helmholtz form, over the nodes with four neighbours. The divergence uses
/// the conservative 5-point form with v^2 at edge midpoints; Laplacians come
/// from the fields. Throws PositivityError if v <= 0 at a node or midpoint.
LiouvilleResidual liouville_identity_residual(const Field2D& u, const Field2D& v, double k, const Grid2D& grid);

enum class Verdict { Admissible, Inadmissible, Indeterminate };
std::string to_string(Verdict v);

struct AdmissibilityDecision {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<SupersolutionCandidate> candidate;  // set when admissible
  Eigen::VectorXd witness;                          // set when inadmissible
  double residual = 0.0;  // Laplace(phi1) + k^2 phi1 at the witness, > 0
  double lambda1 = 0.0;
  double band = 0.0;      // uncertainty of lambda1 (0 for closed forms)
};

/// A positive supersolution at wavenumber k exists on a bounded region iff
/// k^2 <= lambda_1. Admissible returns the first-eigenfunction candidate;
/// Inadmissible returns the maximizer of phi1, where
/// Laplace(phi1) + k^2 phi1 = (k^2 - lambda_1) phi1 > 0. For grid domains the
/// decision is Indeterminate when |k^2 - lambda_1| is within twice the
/// two-grid error estimate.
AdmissibilityDecision decide_admissibility(const RegionSpec& region, double k);

}  // namespace scatlab

#endif  // SCATLAB_SUPERSOLUTION_HPP
