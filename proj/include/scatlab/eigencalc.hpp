#ifndef SCATLAB_EIGENCALC_HPP
#define SCATLAB_EIGENCALC_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "scatlab/geometry.hpp"

namespace scatlab {

/// Open ball of radius R in dimension 2 or 3.
struct Ball {
  int dimension = 2;
  double radius = 1.0;
};

/// ]-R, R[ x ]-h, h[.
struct Rect {
  double half_width = 1.0;   // R
  double half_height = 1.0;  // h
};

/// ]-h, h[.
struct Interval {
  double half_length = 1.0;
};

/// R x (]-R, R[ x ]-h, h[), unbounded along x1.
struct CylinderOverRect {
  double half_width = 1.0;
  double half_height = 1.0;
};

/// R^2 x ]-h, h[, unbounded along x1 and x2.
struct SlabOverInterval {
  double half_length = 1.0;
};

/// Node set of a uniform grid. Node (r, c) sits at origin + h (c, r); mask
/// marks interior nodes. Every node outside the mask carries the Dirichlet
/// value zero.
struct GridDomain {
  using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Mask mask;
  double spacing = 1.0;
  Point2 origin{1.0, 1.0};

  Point2 node(Eigen::Index r, Eigen::Index c) const {
    return origin + spacing * Point2(static_cast<double>(c), static_cast<double>(r));
  }
  Eigen::Index interior_count() const { return mask.count(); }
  /// Number of interior nodes times h^2.
  double area() const { return static_cast<double>(interior_count()) * spacing * spacing; }
  /// (row, col) of every interior node in row-major order; this is the
  /// unknown ordering used by the eigensolver.
  std::vector<std::pair<int, int>> interior_nodes() const;

  /// Nodes lower + h (c + 1, r + 1) strictly inside the box (lower, upper)
  /// and satisfying `inside` (cell-centre style inclusion for curved shapes).
  static GridDomain from_predicate(const Point2& lower, const Point2& upper, double h,
                                   const std::function<bool(const Point2&)>& inside);
  /// Square [lower, lower + side]^2.
  static GridDomain square(double side, double h, const Point2& lower = Point2::Zero());
  static GridDomain rectangle(const Point2& lower, const Point2& upper, double h);
  /// Disk of radius R centred at the origin.
  static GridDomain disk(double radius, double h);
  /// [0, side]^2 minus its upper-right quarter.
  static GridDomain l_shape(double side, double h);
};

using RegionSpec = std::variant<Ball, Rect, Interval, CylinderOverRect, SlabOverInterval, GridDomain>;

struct EigenResult {
  Eigen::VectorXd eigenvalues;     // ascending
  double spacing = 0.0;
  Eigen::VectorXd error_estimate;  // |lambda_h - lambda_2h| / 3, +inf when the coarse grid is unusable
  Eigen::VectorXd extrapolated;    // lambda_h + (lambda_h - lambda_2h) / 3
  Eigen::MatrixXd eigenvectors;    // columns, unit 2-norm, ordering of interior_nodes()
  int iterations = 0;
};

/// Throws UsageError when a length parameter is not strictly positive or a
/// grid domain has no interior nodes.
void validate_region(const RegionSpec& region);

/// Exact lambda_1 of -Laplace with Dirichlet conditions for Ball, Rect and
/// Interval regions. Other variants raise UnsupportedRegionError.
double lambda1_closed_form(const RegionSpec& region);

/// Largest wavenumber k0 with k0^2 = lambda_1 of the bounded factor of the
/// region. Grid domains use the Richardson-extrapolated FD eigenvalue.
double uniqueness_threshold(const RegionSpec& region);

/// Smallest `count` (<= 10) eigenvalues of the 5-point Dirichlet Laplacian on
/// the mask, by block inverse iteration with a sparse Cholesky factor and
/// Rayleigh-Ritz projection; the error estimate compares against the grid of
/// spacing 2h made of every other node.
EigenResult fd_dirichlet_eigs(const GridDomain& grid, int count);

/// Same iteration without the two-grid comparison (error_estimate and
/// extrapolated are left empty). Accepts disconnected masks.
EigenResult discrete_dirichlet_eigs(const GridDomain& grid, int count);

/// Grid with spacing 2h built from the nodes with odd row and column index.
GridDomain coarsen(const GridDomain& grid);

/// Lays an eigenvector (interior-node ordering) out on the full grid, zero
/// outside the mask.
Eigen::ArrayXXd to_grid_array(const GridDomain& grid, const Eigen::Ref<const Eigen::VectorXd>& values);

/// True when the interior nodes form one 4-connected component.
bool is_connected(const GridDomain& grid);

/// omega_m k^{-m}: volume of the ball of radius 1/k, m in {2, 3}.
double volume_bound(double k, int m);

/// Mask text format: `rows cols spacing`, then `rows` lines of `0`/`1`.
/// The origin is not stored; reading sets it to (h, h).
GridDomain parse_mask(const std::string& text);
std::string format_mask(const GridDomain& grid);
GridDomain read_mask_file(const std::string& path);

/// `ball m R`, `disk R`, `rect R h`, `interval h`, `cylinder R h`, `slab h`
/// or `mask <path>`.
RegionSpec parse_region(const std::vector<std::string>& tokens);
RegionSpec parse_region(const std::string& spec);

}  // namespace scatlab

#endif  // SCATLAB_EIGENCALC_HPP
