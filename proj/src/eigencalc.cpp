#include "scatlab/eigencalc.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "scatlab/error.hpp"
#include "scatlab/parse.hpp"
#include "scatlab/specfun.hpp"

namespace scatlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxCount = 10;
constexpr int kMaxIterations = 10000;
constexpr double kRitzTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-8;
constexpr double kMaxAspectRatio = 1e3;
constexpr Eigen::Index kDenseLimit = 600;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(what) + " must be positive");
}

// Count of multiples lower + h*(i+1) strictly below upper.
Eigen::Index nodes_strictly_inside(double lower, double upper, double h) {
  const double span = (upper - lower) / h;
  const double rounded = std::round(span);
  if (std::abs(span - rounded) < 1e-9) return static_cast<Eigen::Index>(rounded) - 1;
  return static_cast<Eigen::Index>(std::floor(span));
}

Eigen::SparseMatrix<double> dirichlet_laplacian(const GridDomain& grid,
                                                const std::vector<std::pair<int, int>>& nodes) {
  const Eigen::Index rows = grid.mask.rows(), cols = grid.mask.cols();
  Eigen::ArrayXXi index = Eigen::ArrayXXi::Constant(rows, cols, -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) index(nodes[i].first, nodes[i].second) = static_cast<int>(i);
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(nodes.size() * 5);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [r, c] = nodes[i];
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i), 4.0 * inv_h2);
    const int dr[] = {-1, 1, 0, 0};
    const int dc[] = {0, 0, -1, 1};
    for (int q = 0; q < 4; ++q) {
      const int rr = r + dr[q], cc = c + dc[q];
      if (rr < 0 || cc < 0 || rr >= rows || cc >= cols) continue;
      const int j = index(rr, cc);
      if (j >= 0) trip.emplace_back(static_cast<int>(i), j, -inv_h2);
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(nodes.size()));
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

void check_aspect_ratio(const GridDomain& grid) {
  Eigen::Index rmin = grid.mask.rows(), rmax = -1, cmin = grid.mask.cols(), cmax = -1;
  for (Eigen::Index r = 0; r < grid.mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.mask.cols(); ++c) {
      if (!grid.mask(r, c)) continue;
      rmin = std::min(rmin, r); rmax = std::max(rmax, r);
      cmin = std::min(cmin, c); cmax = std::max(cmax, c);
    }
  }
  const double a = static_cast<double>(rmax - rmin + 1);
  const double b = static_cast<double>(cmax - cmin + 1);
  if (std::max(a, b) / std::min(a, b) > kMaxAspectRatio) {
    throw ResolutionError("grid domain aspect ratio exceeds 1e3");
  }
}

}  // namespace

std::vector<std::pair<int, int>> GridDomain::interior_nodes() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(interior_count()));
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      if (mask(r, c)) out.emplace_back(static_cast<int>(r), static_cast<int>(c));
    }
  }
  return out;
}

GridDomain GridDomain::from_predicate(const Point2& lower, const Point2& upper, double h,
                                      const std::function<bool(const Point2&)>& inside) {
  require_positive(h, "grid spacing");
  const Eigen::Index cols = std::max<Eigen::Index>(0, nodes_strictly_inside(lower.x(), upper.x(), h));
  const Eigen::Index rows = std::max<Eigen::Index>(0, nodes_strictly_inside(lower.y(), upper.y(), h));
  GridDomain g;
  g.spacing = h;
  g.origin = lower + Point2(h, h);
  g.mask.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) g.mask(r, c) = inside(g.node(r, c));
  }
  return g;
}

GridDomain GridDomain::square(double side, double h, const Point2& lower) {
  return rectangle(lower, lower + Point2(side, side), h);
}

GridDomain GridDomain::rectangle(const Point2& lower, const Point2& upper, double h) {
  return from_predicate(lower, upper, h, [](const Point2&) { return true; });
}

GridDomain GridDomain::disk(double radius, double h) {
  return from_predicate(Point2(-radius, -radius), Point2(radius, radius), h,
                        [radius](const Point2& p) { return p.norm() < radius; });
}

GridDomain GridDomain::l_shape(double side, double h) {
  const double half = 0.5 * side;
  const double slack = 1e-9 * h;
  return from_predicate(Point2::Zero(), Point2(side, side), h, [=](const Point2& p) {
    return !(p.x() > half - slack && p.y() > half - slack);
  });
}

void validate_region(const RegionSpec& region) {
  std::visit(Overloaded{[](const Ball& b) {
                          if (b.dimension != 2 && b.dimension != 3) throw UsageError("ball dimension must be 2 or 3");
                          require_positive(b.radius, "ball radius");
                        },
                        [](const Rect& r) {
                          require_positive(r.half_width, "rect R");
                          require_positive(r.half_height, "rect h");
                        },
                        [](const Interval& i) { require_positive(i.half_length, "interval h"); },
                        [](const CylinderOverRect& r) {
                          require_positive(r.half_width, "cylinder R");
                          require_positive(r.half_height, "cylinder h");
                        },
                        [](const SlabOverInterval& s) { require_positive(s.half_length, "slab h"); },
                        [](const GridDomain& g) {
                          require_positive(g.spacing, "grid spacing");
                          if (g.interior_count() == 0) throw UsageError("grid domain has no interior nodes");
                        }},
             region);
}

double lambda1_closed_form(const RegionSpec& region) {
  validate_region(region);
  return std::visit(
      Overloaded{[](const Ball& b) {
                   const double t = (b.dimension == 3 ? kPi : gamma0()) / b.radius;
                   return t * t;
                 },
                 [](const Rect& r) {
                   return (kPi / 2) * (kPi / 2) *
                          (1.0 / (r.half_height * r.half_height) + 1.0 / (r.half_width * r.half_width));
                 },
                 [](const Interval& i) {
                   const double t = kPi / (2.0 * i.half_length);
                   return t * t;
                 },
                 [](const CylinderOverRect&) -> double {
                   throw UnsupportedRegionError("no closed form for an unbounded cylinder; use uniqueness_threshold");
                 },
                 [](const SlabOverInterval&) -> double {
                   throw UnsupportedRegionError("no closed form for an unbounded slab; use uniqueness_threshold");
                 },
                 [](const GridDomain&) -> double {
                   throw UnsupportedRegionError("grid domains need fd_dirichlet_eigs");
                 }},
      region);
}

double uniqueness_threshold(const RegionSpec& region) {
  validate_region(region);
  return std::visit(
      Overloaded{[&](const Ball&) { return std::sqrt(lambda1_closed_form(region)); },
                 [&](const Rect&) { return std::sqrt(lambda1_closed_form(region)); },
                 [&](const Interval&) { return std::sqrt(lambda1_closed_form(region)); },
                 [](const CylinderOverRect& c) {
                   return std::sqrt(lambda1_closed_form(Rect{c.half_width, c.half_height}));
                 },
                 [](const SlabOverInterval& s) {
                   return std::sqrt(lambda1_closed_form(Interval{s.half_length}));
                 },
                 [](const GridDomain& g) {
                   const EigenResult r = fd_dirichlet_eigs(g, 1);
                   const double lambda = std::isfinite(r.extrapolated[0]) ? r.extrapolated[0] : r.eigenvalues[0];
                   return std::sqrt(lambda);
                 }},
      region);
}

bool is_connected(const GridDomain& grid) {
  const auto nodes = grid.interior_nodes();
  if (nodes.empty()) return false;
  const Eigen::Index rows = grid.mask.rows(), cols = grid.mask.cols();
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(rows, cols, false);
  std::deque<std::pair<int, int>> queue{nodes.front()};
  seen(nodes.front().first, nodes.front().second) = true;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const auto [r, c] = queue.front();
    queue.pop_front();
    ++reached;
    const int dr[] = {-1, 1, 0, 0};
    const int dc[] = {0, 0, -1, 1};
    for (int q = 0; q < 4; ++q) {
      const int rr = r + dr[q], cc = c + dc[q];
      if (rr < 0 || cc < 0 || rr >= rows || cc >= cols) continue;
      if (!grid.mask(rr, cc) || seen(rr, cc)) continue;
      seen(rr, cc) = true;
      queue.emplace_back(rr, cc);
    }
  }
  return reached == nodes.size();
}

EigenResult discrete_dirichlet_eigs(const GridDomain& grid, int count) {
  require_positive(grid.spacing, "grid spacing");
  if (count < 1 || count > kMaxCount) throw UsageError("eigenvalue count must be in [1, 10]");
  const auto nodes = grid.interior_nodes();
  const auto n = static_cast<Eigen::Index>(nodes.size());
  if (n < count) throw UsageError("grid domain has fewer interior nodes than requested eigenvalues");
  const Eigen::SparseMatrix<double> a = dirichlet_laplacian(grid, nodes);

  EigenResult out;
  out.spacing = grid.spacing;
  if (n <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd{a});
    out.eigenvalues = es.eigenvalues().head(count);
    out.eigenvectors = es.eigenvectors().leftCols(count);
    fix_signs(out.eigenvectors);
    return out;
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("sparse factorization of the grid Laplacian failed", NAN);

  const Eigen::Index p = std::min<Eigen::Index>(n, count + 5);
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = uni(rng);
  }
  x = orthonormal_basis(x);

  Eigen::VectorXd previous = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());
  double worst_residual = NAN;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Eigen::MatrixXd q = orthonormal_basis(ldlt.solve(x));
    const Eigen::MatrixXd aq = a * q;
    Eigen::MatrixXd h = q.transpose() * aq;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    x = q * es.eigenvectors();
    const Eigen::MatrixXd ax = aq * es.eigenvectors();
    const Eigen::VectorXd ritz = es.eigenvalues();
    bool converged = true;
    worst_residual = 0.0;
    for (int j = 0; j < count; ++j) {
      const double change = std::abs(ritz[j] - previous[j]) / ritz[j];
      const double residual = (ax.col(j) - ritz[j] * x.col(j)).norm() / ritz[j];
      worst_residual = std::max(worst_residual, residual);
      if (!(change < kRitzTolerance) || !(residual < kResidualTolerance)) converged = false;
    }
    previous = ritz;
    if (converged) {
      out.eigenvalues = ritz.head(count);
      out.eigenvectors = x.leftCols(count);
      fix_signs(out.eigenvectors);
      out.iterations = it;
      return out;
    }
  }
  throw ConvergenceError("inverse iteration did not converge in 10^4 steps; residual " +
                             format_double(worst_residual),
                         worst_residual);
}

GridDomain coarsen(const GridDomain& grid) {
  GridDomain c;
  c.spacing = 2.0 * grid.spacing;
  c.origin = grid.origin + Point2(grid.spacing, grid.spacing);
  const Eigen::Index rows = grid.mask.rows() / 2, cols = grid.mask.cols() / 2;
  c.mask.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index col = 0; col < cols; ++col) c.mask(r, col) = grid.mask(2 * r + 1, 2 * col + 1);
  }
  return c;
}

EigenResult fd_dirichlet_eigs(const GridDomain& grid, int count) {
  validate_region(grid);
  if (count < 1 || count > kMaxCount) throw UsageError("eigenvalue count must be in [1, 10]");
  if (!is_connected(grid)) throw DisconnectedDomainError("grid domain interior is not connected");
  check_aspect_ratio(grid);

  EigenResult out = discrete_dirichlet_eigs(grid, count);
  out.error_estimate = Eigen::VectorXd::Constant(count, std::numeric_limits<double>::infinity());
  out.extrapolated = Eigen::VectorXd::Constant(count, std::numeric_limits<double>::infinity());
  const GridDomain coarse = coarsen(grid);
  if (coarse.interior_count() >= count) {
    try {
      const EigenResult c = discrete_dirichlet_eigs(coarse, count);
      const Eigen::VectorXd diff = (out.eigenvalues - c.eigenvalues) / 3.0;
      out.error_estimate = diff.cwiseAbs();
      out.extrapolated = out.eigenvalues + diff;
    } catch (const ConvergenceError&) {
      // keep the infinite estimate
    }
  }
  return out;
}

Eigen::ArrayXXd to_grid_array(const GridDomain& grid, const Eigen::Ref<const Eigen::VectorXd>& values) {
  Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(grid.mask.rows(), grid.mask.cols());
  const auto nodes = grid.interior_nodes();
  if (static_cast<Eigen::Index>(nodes.size()) != values.size()) {
    throw MismatchError("vector length does not match the grid's interior node count");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) out(nodes[i].first, nodes[i].second) = values[static_cast<Eigen::Index>(i)];
  return out;
}

double volume_bound(double k, int m) {
  require_positive(k, "wavenumber");
  if (m == 2) return kPi / (k * k);
  if (m == 3) return (4.0 * kPi / 3.0) / (k * k * k);
  throw UsageError("dimension must be 2 or 3");
}

GridDomain parse_mask(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw UsageError("mask: missing header line");
  const auto tok = split_whitespace(header);
  if (tok.size() != 3) throw UsageError("mask header must be `rows cols spacing`");
  const int rows = parse_int(tok[0], "mask rows");
  const int cols = parse_int(tok[1], "mask cols");
  const double h = parse_double(tok[2], "mask spacing");
  if (rows < 1 || cols < 1) throw UsageError("mask dimensions must be positive");
  require_positive(h, "mask spacing");
  GridDomain g;
  g.spacing = h;
  g.origin = Point2(h, h);
  g.mask.resize(rows, cols);
  std::string line;
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw UsageError("mask: expected " + std::to_string(rows) + " rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != cols) {
      throw UsageError("mask row " + std::to_string(r) + " has " + std::to_string(line.size()) +
                       " characters, expected " + std::to_string(cols));
    }
    for (int c = 0; c < cols; ++c) {
      if (line[c] != '0' && line[c] != '1') throw UsageError("mask entries must be 0 or 1");
      g.mask(r, c) = line[c] == '1';
    }
  }
  while (std::getline(in, line)) {
    if (!split_whitespace(line).empty()) throw UsageError("mask: trailing content after the last row");
  }
  return g;
}

std::string format_mask(const GridDomain& grid) {
  std::string out = std::to_string(grid.mask.rows()) + " " + std::to_string(grid.mask.cols()) + " " +
                    format_shortest(grid.spacing) + "\n";
  for (Eigen::Index r = 0; r < grid.mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.mask.cols(); ++c) out += grid.mask(r, c) ? '1' : '0';
    out += '\n';
  }
  return out;
}

GridDomain read_mask_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open mask file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mask(buf.str());
}

RegionSpec parse_region(const std::vector<std::string>& tok) {
  if (tok.empty()) throw UsageError("empty region spec");
  const std::string& kind = tok[0];
  auto expect = [&](std::size_t count) {
    if (tok.size() != count + 1) {
      throw UsageError("region '" + kind + "' expects " + std::to_string(count) + " arguments");
    }
  };
  auto num = [&](std::size_t i) { return parse_double(tok[i], kind); };
  RegionSpec region;
  if (kind == "ball") {
    expect(2);
    region = Ball{parse_int(tok[1], "ball dimension"), num(2)};
  } else if (kind == "disk") {
    expect(1);
    region = Ball{2, num(1)};
  } else if (kind == "rect") {
    expect(2);
    region = Rect{num(1), num(2)};
  } else if (kind == "interval") {
    expect(1);
    region = Interval{num(1)};
  } else if (kind == "cylinder") {
    expect(2);
    region = CylinderOverRect{num(1), num(2)};
  } else if (kind == "slab") {
    expect(1);
    region = SlabOverInterval{num(1)};
  } else if (kind == "mask") {
    expect(1);
    region = read_mask_file(tok[1]);
  } else {
    throw UsageError("unknown region kind '" + kind +
                     "' (expected ball, disk, rect, interval, cylinder, slab, mask)");
  }
  validate_region(region);
  return region;
}

RegionSpec parse_region(const std::string& spec) { return parse_region(split_whitespace(spec)); }

}  // namespace scatlab
