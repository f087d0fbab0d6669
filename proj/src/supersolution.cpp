#include "scatlab/supersolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "scatlab/error.hpp"
#include "scatlab/parse.hpp"
#include "scatlab/specfun.hpp"

namespace scatlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMinNodesAcross = 16;
constexpr int kDefaultHalfNodes = 16;
constexpr double kRegionSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(what) + " must be positive");
}

// sin(z)/z scaled by k0; series below z = 1e-3 avoids cancellation.
double ball_value(double k0, double r) {
  const double z = k0 * r;
  if (z < 1e-3) {
    const double z2 = z * z;
    return k0 * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0)));
  }
  return std::sin(z) / r;
}

// Closed-form value without a region check; the FD stencils step outside.
double raw_value(const SupersolutionCandidate& c, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::visit(
      Overloaded{[&](const Disk2DCandidate& d) { return bessel_j(0, d.k0 * x.norm()); },
                 [&](const Ball3DCandidate& b) { return ball_value(b.k0, x.norm()); },
                 [&](const RectProductCandidate& r) {
                   return std::cos(kPi * x[1] / (2.0 * r.half_width)) * std::cos(kPi * x[2] / (2.0 * r.half_height));
                 },
                 [&](const SlabCosineCandidate& s) { return std::cos(kPi * x[2] / (2.0 * s.half_length)); },
                 [&](const GridEigenfunctionCandidate&) -> double {
                   throw UsageError("grid candidates have no closed form");
                 }},
      c);
}

bool in_closed_region(const SupersolutionCandidate& c, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double s = 1.0 + kRegionSlack;
  return std::visit(Overloaded{[&](const Disk2DCandidate& d) { return x.norm() <= d.radius * s; },
                               [&](const Ball3DCandidate& b) { return x.norm() <= b.radius * s; },
                               [&](const RectProductCandidate& r) {
                                 return std::abs(x[1]) <= r.half_width * s && std::abs(x[2]) <= r.half_height * s;
                               },
                               [&](const SlabCosineCandidate& sl) { return std::abs(x[2]) <= sl.half_length * s; },
                               [&](const GridEigenfunctionCandidate&) { return true; }},
                    c);
}

bool in_open_region(const SupersolutionCandidate& c, const Eigen::VectorXd& x) {
  return std::visit(Overloaded{[&](const Disk2DCandidate& d) { return x.norm() < d.radius; },
                               [&](const Ball3DCandidate& b) { return x.norm() < b.radius; },
                               [&](const RectProductCandidate& r) {
                                 return std::abs(x[1]) < r.half_width && std::abs(x[2]) < r.half_height;
                               },
                               [&](const SlabCosineCandidate& sl) { return std::abs(x[2]) < sl.half_length; },
                               [&](const GridEigenfunctionCandidate&) { return true; }},
                    c);
}

// Bilinear interpolation on the padded lattice: indices -1 and rows/cols are
// the Dirichlet ring.
struct GridSample {
  bool inside;
  double value;
  double laplacian;
};

GridSample sample_grid(const GridEigenfunctionCandidate& g, const Point2& p) {
  const Point2 s = (p - g.grid.origin) / g.grid.spacing;
  const auto rows = g.values.rows(), cols = g.values.cols();
  const double eps = 1e-12;
  if (s.x() < -1.0 - eps || s.y() < -1.0 - eps || s.x() > cols + eps || s.y() > rows + eps) {
    return {false, 0.0, 0.0};
  }
  const double cx = std::clamp(s.x(), -1.0, static_cast<double>(cols));
  const double cy = std::clamp(s.y(), -1.0, static_cast<double>(rows));
  Eigen::Index c0 = static_cast<Eigen::Index>(std::floor(cx));
  Eigen::Index r0 = static_cast<Eigen::Index>(std::floor(cy));
  c0 = std::min<Eigen::Index>(c0, cols - 1);
  r0 = std::min<Eigen::Index>(r0, rows - 1);
  const double fx = cx - c0, fy = cy - r0;
  auto at = [&](const Eigen::ArrayXXd& a, Eigen::Index r, Eigen::Index c) {
    return (r < 0 || c < 0 || r >= rows || c >= cols) ? 0.0 : a(r, c);
  };
  auto interior = [&](Eigen::Index r, Eigen::Index c) {
    return !(r < 0 || c < 0 || r >= rows || c >= cols) && g.grid.mask(r, c);
  };
  const bool any = interior(r0, c0) || interior(r0, c0 + 1) || interior(r0 + 1, c0) || interior(r0 + 1, c0 + 1);
  auto lerp = [&](const Eigen::ArrayXXd& a) {
    return (1 - fx) * (1 - fy) * at(a, r0, c0) + fx * (1 - fy) * at(a, r0, c0 + 1) +
           (1 - fx) * fy * at(a, r0 + 1, c0) + fx * fy * at(a, r0 + 1, c0 + 1);
  };
  return {any, lerp(g.values), lerp(g.laplacian)};
}

double analytic_laplacian(const SupersolutionCandidate& c, double value) {
  const double k0 = reference_wavenumber(c);
  return -k0 * k0 * value;
}

double fd_laplacian(const SupersolutionCandidate& c, const Eigen::VectorXd& x, double step) {
  const double v0 = raw_value(c, x);
  double sum = 0.0;
  Eigen::VectorXd y = x;
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    y[a] = x[a] + step;
    const double vp = raw_value(c, y);
    y[a] = x[a] - step;
    const double vm = raw_value(c, y);
    y[a] = x[a];
    sum += vp - 2.0 * v0 + vm;
  }
  return sum / (step * step);
}

struct Axis {
  double half_length;
  bool bounded;
};

std::vector<Axis> axes_of(const SupersolutionCandidate& c) {
  return std::visit(
      Overloaded{[](const Disk2DCandidate& d) { return std::vector<Axis>{{d.radius, true}, {d.radius, true}}; },
                 [](const Ball3DCandidate& b) {
                   return std::vector<Axis>{{b.radius, true}, {b.radius, true}, {b.radius, true}};
                 },
                 [](const RectProductCandidate& r) {
                   const double w = std::min(r.half_width, r.half_height);
                   return std::vector<Axis>{{w, false}, {r.half_width, true}, {r.half_height, true}};
                 },
                 [](const SlabCosineCandidate& s) {
                   return std::vector<Axis>{{s.half_length, false}, {s.half_length, false}, {s.half_length, true}};
                 },
                 [](const GridEigenfunctionCandidate&) { return std::vector<Axis>{}; }},
      c);
}

// Multiples j h strictly inside (-L, L) for bounded axes, within [-W, W]
// for window axes.
std::vector<double> axis_nodes(const Axis& axis, double h) {
  const double ratio = axis.half_length / h;
  int j_max;
  if (axis.bounded) {
    j_max = static_cast<int>(std::ceil(ratio - 1e-9)) - 1;
  } else {
    j_max = static_cast<int>(std::floor(ratio + 1e-9));
  }
  std::vector<double> out;
  for (int j = -j_max; j <= j_max; ++j) out.push_back(j * h);
  return out;
}

VerificationReport verify_grid(const GridEigenfunctionCandidate& g, double k, std::optional<double> spacing) {
  const double h = g.grid.spacing;
  if (spacing && std::abs(*spacing - h) > 1e-12 * h) {
    throw UsageError("grid candidates are verified on their own grid (spacing " + format_double(h) + ")");
  }
  VerificationReport rep;
  rep.method = ResidualMethod::FiniteDifference;
  rep.spacing = h;
  const double lambda = g.k0 * g.k0;
  const double err = std::isfinite(g.lambda_error) ? g.lambda_error : 1e-8 * lambda;
  rep.fd_constant = err / (h * h);
  rep.tolerance = err;  // max v = 1
  rep.max_residual = -std::numeric_limits<double>::infinity();
  rep.min_value = std::numeric_limits<double>::infinity();
  for (const auto& [r, c] : g.grid.interior_nodes()) {
    const double v = g.values(r, c);
    const double res = g.laplacian(r, c) + k * k * v;
    const Point2 p = g.grid.node(r, c);
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.witness_max = p;
    }
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.witness_min = p;
    }
    ++rep.nodes;
  }
  rep.pass = rep.max_residual <= rep.tolerance && rep.min_value > 0.0;
  return rep;
}

}  // namespace

SupersolutionCandidate make_disk_candidate(double radius) {
  require_positive(radius, "disk radius");
  return Disk2DCandidate{radius, uniqueness_threshold(Ball{2, radius})};
}

SupersolutionCandidate make_ball_candidate(double radius) {
  require_positive(radius, "ball radius");
  return Ball3DCandidate{radius, uniqueness_threshold(Ball{3, radius})};
}

SupersolutionCandidate make_rect_candidate(double half_width, double half_height) {
  require_positive(half_width, "rect R");
  require_positive(half_height, "rect h");
  return RectProductCandidate{half_width, half_height, uniqueness_threshold(Rect{half_width, half_height})};
}

SupersolutionCandidate make_slab_candidate(double half_length) {
  require_positive(half_length, "slab h");
  return SlabCosineCandidate{half_length, uniqueness_threshold(Interval{half_length})};
}

SupersolutionCandidate make_grid_candidate(const GridDomain& grid) {
  const EigenResult eig = fd_dirichlet_eigs(grid, 1);
  GridEigenfunctionCandidate g;
  g.grid = grid;
  Eigen::VectorXd phi = eig.eigenvectors.col(0);
  phi /= phi.maxCoeff();
  g.values = to_grid_array(grid, phi);
  g.k0 = std::sqrt(eig.eigenvalues[0]);
  g.lambda_error = eig.error_estimate[0];
  const auto rows = g.values.rows(), cols = g.values.cols();
  g.laplacian = Eigen::ArrayXXd::Zero(rows, cols);
  auto at = [&](Eigen::Index r, Eigen::Index c) {
    return (r < 0 || c < 0 || r >= rows || c >= cols) ? 0.0 : g.values(r, c);
  };
  const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
  for (const auto& [r, c] : grid.interior_nodes()) {
    g.laplacian(r, c) = (at(r - 1, c) + at(r + 1, c) + at(r, c - 1) + at(r, c + 1) - 4.0 * at(r, c)) * inv_h2;
  }
  return g;
}

SupersolutionCandidate canonical_candidate(const RegionSpec& region) {
  validate_region(region);
  return std::visit(
      Overloaded{[](const Ball& b) { return b.dimension == 2 ? make_disk_candidate(b.radius) : make_ball_candidate(b.radius); },
                 [](const Rect& r) { return make_rect_candidate(r.half_width, r.half_height); },
                 [](const Interval& i) { return make_slab_candidate(i.half_length); },
                 [](const CylinderOverRect& r) { return make_rect_candidate(r.half_width, r.half_height); },
                 [](const SlabOverInterval& s) { return make_slab_candidate(s.half_length); },
                 [](const GridDomain& g) { return make_grid_candidate(g); }},
      region);
}

double reference_wavenumber(const SupersolutionCandidate& c) {
  return std::visit([](const auto& x) { return x.k0; }, c);
}

int dimension(const SupersolutionCandidate& c) {
  return std::visit(Overloaded{[](const Disk2DCandidate&) { return 2; }, [](const Ball3DCandidate&) { return 3; },
                               [](const RectProductCandidate&) { return 3; },
                               [](const SlabCosineCandidate&) { return 3; },
                               [](const GridEigenfunctionCandidate&) { return 2; }},
                    c);
}

std::string kind_name(const SupersolutionCandidate& c) {
  return std::visit(Overloaded{[](const Disk2DCandidate&) { return "disk"; }, [](const Ball3DCandidate&) { return "ball"; },
                               [](const RectProductCandidate&) { return "rect"; },
                               [](const SlabCosineCandidate&) { return "slab"; },
                               [](const GridEigenfunctionCandidate&) { return "grid"; }},
                    c);
}

SupersolutionCandidate parse_candidate(const std::vector<std::string>& tok) {
  if (tok.empty()) throw UsageError("empty candidate spec");
  const std::string& kind = tok[0];
  auto expect = [&](std::size_t n) {
    if (tok.size() != n + 1) throw UsageError("candidate '" + kind + "' expects " + std::to_string(n) + " arguments");
  };
  if (kind == "disk") {
    expect(1);
    return make_disk_candidate(parse_double(tok[1], "disk R"));
  }
  if (kind == "ball") {
    expect(1);
    return make_ball_candidate(parse_double(tok[1], "ball R"));
  }
  if (kind == "rect") {
    expect(2);
    return make_rect_candidate(parse_double(tok[1], "rect R"), parse_double(tok[2], "rect h"));
  }
  if (kind == "slab") {
    expect(1);
    return make_slab_candidate(parse_double(tok[1], "slab h"));
  }
  if (kind == "grid") {
    expect(1);
    return make_grid_candidate(read_mask_file(tok[1]));
  }
  throw UsageError("unknown candidate kind '" + kind + "' (expected disk, ball, rect, slab, grid)");
}

CandidateValue eval_candidate(const SupersolutionCandidate& c, const Eigen::Ref<const Eigen::VectorXd>& point) {
  if (point.size() != dimension(c)) {
    throw UsageError("candidate '" + kind_name(c) + "' takes " + std::to_string(dimension(c)) + "-dimensional points");
  }
  if (const auto* g = std::get_if<GridEigenfunctionCandidate>(&c)) {
    const GridSample s = sample_grid(*g, Point2(point[0], point[1]));
    if (!s.inside) throw OutOfRegionError("point outside the grid domain");
    return {s.value, s.laplacian};
  }
  if (!in_closed_region(c, point)) throw OutOfRegionError("point outside the region of candidate '" + kind_name(c) + "'");
  const double v = raw_value(c, point);
  return {v, analytic_laplacian(c, v)};
}

std::string to_string(ResidualMethod m) {
  return m == ResidualMethod::Analytic ? "analytic" : "finite-difference";
}

VerificationReport verify_supersolution(const SupersolutionCandidate& c, double k, std::optional<double> spacing,
                                        std::optional<ResidualMethod> method) {
  require_positive(k, "wavenumber");
  if (const auto* g = std::get_if<GridEigenfunctionCandidate>(&c)) {
    if (method && *method == ResidualMethod::Analytic) {
      throw UsageError("grid candidates only support finite-difference residuals");
    }
    return verify_grid(*g, k, spacing);
  }
  const std::vector<Axis> axes = axes_of(c);
  double smallest = std::numeric_limits<double>::infinity();
  double window = 0.0;
  for (const Axis& a : axes) {
    if (a.bounded) smallest = std::min(smallest, a.half_length);
    else window = a.half_length;
  }
  const double h = spacing.value_or(smallest / kDefaultHalfNodes);
  require_positive(h, "grid spacing");

  std::vector<std::vector<double>> nodes;
  for (const Axis& a : axes) {
    nodes.push_back(axis_nodes(a, h));
    if (a.bounded && static_cast<int>(nodes.back().size()) < kMinNodesAcross) {
      throw ResolutionError("spacing " + format_double(h) + " gives " + std::to_string(nodes.back().size()) +
                            " nodes across a bounded dimension; at least 16 required");
    }
  }

  VerificationReport rep;
  rep.method = method.value_or(ResidualMethod::Analytic);
  rep.spacing = h;
  rep.window = window;
  rep.max_residual = -std::numeric_limits<double>::infinity();
  rep.min_value = std::numeric_limits<double>::infinity();
  const double k0 = reference_wavenumber(c);
  const bool fd = rep.method == ResidualMethod::FiniteDifference;
  double max_lap_change = 0.0;

  const std::size_t dim = axes.size();
  std::vector<std::size_t> idx(dim, 0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
  for (;;) {
    for (std::size_t a = 0; a < dim; ++a) x[static_cast<Eigen::Index>(a)] = nodes[a][idx[a]];
    if (in_open_region(c, x)) {
      const double v = raw_value(c, x);
      double residual;
      if (fd) {
        const double lap_h = fd_laplacian(c, x, h);
        const double lap_2h = fd_laplacian(c, x, 2.0 * h);
        max_lap_change = std::max(max_lap_change, std::abs(lap_2h - lap_h));
        residual = lap_h + k * k * v;
      } else {
        // exact: Laplace(v) = -k0^2 v
        residual = (k * k - k0 * k0) * v;
      }
      if (residual > rep.max_residual) {
        rep.max_residual = residual;
        rep.witness_max = x;
      }
      if (v < rep.min_value) {
        rep.min_value = v;
        rep.witness_min = x;
      }
      ++rep.nodes;
    }
    std::size_t a = 0;
    while (a < dim && ++idx[a] == nodes[a].size()) idx[a++] = 0;
    if (a == dim) break;
  }
  if (fd) {
    // lap_h = lap + a h^2, lap_2h = lap + 4 a h^2; C = 2 max|a| as a margin
    rep.fd_constant = 2.0 * max_lap_change / (3.0 * h * h);
    rep.tolerance = rep.fd_constant * h * h;
  }
  rep.pass = rep.max_residual <= rep.tolerance && rep.min_value > 0.0;
  return rep;
}

std::string report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["max_residual"] = r.max_residual;
  j["min_value"] = r.min_value;
  j["pass"] = r.pass;
  j["witness_max"] = std::vector<double>(r.witness_max.data(), r.witness_max.data() + r.witness_max.size());
  j["witness_min"] = std::vector<double>(r.witness_min.data(), r.witness_min.data() + r.witness_min.size());
  j["spacing"] = r.spacing;
  j["method"] = to_string(r.method);
  return j.dump();
}

Field2D planar_section(const SupersolutionCandidate& c) {
  return std::visit(
      Overloaded{[](const Disk2DCandidate& d) -> Field2D {
                   return {[d](const Point2& p) { return bessel_j(0, d.k0 * p.norm()); },
                           [d](const Point2& p) { return -d.k0 * d.k0 * bessel_j(0, d.k0 * p.norm()); }};
                 },
                 [](const Ball3DCandidate&) -> Field2D {
                   throw UnsupportedRegionError("ball candidates have no planar section with the same Laplacian");
                 },
                 [](const RectProductCandidate& r) -> Field2D {
                   auto v = [r](const Point2& p) {
                     return std::cos(kPi * p.x() / (2.0 * r.half_width)) * std::cos(kPi * p.y() / (2.0 * r.half_height));
                   };
                   return {v, [r, v](const Point2& p) { return -r.k0 * r.k0 * v(p); }};
                 },
                 [](const SlabCosineCandidate& s) -> Field2D {
                   auto v = [s](const Point2& p) { return std::cos(kPi * p.y() / (2.0 * s.half_length)); };
                   return {v, [s, v](const Point2& p) { return -s.k0 * s.k0 * v(p); }};
                 },
                 [](const GridEigenfunctionCandidate& g) -> Field2D {
                   return {[g](const Point2& p) { return sample_grid(g, p).value; },
                           [g](const Point2& p) { return sample_grid(g, p).laplacian; }};
                 }},
      c);
}

LiouvilleResidual liouville_identity_residual(const Field2D& u, const Field2D& v, double k, const Grid2D& grid) {
  require_positive(grid.spacing, "grid spacing");
  if (grid.nx < 3 || grid.ny < 3) throw UsageError("identity check needs at least 3 x 3 nodes");
  const double h = grid.spacing;
  const int nx = grid.nx, ny = grid.ny;
  auto node = [&](int i, int j) { return Point2(grid.origin + h * Point2(i, j)); };
  Eigen::ArrayXXd phi(nx, ny), vv(nx, ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Point2 p = node(i, j);
      vv(i, j) = v.value(p);
      if (!(vv(i, j) > 0.0)) {
        throw PositivityError("v is not positive at (" + format_double(p.x()) + ", " + format_double(p.y()) + ")");
      }
      phi(i, j) = u.value(p) / vv(i, j);
    }
  }
  auto v2_mid = [&](const Point2& p) {
    const double m = v.value(p);
    if (!(m > 0.0)) throw PositivityError("v is not positive at an edge midpoint");
    return m * m;
  };
  LiouvilleResidual out{0.0, 0.0};
  for (int i = 1; i + 1 < nx; ++i) {
    for (int j = 1; j + 1 < ny; ++j) {
      const Point2 p = node(i, j);
      const double e = v2_mid(p + Point2(0.5 * h, 0.0));
      const double w = v2_mid(p - Point2(0.5 * h, 0.0));
      const double n = v2_mid(p + Point2(0.0, 0.5 * h));
      const double s = v2_mid(p - Point2(0.0, 0.5 * h));
      const double div = (e * (phi(i + 1, j) - phi(i, j)) - w * (phi(i, j) - phi(i - 1, j)) +
                          n * (phi(i, j + 1) - phi(i, j)) - s * (phi(i, j) - phi(i, j - 1))) /
                         (h * h);
      const double uval = u.value(p);
      const double lap_u = u.laplacian(p);
      const double lap_v = v.laplacian(p);
      const double rhs = vv(i, j) * lap_u - uval * lap_v;
      out.identity_residual = std::max(out.identity_residual, std::abs(div - rhs));
      const double transformed = div + (lap_v + k * k * vv(i, j)) * vv(i, j) * phi(i, j);
      out.transformed_residual = std::max(out.transformed_residual, std::abs(transformed));
    }
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Admissible: return "admissible";
    case Verdict::Inadmissible: return "inadmissible";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

AdmissibilityDecision decide_admissibility(const RegionSpec& region, double k) {
  require_positive(k, "wavenumber");
  validate_region(region);
  if (std::holds_alternative<CylinderOverRect>(region) || std::holds_alternative<SlabOverInterval>(region)) {
    throw UnsupportedRegionError("admissibility is decided on bounded regions only");
  }
  AdmissibilityDecision d;
  const double k2 = k * k;
  if (const auto* g = std::get_if<GridDomain>(&region)) {
    const EigenResult eig = fd_dirichlet_eigs(*g, 1);
    const double lambda = eig.extrapolated[0];
    d.lambda1 = lambda;
    d.band = 2.0 * eig.error_estimate[0];
    if (!std::isfinite(lambda) || std::abs(k2 - lambda) <= d.band) {
      d.verdict = Verdict::Indeterminate;
      if (!std::isfinite(lambda)) d.lambda1 = eig.eigenvalues[0];
      return d;
    }
    if (k2 < lambda) {
      d.verdict = Verdict::Admissible;
      d.candidate = make_grid_candidate(*g);
      return d;
    }
    const auto nodes = g->interior_nodes();
    Eigen::Index arg;
    eig.eigenvectors.col(0).maxCoeff(&arg);
    const auto [r, c] = nodes[static_cast<std::size_t>(arg)];
    d.verdict = Verdict::Inadmissible;
    d.witness = g->node(r, c);
    d.residual = k2 - eig.eigenvalues[0];  // phi1 scaled to max 1 at the witness
    return d;
  }
  d.lambda1 = lambda1_closed_form(region);
  d.band = 0.0;
  SupersolutionCandidate cand = canonical_candidate(region);
  const double k0 = reference_wavenumber(cand);
  if (k <= k0) {
    d.verdict = Verdict::Admissible;
    d.candidate = std::move(cand);
    return d;
  }
  // phi1 peaks at the centre for every closed-form kind
  d.verdict = Verdict::Inadmissible;
  d.witness = Eigen::VectorXd::Zero(dimension(cand));
  d.residual = (k2 - k0 * k0) * eval_candidate(cand, d.witness).value;
  return d;
}

}  // namespace scatlab
