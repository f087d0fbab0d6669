#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "scatlab/error.hpp"
#include "scatlab/harness.hpp"
#include "scatlab/parse.hpp"
#include "scatlab/specfun.hpp"
#include "scatlab/supersolution.hpp"

namespace scatlab {
namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const std::string& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_threshold(const std::vector<std::string>& region, std::ostream& out) {
  out << format_double(uniqueness_threshold(parse_region(region))) << '\n';
  return 0;
}

int run_eig(const std::string& mask, int count, std::ostream& out) {
  if (count < 1) throw UsageError("--count must be positive");
  const EigenResult r = fd_dirichlet_eigs(read_mask_file(mask), count);
  out << "index,lambda,error_estimate,extrapolated\n";
  for (Eigen::Index j = 0; j < r.eigenvalues.size(); ++j) {
    out << j + 1 << ',' << format_double(r.eigenvalues[j]) << ',' << format_double(r.error_estimate[j]) << ','
        << format_double(r.extrapolated[j]) << '\n';
  }
  return 0;
}

int run_verify(const std::vector<std::string>& candidate, double k, std::optional<double> spacing,
               std::ostream& out) {
  const VerificationReport r = verify_supersolution(parse_candidate(candidate), k, spacing);
  out << report_to_json(r) << '\n';
  return 0;
}

int run_forward(const std::vector<std::string>& curve_spec, double k, double theta, std::optional<int> n,
                int angles, std::ostream& out) {
  const BoundaryCurve curve = parse_curve(join(curve_spec));
  const WaveParams wave = WaveParams::make(k, Point2(std::cos(theta), std::sin(theta)));
  int nodes = n.value_or(std::max(128, min_nodes(curve, k)));
  if (!n && nodes % 2 != 0) ++nodes;
  const FarFieldPattern f =
      far_field(curve, solve_exterior_dirichlet(curve, wave, nodes), wave, angle_grid(angles));
  out << "theta,re,im\n";
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    out << format_double(f.angles[i]) << ',' << format_double(f.values[i].real()) << ','
        << format_double(f.values[i].imag()) << '\n';
  }
  return 0;
}

int run_sweep(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const SweepConfig config = parse_sweep_config(read_file(config_path));
  const std::vector<SweepRow> rows = separation_sweep(config);
  const std::string csv = format_sweep_csv(rows);
  if (config.output.empty()) {
    out << csv;
  } else {
    std::ofstream f(config.output, std::ios::binary);
    if (!f) throw UsageError("cannot write " + config.output);
    f << csv;
  }
  bool failed = false;
  for (const SweepRow& r : rows) {
    if (r.error) {
      err << "row k=" << format_double(r.k) << " failed: " << *r.error << '\n';
      failed = true;
    }
  }
  return failed ? 2 : 0;
}

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

int run_selftest(std::ostream& out) {
  std::vector<Check> checks;
  auto record = [&](std::string name, auto body) {
    try {
      auto [ok, detail] = body();
      checks.push_back({std::move(name), ok, std::move(detail)});
    } catch (const std::exception& e) {
      checks.push_back({std::move(name), false, e.what()});
    }
  };
  const double pi = std::numbers::pi;

  record("gamma0", [] {
    const double e = std::abs(gamma0() - 2.404825557695773);
    return std::pair{e <= 1e-12, "error " + format_double(e)};
  });
  record("bessel_wronskian", [pi] {
    double worst = 0.0;
    for (double x : {0.1, 1.0, 7.5, 30.0, 120.0}) {
      for (int n = 0; n < 6; ++n) {
        const double w = bessel_j(n + 1, x) * bessel_y(n, x) - bessel_j(n, x) * bessel_y(n + 1, x);
        worst = std::max(worst, std::abs(w - 2.0 / (pi * x)) * x);
      }
    }
    return std::pair{worst <= 1e-10, "max scaled residual " + format_double(worst)};
  });
  record("thresholds", [pi] {
    const double e = std::max({std::abs(uniqueness_threshold(Ball{3, 1.0}) - pi),
                               std::abs(uniqueness_threshold(Rect{1.0, 1.0}) - pi / 2 * std::sqrt(2.0)),
                               std::abs(uniqueness_threshold(Interval{1.0}) - pi / 2)});
    return std::pair{e <= 1e-12, "max error " + format_double(e)};
  });
  record("disk_oracle", [] {
    const BoundaryCurve disk = Circle{{0.0, 0.0}, 1.0};
    const WaveParams wave = WaveParams::from_angle(2.0, 0.0);
    const Eigen::VectorXd grid = angle_grid();
    const FarFieldPattern f = far_field(disk, solve_exterior_dirichlet(disk, wave, 128), wave, grid);
    const FarFieldPattern g = disk_farfield_series(1.0, wave, grid, min_disk_truncation(2.0, 1.0));
    const double rel = l2_distance(f, g) / circle_l2_norm(g.values);
    return std::pair{rel <= 1e-6, "relative L2 " + format_double(rel)};
  });
  record("reciprocity_kite", [] {
    const BoundaryCurve kite = Kite{{0.0, 0.0}, 1.0};
    const DirichletScatteringSolver solver(kite, 1.0, 128);
    const WaveParams a = WaveParams::from_angle(1.0, 0.3);
    const WaveParams b = WaveParams::from_angle(1.0, 2.1);
    const Complex fab = far_field_at(kite, solver.solve(a), a, -b.d);
    const Complex fba = far_field_at(kite, solver.solve(b), b, -a.d);
    const double e = std::abs(fab - fba);
    return std::pair{e <= 1e-6, "residual " + format_double(e)};
  });
  record("optical_theorem_ellipse", [] {
    const BoundaryCurve ellipse = Ellipse{{0.0, 0.0}, 1.0, 0.5};
    const WaveParams wave = WaveParams::from_angle(1.0, 0.7);
    const double e = optical_theorem_residual(ellipse, solve_exterior_dirichlet(ellipse, wave, 128), wave);
    return std::pair{e <= 1e-5, "residual " + format_double(e)};
  });
  record("fd_square", [pi] {
    const EigenResult r = fd_dirichlet_eigs(GridDomain::square(1.0, 1.0 / 32), 1);
    const double rel = std::abs(r.extrapolated[0] - 2 * pi * pi) / (2 * pi * pi);
    return std::pair{rel <= 1e-3, "extrapolated relative error " + format_double(rel)};
  });
  record("slab_supersolution", [] {
    const SupersolutionCandidate c = make_slab_candidate(1.0);
    const double k0 = reference_wavenumber(c);
    const bool below = verify_supersolution(c, 0.9 * k0).pass;
    const bool above = !verify_supersolution(c, 1.1 * k0).pass;
    return std::pair{below && above, std::string(below ? "" : "fails below k0 ") + (above ? "" : "passes above k0")};
  });

  bool all = true;
  for (const Check& c : checks) {
    out << (c.ok ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
    all = all && c.ok;
  }
  return all ? 0 : 2;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sound-soft scattering and uniqueness-threshold toolkit", "scatlab"};
  app.require_subcommand(1);

  std::vector<std::string> region;
  auto* threshold = app.add_subcommand("threshold", "Print the uniqueness threshold k0 of a region");
  threshold->add_option("--region", region, "ball m R | disk R | rect R h | interval h | cylinder R h | slab h | mask <file>")
      ->required()
      ->allow_extra_args();

  std::string mask;
  int count = 1;
  auto* eig = app.add_subcommand("eig", "Finite-difference Dirichlet eigenvalues of a mask");
  eig->add_option("--mask", mask, "Mask file")->required();
  eig->add_option("--count", count, "Number of eigenvalues");

  std::vector<std::string> candidate;
  double verify_k = 0.0;
  std::optional<double> spacing;
  auto* verify = app.add_subcommand("verify", "Check a supersolution candidate at wavenumber k");
  verify->add_option("--candidate", candidate, "disk R | ball R | rect R h | slab h | grid <file>")->required();
  verify->add_option("--k", verify_k, "Wavenumber")->required();
  verify->add_option("--spacing", spacing, "Grid spacing");

  std::vector<std::string> curve;
  double forward_k = 0.0;
  double theta = 0.0;
  std::optional<int> nodes;
  int angles = 360;
  auto* forward = app.add_subcommand("forward", "Far-field pattern of a sound-soft obstacle");
  forward->add_option("--curve", curve, "circle cx cy r | ellipse cx cy a b | kite cx cy s | star cx cy r0 c1..cn")
      ->required();
  forward->add_option("--k", forward_k, "Wavenumber")->required();
  forward->add_option("--d", theta, "Incident direction angle in radians")->required();
  forward->add_option("--n", nodes, "Quadrature nodes (even)");
  forward->add_option("--angles", angles, "Number of observation angles");

  std::string config;
  auto* sweep = app.add_subcommand("sweep", "Far-field separation sweep");
  sweep->add_option("--config", config, "JSON config file")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 1;
  }

  try {
    if (threshold->parsed()) return run_threshold(region, out);
    if (eig->parsed()) return run_eig(mask, count, out);
    if (verify->parsed()) return run_verify(candidate, verify_k, spacing, out);
    if (forward->parsed()) return run_forward(curve, forward_k, theta, nodes, angles, out);
    if (sweep->parsed()) return run_sweep(config, out, err);
    if (selftest->parsed()) return run_selftest(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace scatlab
