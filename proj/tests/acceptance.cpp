// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "scatlab/error.hpp"
#include "scatlab/forward.hpp"
#include "scatlab/harness.hpp"
#include "scatlab/parse.hpp"
#include "scatlab/specfun.hpp"
#include "scatlab/supersolution.hpp"

using namespace scatlab;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    if (ok) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double cli_threshold(const std::vector<std::string>& region) {
  std::vector<std::string> args{"threshold", "--region"};
  args.insert(args.end(), region.begin(), region.end());
  std::ostringstream out, err;
  if (cli_main(args, out, err) != 0) throw Error("threshold command failed: " + err.str());
  std::string s = out.str();
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return parse_double(s, "threshold output");
}

Outcome criterion1() {
  Outcome o;
  const double ball = cli_threshold({"ball", "3", "1"});
  const double disk = cli_threshold({"disk", "1"});
  const double rect = cli_threshold({"rect", "1", "1"});
  const double interval = cli_threshold({"interval", "1"});
  const double g0 = 2.404825557695773;
  o.require(ball * ball == kPi * kPi, "ball: k0^2 = " + format_double(ball * ball));
  o.require(std::abs(disk * disk - g0 * g0) <= 1e-12, "disk: k0^2 error " + fmt(std::abs(disk * disk - g0 * g0)));
  o.require(std::abs(rect - kPi / 2 * std::sqrt(2.0)) <= 1e-12, "rect error " + fmt(std::abs(rect - kPi / 2 * std::sqrt(2.0))));
  o.require(interval == kPi / 2, "interval: " + format_double(interval));
  o.note("lambda(ball)=pi^2 exact, disk err " + fmt(std::abs(disk * disk - g0 * g0)) + ", rect err " +
         fmt(std::abs(rect - kPi / 2 * std::sqrt(2.0))) + ", interval exact");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double g = std::abs(gamma0() - 2.404825557695773);
  o.require(g <= 1e-12, "gamma0 error " + fmt(g));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> xs(0.5, 50.0);
  std::uniform_int_distribution<int> ns(1, 30);
  double rec = 0.0, wr = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = xs(rng);
    const int n = ns(rng);
    rec = std::max(rec, std::abs(bessel_j(n - 1, x) + bessel_j(n + 1, x) - 2.0 * n / x * bessel_j(n, x)));
    const double w = bessel_j(n, x) * bessel_y(n - 1, x) - bessel_j(n - 1, x) * bessel_y(n, x);
    // relative to the size of the products, which grow with Y_n for n > x
    const double scale = std::max(1.0, std::abs(bessel_j(n - 1, x) * bessel_y(n, x)));
    wr = std::max(wr, std::abs(w - 2.0 / (kPi * x)) / scale);
  }
  o.require(rec <= 1e-10, "recurrence residual " + fmt(rec));
  o.require(wr <= 1e-10, "Wronskian residual " + fmt(wr));
  o.note("gamma0 err " + fmt(g) + ", recurrence " + fmt(rec) + ", Wronskian " + fmt(wr));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const BoundaryCurve disk = Circle{{0.0, 0.0}, 1.0};
  const Eigen::VectorXd grid = angle_grid();
  double worst = 0.0;
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    const WaveParams w = WaveParams::from_angle(k, 0.0);
    const FarFieldPattern f = far_field(disk, solve_exterior_dirichlet(disk, w, 256), w, grid);
    const FarFieldPattern s = disk_farfield_series(1.0, w, grid, min_disk_truncation(k, 1.0));
    const double rel = l2_distance(f, s) / circle_l2_norm(s.values);
    worst = std::max(worst, rel);
    o.require(rel <= 1e-6, "k=" + fmt(k) + " relative L2 " + fmt(rel));
  }
  o.note("max relative L2 " + fmt(worst));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const std::vector<std::pair<std::string, BoundaryCurve>> shapes{
      {"disk", Circle{{0.0, 0.0}, 1.0}}, {"ellipse", Ellipse{{0.0, 0.0}, 1.0, 0.5}}, {"kite", Kite{{0.0, 0.0}, 1.0}}};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  double rec = 0.0, opt = 0.0;
  for (const auto& [name, curve] : shapes) {
    const DirichletScatteringSolver solver(curve, 1.0, 128);
    for (int i = 0; i < 16; ++i) {
      const WaveParams a = WaveParams::from_angle(1.0, angle(rng));
      const WaveParams b = WaveParams::from_angle(1.0, angle(rng));
      const Density da = solver.solve(a);
      const Density db = solver.solve(b);
      rec = std::max(rec, std::abs(far_field_at(curve, da, a, -b.d) - far_field_at(curve, db, b, -a.d)));
      opt = std::max(opt, optical_theorem_residual(curve, da, a));
    }
  }
  o.require(rec <= 1e-6, "reciprocity residual " + fmt(rec));
  o.require(opt <= 1e-5, "optical theorem residual " + fmt(opt));
  o.note("reciprocity " + fmt(rec) + ", optical theorem " + fmt(opt) + " (c(k)=sqrt(8pi/k), phase -pi/4)");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const double l1 = 2 * kPi * kPi, l2 = 5 * kPi * kPi;
  std::vector<double> err;
  double e1 = 0.0, e2 = 0.0;
  for (int m : {32, 64, 128}) {
    const EigenResult r = fd_dirichlet_eigs(GridDomain::square(1.0, 1.0 / m), 2);
    err.push_back(std::abs(r.eigenvalues[0] - l1));
    if (m == 128) {
      e1 = std::abs(r.eigenvalues[0] - l1) / l1;
      e2 = std::abs(r.eigenvalues[1] - l2) / l2;
    }
  }
  o.require(e1 <= 0.005, "lambda1 relative error " + fmt(e1));
  o.require(e2 <= 0.01, "lambda2 relative error " + fmt(e2));
  const double p1 = std::log2(err[0] / err[1]);
  const double p2 = std::log2(err[1] / err[2]);
  o.require(std::abs(p1 - 2.0) <= 0.2 && std::abs(p2 - 2.0) <= 0.2, "orders " + fmt(p1) + ", " + fmt(p2));
  bool monotone = true;
  double previous = INFINITY;
  for (double s : {0.5, 0.625, 0.75, 0.875, 1.0}) {
    const double l = fd_dirichlet_eigs(GridDomain::square(s, 1.0 / 64, Point2((1 - s) / 2, (1 - s) / 2)), 1).eigenvalues[0];
    monotone = monotone && l < previous;
    previous = l;
  }
  o.require(monotone, "nested-square monotonicity violated");
  o.note("lambda1 err " + fmt(e1) + ", lambda2 err " + fmt(e2) + ", orders " + fmt(p1) + "/" + fmt(p2) +
         ", nested squares monotone");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const std::vector<SupersolutionCandidate> candidates{make_disk_candidate(1.0), make_ball_candidate(1.0),
                                                       make_rect_candidate(1.0, 1.0), make_slab_candidate(1.0)};
  for (const SupersolutionCandidate& c : candidates) {
    const double k0 = reference_wavenumber(c);
    const std::string name = kind_name(c);
    o.require(verify_supersolution(c, k0).pass, name + " fails at k0");
    o.require(verify_supersolution(c, 0.9 * k0).pass, name + " fails at 0.9 k0");
    const VerificationReport r = verify_supersolution(c, 1.1 * k0);
    o.require(!r.pass, name + " passes at 1.1 k0");
    o.require(r.max_residual > 0.0, name + " witness residual not positive");
    bool interior = false;
    try {
      interior = eval_candidate(c, r.witness_max).value > 0.0;
    } catch (const OutOfRegionError&) {
    }
    o.require(interior, name + " witness not interior");
  }

  // Liouville identity and its Helmholtz form, for every candidate with a planar section.
  const double k = 1.0;
  const Point2 d(std::cos(0.4), std::sin(0.4));
  const Field2D u{[k, d](const Point2& p) { return std::cos(k * p.dot(d)); },
                  [k, d](const Point2& p) { return -k * k * std::cos(k * p.dot(d)); }};
  double worst = 0.0;
  for (std::size_t i : {0u, 2u, 3u}) {
    const Field2D v = planar_section(candidates[i]);
    std::vector<double> ident, trans;
    for (double h : {0.04, 0.02, 0.01}) {
      // one ring of padding so the scored nodes cover [-0.5, 0.5]^2 at every h
      const int n = static_cast<int>(std::lround(1.0 / h)) + 3;
      const LiouvilleResidual r = liouville_identity_residual(u, v, k, Grid2D{Point2(-0.5 - h, -0.5 - h), h, n, n});
      ident.push_back(r.identity_residual);
      trans.push_back(r.transformed_residual);
    }
    for (const auto& series : {ident, trans}) {
      for (int j = 0; j < 2; ++j) {
        const double p = std::log2(series[j] / series[j + 1]);
        worst = std::max(worst, std::abs(p - 2.0));
        o.require(std::abs(p - 2.0) <= 0.2, kind_name(candidates[i]) + " Liouville order " + fmt(p));
      }
    }
  }
  o.note("all four candidates pass at k0 and 0.9 k0, fail at 1.1 k0; max |order - 2| " + fmt(worst));
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> size(0.5, 2.0);
  std::uniform_real_distribution<double> factor(0.7, 1.3);
  int decided = 0, indeterminate = 0;
  for (int i = 0; i < 20; ++i) {
    RegionSpec region;
    switch (i % 3) {
      case 0: region = Rect{size(rng), size(rng)}; break;
      case 1: region = Interval{size(rng)}; break;
      default: {
        const double side = 0.5 * size(rng);
        const double h = side / 32;
        region = (i % 2) ? GridDomain::l_shape(side, h) : GridDomain::square(side, h);
      }
    }
    const double k0 = uniqueness_threshold(region);
    const double k = factor(rng) * k0;
    const AdmissibilityDecision dec = decide_admissibility(region, k);
    if (dec.verdict == Verdict::Indeterminate) {
      ++indeterminate;
      o.require(std::abs(k * k - dec.lambda1) <= dec.band, "case " + std::to_string(i) + " indeterminate outside band");
      continue;
    }
    ++decided;
    const bool expected = k <= k0;
    o.require((dec.verdict == Verdict::Admissible) == expected, "case " + std::to_string(i) + " disagrees");
    if (dec.verdict == Verdict::Admissible) {
      o.require(dec.candidate && verify_supersolution(*dec.candidate, k).pass,
                "case " + std::to_string(i) + " candidate does not verify");
    } else {
      o.require(dec.residual > 0.0 && dec.witness.size() > 0, "case " + std::to_string(i) + " witness missing");
    }
  }
  o.require(decided >= 15, "only " + std::to_string(decided) + " cases decided");
  o.note(std::to_string(decided) + " decided cases agree, " + std::to_string(indeterminate) + " inside the band");
  return o;
}

Outcome criterion8() {
  Outcome o;
  SweepConfig c;
  c.curve_a = Circle{{0.0, 0.0}, 1.0};
  c.curve_b = Kite{{0.0, 0.0}, 1.0};
  c.n = 256;
  const double k0 = sweep_threshold(c);
  c.k = {0.9 * k0};
  const SweepRow r = separation_sweep(c).at(0);
  o.require(!r.error, "solve failed");
  o.require(r.below_threshold, "k not below threshold");
  o.require(r.delta >= 10 * r.error_floor, "delta " + fmt(r.delta) + " vs floor " + fmt(r.error_floor));
  SweepConfig same = c;
  same.curve_b = same.curve_a;
  const SweepRow s = separation_sweep(same).at(0);
  o.require(s.delta <= s.error_floor, "identical obstacles: delta " + fmt(s.delta) + " > floor " + fmt(s.error_floor));
  o.note("k = " + fmt(c.k[0]) + ", delta " + fmt(r.delta) + ", floor " + fmt(r.error_floor) +
         ", identical delta " + fmt(s.delta));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "closed-form thresholds", 1.0, criterion1},
      {2, "special functions", 1.0, criterion2},
      {3, "forward solver vs disk series", 10.0, criterion3},
      {4, "reciprocity and optical theorem", 30.0, criterion4},
      {5, "FD eigensolver", 60.0, criterion5},
      {6, "supersolution suite", 30.0, criterion6},
      {7, "admissibility consistency", 60.0, criterion7},
      {8, "separation experiment", 60.0, criterion8},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) o.require(false, "runtime " + fmt(secs) + " s over " + fmt(c.limit_s) + " s");
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << fmt(secs) << " s]" << std::endl;
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
