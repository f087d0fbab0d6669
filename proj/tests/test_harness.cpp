#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "scatlab/error.hpp"
#include "scatlab/harness.hpp"
#include "scatlab/parse.hpp"

using namespace scatlab;

namespace {

const BoundaryCurve kDisk = Circle{{0.0, 0.0}, 1.0};
const BoundaryCurve kKite = Kite{{0.0, 0.0}, 1.0};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::ofstream(name) << text;
  return name;
}

}  // namespace

TEST_CASE("self_consistency examples") {
  CHECK(self_consistency(kKite, WaveParams::from_angle(1.0, 0.0), 128, 256) <= 1e-8);
  CHECK(self_consistency(kDisk, WaveParams::from_angle(1.0, 0.0), 64, 128) <= 1e-9);
  CHECK(self_consistency(kKite, WaveParams::from_angle(1.0, 0.0), 64, 64) == 0.0);
  CHECK_THROWS_AS(self_consistency(kKite, WaveParams::from_angle(1.0, 0.0), 128, 64), UsageError);
}

TEST_CASE("identical obstacles are indistinguishable") {
  SweepConfig c;
  c.curve_a = kDisk;
  c.curve_b = kDisk;
  c.k = {0.5, 1.0, 2.0};
  for (const SweepRow& r : separation_sweep(c)) {
    CHECK(r.delta <= r.error_floor);
    CHECK_FALSE(r.error);
  }
}

TEST_CASE("disk versus kite at k = 1") {
  SweepConfig c;
  c.curve_a = kDisk;
  c.curve_b = kKite;
  c.k = {1.0};
  c.n = 256;
  const SweepRow r = separation_sweep(c).at(0);
  CHECK(r.delta >= 10 * r.error_floor);
  CHECK(r.below_threshold);
}

TEST_CASE("translated disk is distinguishable") {
  SweepConfig c;
  c.curve_a = kDisk;
  c.curve_b = Circle{{0.5, 0.0}, 1.0};
  c.k = {1.0};
  const SweepRow r = separation_sweep(c).at(0);
  CHECK(r.delta > 10 * r.error_floor);
  CHECK(r.threshold_k0 == doctest::Approx(uniqueness_threshold(Ball{2, 1.25})).epsilon(1e-7));
}

TEST_CASE("delta is symmetric bit for bit and rows are sorted") {
  SweepConfig ab;
  ab.curve_a = kDisk;
  ab.curve_b = kKite;
  ab.k = {0.3, 0.8, 1.4, 2.0, 2.6};
  ab.n = 64;
  SweepConfig ba = ab;
  std::swap(ba.curve_a, ba.curve_b);
  const std::vector<SweepRow> x = separation_sweep(ab);
  const std::vector<SweepRow> y = separation_sweep(ba);
  REQUIRE(x.size() == 5);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].k == ab.k[i]);
    CHECK(x[i].delta == y[i].delta);
    CHECK(x[i].error_floor == y[i].error_floor);
    CHECK(x[i].below_threshold == (x[i].k <= x[i].threshold_k0));
    CHECK(x[i].delta >= 0.0);
    CHECK(x[i].error_floor >= 0.0);
  }
}

TEST_CASE("region override sets the threshold") {
  SweepConfig c;
  c.curve_a = kDisk;
  c.curve_b = kKite;
  c.k = {1.0, 1.6};
  c.n = 64;
  c.region = Interval{1.0};
  const std::vector<SweepRow> rows = separation_sweep(c);
  CHECK(rows[0].threshold_k0 == uniqueness_threshold(Interval{1.0}));
  CHECK(rows[0].below_threshold);
  CHECK_FALSE(rows[1].below_threshold);
}

TEST_CASE("failed rows are reported") {
  SweepConfig c;
  c.curve_a = kDisk;
  c.curve_b = kKite;
  c.k = {1.0, 40.0};
  c.n = 64;
  const std::vector<SweepRow> rows = separation_sweep(c);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].error);
  REQUIRE(rows[1].error);
  CHECK(std::isnan(rows[1].delta));
  const std::string csv = format_sweep_csv(rows);
  CHECK(csv.find("40,nan,nan,") != std::string::npos);
}

TEST_CASE("config parsing and validation") {
  const SweepConfig c = parse_sweep_config(
      R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "d": [0, 1],
          "k": {"linspace": [0.5, 1.5, 3]}, "n": 64, "angles": 90, "output": "x.csv", "region": "rect 1 1"})");
  CHECK(c.k == std::vector<double>{0.5, 1.0, 1.5});
  CHECK(c.d == Point2(0.0, 1.0));
  CHECK(c.n == 64);
  CHECK(c.angles == 90);
  CHECK(c.output == "x.csv");
  CHECK(std::holds_alternative<Rect>(*c.region));

  const SweepConfig a = parse_sweep_config(R"({"curve_a": "circle 0 0 1", "curve_b": "circle 1 0 1", "k": [1], "d": 0.5})");
  CHECK(a.d.x() == std::cos(0.5));
  CHECK(a.n == 128);

  const char* bad[] = {
      R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": [-1, 1]})",
      R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": [2, 1]})",
      R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": [1, 1]})",
      R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": []})",
      R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": [1], "n": 63})",
      R"({"curve_a": "circle 0 0 -1", "curve_b": "kite 0 0 1", "k": [1]})",
      R"({"curve_a": "circle 0 0 1", "k": [1]})",
      R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": [1], "d": [1, 1]})",
      R"([1, 2])",
      R"({not json)",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_sweep_config(text), UsageError);
  }
}

TEST_CASE("CSV format") {
  SweepRow r;
  r.k = 0.1;
  r.delta = 1.0 / 3.0;
  r.error_floor = 0.0;
  r.threshold_k0 = 2.0;
  r.below_threshold = true;
  CHECK(format_sweep_csv({r}) ==
        "k,delta,error_floor,threshold_k0,below_threshold\n"
        "0.10000000000000001,0.33333333333333331,0,2,true\n");
}

TEST_CASE("cli examples") {
  const CliResult t = run({"threshold", "--region", "rect", "1", "1"});
  CHECK(t.code == 0);
  CHECK(t.out.rfind("2.221441469", 0) == 0);
  CHECK(parse_double(t.out.substr(0, t.out.size() - 1), "threshold") ==
        doctest::Approx(std::numbers::pi / 2 * std::sqrt(2.0)).epsilon(1e-15));

  const CliResult v = run({"verify", "--candidate", "slab", "1", "--k", "2.0"});
  CHECK(v.code == 0);
  CHECK(v.out.find("\"pass\":false") != std::string::npos);

  const std::string cfg = write_temp("harness_bad_sweep.json",
                                     R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": [-1, 1]})");
  const CliResult s = run({"sweep", "--config", cfg});
  CHECK(s.code == 1);
  std::remove(cfg.c_str());
}

TEST_CASE("cli subcommands") {
  const CliResult f = run({"forward", "--curve", "kite", "0", "0", "1", "--k", "1", "--d", "0", "--angles", "8"});
  CHECK(f.code == 0);
  CHECK(f.out.rfind("theta,re,im\n0,", 0) == 0);
  CHECK(std::count(f.out.begin(), f.out.end(), '\n') == 9);

  const CliResult neg = run({"forward", "--curve", "circle -1 0 1", "--k", "1", "--d", "-0.5", "--angles", "4"});
  CHECK(neg.code == 0);

  const std::string mask = write_temp("harness_square.mask", format_mask(GridDomain::square(1.0, 1.0 / 32)));
  const CliResult e = run({"eig", "--mask", mask, "--count", "2"});
  CHECK(e.code == 0);
  CHECK(e.out.rfind("index,lambda,error_estimate,extrapolated\n1,19.", 0) == 0);
  const CliResult th = run({"threshold", "--region", "mask", mask});
  CHECK(th.code == 0);
  std::remove(mask.c_str());

  const std::string out_path = "harness_sweep_out.csv";
  const std::string cfg = write_temp("harness_sweep.json",
                                     R"({"curve_a": "circle 0 0 1", "curve_b": "kite 0 0 1", "k": [0.5, 1.0], "n": 64,
                                         "output": ")" + out_path + R"("})");
  const CliResult s = run({"sweep", "--config", cfg});
  CHECK(s.code == 0);
  std::ifstream in(out_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,delta,error_floor,threshold_k0,below_threshold");
  std::remove(cfg.c_str());
  std::remove(out_path.c_str());

  CHECK(run({"selftest"}).code == 0);
}

TEST_CASE("cli exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"threshold"}).code == 1);
  CHECK(run({"threshold", "--region", "rect", "1"}).code == 1);
  CHECK(run({"verify", "--candidate", "slab", "1", "--k", "abc"}).code == 1);
  CHECK(run({"eig", "--mask", "/nonexistent/mask", "--count", "1"}).code == 1);
  CHECK(run({"sweep", "--config", "/nonexistent/config.json"}).code == 1);
  // numerical failures: too few nodes for the wavenumber, bounded axis under-resolved
  const CliResult r = run({"forward", "--curve", "kite 0 0 1", "--k", "20", "--d", "0", "--n", "16"});
  CHECK(r.code == 2);
  CHECK(r.err.find("numerical failure") != std::string::npos);
  CHECK(run({"verify", "--candidate", "slab", "1", "--k", "1", "--spacing", "0.5"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
