#include "scatlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include <json.hpp>

#include "scatlab/error.hpp"
#include "scatlab/parse.hpp"

namespace scatlab {
namespace {

using nlohmann::json;

double json_number(const json& j, const char* what) {
  if (!j.is_number()) throw UsageError(std::string("config field '") + what + "' must be a number");
  return j.get<double>();
}

std::string json_string(const json& j, const char* what) {
  if (!j.is_string()) throw UsageError(std::string("config field '") + what + "' must be a string");
  return j.get<std::string>();
}

int json_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw UsageError(std::string("config field '") + what + "' must be an integer");
  return j.get<int>();
}

std::vector<double> parse_k_values(const json& j) {
  std::vector<double> ks;
  if (j.is_array()) {
    for (const json& v : j) ks.push_back(json_number(v, "k"));
    return ks;
  }
  if (j.is_object() && j.contains("linspace")) {
    const json& l = j.at("linspace");
    if (!l.is_array() || l.size() != 3) throw UsageError("k.linspace must be [start, stop, count]");
    const double a = json_number(l[0], "k.linspace start");
    const double b = json_number(l[1], "k.linspace stop");
    const int count = json_int(l[2], "k.linspace count");
    if (count < 1) throw UsageError("k.linspace count must be positive");
    for (int i = 0; i < count; ++i) ks.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    return ks;
  }
  throw UsageError("config field 'k' must be an array or {\"linspace\": [start, stop, count]}");
}

struct CurveSolve {
  FarFieldPattern coarse;
  double floor;
};

CurveSolve solve_with_floor(const BoundaryCurve& curve, const WaveParams& wave, int n, int angles) {
  const Eigen::VectorXd grid = angle_grid(angles);
  FarFieldPattern coarse = far_field(curve, solve_exterior_dirichlet(curve, wave, n), wave, grid);
  const FarFieldPattern fine = far_field(curve, solve_exterior_dirichlet(curve, wave, 2 * n), wave, grid);
  const double floor = l2_distance(coarse, fine);
  return {std::move(coarse), floor};
}

SweepRow run_row(const SweepConfig& config, double k, double threshold) {
  SweepRow row;
  row.k = k;
  row.threshold_k0 = threshold;
  row.below_threshold = k <= threshold;
  try {
    const WaveParams wave = WaveParams::make(k, config.d);
    const CurveSolve a = solve_with_floor(config.curve_a, wave, config.n, config.angles);
    const CurveSolve b = solve_with_floor(config.curve_b, wave, config.n, config.angles);
    row.delta = l2_distance(a.coarse, b.coarse);
    row.error_floor = a.floor + b.floor;
  } catch (const Error& e) {
    row.delta = std::numeric_limits<double>::quiet_NaN();
    row.error_floor = std::numeric_limits<double>::quiet_NaN();
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("sweep config must be a JSON object");
  for (const char* key : {"curve_a", "curve_b", "k"}) {
    if (!j.contains(key)) throw UsageError(std::string("sweep config lacks '") + key + "'");
  }
  SweepConfig c;
  c.curve_a = parse_curve(json_string(j.at("curve_a"), "curve_a"));
  c.curve_b = parse_curve(json_string(j.at("curve_b"), "curve_b"));
  c.k = parse_k_values(j.at("k"));
  if (j.contains("d")) {
    const json& d = j.at("d");
    if (d.is_number()) {
      const double theta = d.get<double>();
      c.d = Point2(std::cos(theta), std::sin(theta));
    } else if (d.is_array() && d.size() == 2) {
      c.d = Point2(json_number(d[0], "d[0]"), json_number(d[1], "d[1]"));
      if (std::abs(c.d.norm() - 1.0) > 1e-12) throw UsageError("config field 'd' must be a unit vector");
    } else {
      throw UsageError("config field 'd' must be an angle or a 2-vector");
    }
  }
  if (j.contains("n")) c.n = json_int(j.at("n"), "n");
  if (j.contains("angles")) c.angles = json_int(j.at("angles"), "angles");
  if (j.contains("output")) c.output = json_string(j.at("output"), "output");
  if (j.contains("region")) c.region = parse_region(json_string(j.at("region"), "region"));
  validate_sweep_config(c);
  return c;
}

void validate_sweep_config(const SweepConfig& c) {
  if (c.k.empty()) throw UsageError("sweep needs at least one k value");
  for (std::size_t i = 0; i < c.k.size(); ++i) {
    if (!(c.k[i] > 0.0) || !std::isfinite(c.k[i])) {
      throw UsageError("k values must be positive, got " + format_double(c.k[i]));
    }
    if (i > 0 && !(c.k[i] > c.k[i - 1])) throw UsageError("k values must be strictly increasing");
  }
  if (c.n < 8 || c.n % 2 != 0) throw UsageError("n must be even and at least 8");
  if (c.angles < 1) throw UsageError("angles must be positive");
  if (std::abs(c.d.norm() - 1.0) > 1e-12) throw UsageError("incident direction must be a unit vector");
}

double sweep_threshold(const SweepConfig& config) {
  if (config.region) return uniqueness_threshold(*config.region);
  const BoundaryCurve both[] = {config.curve_a, config.curve_b};
  return uniqueness_threshold(Ball{2, min_enclosing_ball(std::span<const BoundaryCurve>(both)).radius});
}

std::vector<SweepRow> separation_sweep(const SweepConfig& config) {
  validate_sweep_config(config);
  const double threshold = sweep_threshold(config);
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(config.k.size());
  for (double k : config.k) {
    jobs.push_back(std::async(std::launch::async, [&config, k, threshold] { return run_row(config, k, threshold); }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& job : jobs) rows.push_back(job.get());
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.k < b.k; });
  return rows;
}

double self_consistency(const BoundaryCurve& curve, const WaveParams& wave, int n1, int n2, int angles) {
  if (n1 > n2) throw UsageError("self_consistency needs n1 <= n2");
  const Eigen::VectorXd grid = angle_grid(angles);
  const FarFieldPattern a = far_field(curve, solve_exterior_dirichlet(curve, wave, n1), wave, grid);
  if (n1 == n2) return 0.0;
  const FarFieldPattern b = far_field(curve, solve_exterior_dirichlet(curve, wave, n2), wave, grid);
  return l2_distance(a, b);
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "k,delta,error_floor,threshold_k0,below_threshold\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.k) + "," + format_double(r.delta) + "," + format_double(r.error_floor) + "," +
           format_double(r.threshold_k0) + "," + (r.below_threshold ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace scatlab
