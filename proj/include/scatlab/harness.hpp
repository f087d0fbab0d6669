#ifndef SCATLAB_HARNESS_HPP
#define SCATLAB_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scatlab/eigencalc.hpp"
#include "scatlab/forward.hpp"
#include "scatlab/geometry.hpp"

namespace scatlab {

struct SweepConfig {
  BoundaryCurve curve_a;
  BoundaryCurve curve_b;
  Point2 d{1.0, 0.0};
  std::vector<double> k;  // strictly positive, strictly increasing
  int n = 128;
  int angles = 360;
  std::string output;                // empty: standard output
  std::optional<RegionSpec> region;  // default: enclosing disk of both curves
};

struct SweepRow {
  double k = 0.0;
  double delta = 0.0;        // L2 distance of the two far fields
  double error_floor = 0.0;  // n vs 2n self-consistency of both solves
  double threshold_k0 = 0.0;
  bool below_threshold = false;
  std::optional<std::string> error;  // set when the row's solves failed
};

/// Parses the JSON sweep config. `k` is either an array or
/// {"linspace": [start, stop, count]}; `d` an angle in radians or a unit
/// 2-vector; curves and `region` use the text spec grammars.
SweepConfig parse_sweep_config(const std::string& json_text);

/// Throws UsageError on nonpositive or non-increasing k, odd or tiny n.
void validate_sweep_config(const SweepConfig& config);

/// Uniqueness threshold used for a sweep: the override region when given,
/// otherwise the disk of radius equal to the minimal enclosing radius of both
/// curves.
double sweep_threshold(const SweepConfig& config);

/// One row per k, in ascending k; rows are computed concurrently. A row whose
/// solves fail carries the message and NaN measurements.
std::vector<SweepRow> separation_sweep(const SweepConfig& config);

/// Far-field L2 distance between discretizations with n1 and n2 nodes.
double self_consistency(const BoundaryCurve& curve, const WaveParams& wave, int n1, int n2, int angles = 360);

/// `k,delta,error_floor,threshold_k0,below_threshold` with 17 significant
/// digits.
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

/// Entry point of the command-line tool (arguments exclude the program
/// name). Returns 0 on success, 1 on usage errors, 2 on numerical failures.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scatlab

#endif  // SCATLAB_HARNESS_HPP
