#ifndef LARMOR_SCENARIO_HPP
#define LARMOR_SCENARIO_HPP

// Scenario runner behind the CLI: JSON config -> solved output record,
// sweep expansion, and fixed-layout CSV emission. Everything here uses
// natural units; SI conversion happens at print time in the tool.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "larmor/clock.hpp"
#include "larmor/spin_observables.hpp"

namespace larmor {

/// Configuration problem (missing/invalid field); maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ScenarioConfig {
  double E = 0.0;
  double m = 1.0;
  double V = 0.0;
  double theta = M_PI / 2.0;
  double phi = 0.0;
  std::size_t n_segments = 1024;
  double fd_step = kDefaultFdStep;
  double unitarity_tol = 1e-10;

  // Barrier description (exactly one kind).
  enum class Kind { Rectangular, Piecewise, Sampled } kind = Kind::Rectangular;
  double U0 = 0.0;
  double d = 0.0;
  std::vector<Segment> segments;
  std::vector<double> sample_x, sample_U;

  BarrierProfile profile() const;
  PiecewiseBarrier barrier() const;
};

/// Parses and validates a config document. Error messages name the
/// offending field.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

/// One emitted row. Fixed column order; see csv_header().
struct OutputRecord {
  double axis_value = 0.0;
  double E, m, V, theta, phi;
  std::size_t n_segments;
  Complex T, R;
  double alpha, beta;
  double tau_T, tau_R, tau_L, tau_D, tau_free;
  double s1, s2, s3;
  double unitarity_residual;
  bool converged;
};

/// Solves one scenario. Solver failures propagate as larmor::Error;
/// non-converged finite differences are reported in-row.
OutputRecord compute_record(const ScenarioConfig& config, double axis_value = 0.0);

std::string csv_header();
std::string csv_row(const OutputRecord& rec);
nlohmann::json record_to_json(const OutputRecord& rec);

struct SweepSpec {
  enum class Axis { E, d, U0, V, NSegments } axis;
  double start;
  double stop;
  std::size_t count;
  bool log_spacing = false;

  static Axis parse_axis(const std::string& name);
  std::vector<double> values() const;
};

/// Applies one axis value to a copy of the base config.
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepSpec::Axis axis,
                          double value);

/// Runs the sweep with at most `threads` workers; rows come back in axis
/// order regardless of scheduling. Per-point solver failures yield rows
/// with NaN results and converged = false.
std::vector<OutputRecord> run_sweep(const ScenarioConfig& base,
                                    const SweepSpec& spec,
                                    unsigned threads = 0);

}  // namespace larmor

#endif
