#pragma once

#include <string>
#include <vector>

#include "dewet/diagnostics.hpp"
#include "dewet/profiles.hpp"
#include "dewet/state.hpp"
#include "dewet/wetting.hpp"

namespace dewet {

// Sweep axes: the cross product of non-empty lists defines the runs.
// theta sets sigma = cos(theta); length sets a centered stepped profile.
struct SweepAxes {
  std::vector<double> epsilon;
  std::vector<double> theta;
  std::vector<double> length;

  bool active() const { return !epsilon.empty() || !theta.empty() || !length.empty(); }
};

// One experiment as read from a config file.  NaN-valued scalars mean
// "resolve to the documented default" (see resolve()).
struct RunConfig {
  int dimension = 2;  // 2 or 3

  double sigma = 0.5;
  double epsilon = 0.1;
  double h_bar = std::nan("");  // default: epsilon

  ProfileSpec profile;

  bool has_domain = false;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double dx = std::nan("");  // default: epsilon (2D)
  int nx = 0, ny = 0;        // 3D alternative to dx

  SimOptions sim;
  DiagnosticsConfig diag;
  bool min_window_auto = true;  // h_min window from the profile support

  std::string output_dir = "out";
  SweepAxes sweep;
};

// Parses the documented key-value format.  Unknown sections or keys are
// errors; messages carry line numbers.  No defaults are resolved here.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

// Fills defaulted fields (domain box, dx, h_bar, diagnostics window),
// validates everything, and returns human-readable warnings (for
// instance a domain margin under 5 length units).  Throws on hard
// errors.
std::vector<std::string> resolve(RunConfig& config);

// Expands sweep axes into concrete runs (resolve() applied to each) with
// axis-tagged output subdirectories.
std::vector<RunConfig> expand_sweep(const RunConfig& config);

WettingParams wetting_params(const RunConfig& config);

}  // namespace dewet
