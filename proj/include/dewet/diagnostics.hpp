#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dewet/state.hpp"
#include "dewet/wetting.hpp"

namespace dewet {

struct Sample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double h_min = 0.0;
  int agglomerates = 0;
  double x_c = std::nan("");  // NaN when contact tracking is off or failed
};

struct Event {
  long step = 0;
  double t = 0.0;
  std::string kind;  // pinch_off | absorption | extension | energy_increase |
                     // unphysical | stationary | tau_retry | truncated
  std::string detail;
};

// Everything a run measures: the sampled series, the event log, snapshot
// labels, and conservation accounting.  mass_baseline starts at the
// initial mass and jumps by the appended integral on each extension.
struct RunRecord {
  std::vector<Sample> samples;
  std::vector<Event> events;
  std::vector<std::pair<double, std::string>> snapshots;

  double initial_mass = 0.0;
  double mass_baseline = 0.0;
  double max_rel_mass_drift = 0.0;
  double max_rel_energy_increase = 0.0;
  double shedding_threshold = 0.0;
  long steps_taken = 0;
  bool reached_stationary = false;
  bool aborted_unphysical = false;
  std::string failure;  // empty on success
};

// Sampling cadence and measurement parameters used by run drivers.
struct DiagnosticsConfig {
  double cadence = 1.0;  // time between samples; clamped to >= one step
  double agglomerate_threshold = 0.1;
  // Valley threshold for shedding; NaN resolves to max(2 eps^2, 1e-5).
  double shedding_threshold = std::nan("");
  bool track_contact = false;
  double contact_h_c = 0.2;
  double contact_alpha = 0.1;
  // Stop the run at the first sample with h_min at or below the shedding
  // threshold (the crossing is always logged as an event).
  bool stop_on_shedding = false;
  // Window for the h_min series (default: whole domain).  1D uses x only.
  std::optional<std::array<double, 4>> min_window;  // x_lo, x_hi, y_lo, y_hi
  // 1D only: clip the window's left edge to the current argmax of h, so
  // the series tracks the valley right of the retraction ridge and never
  // the wetting layer exposed behind it (whose level sits below the
  // shedding threshold).  Default on for semi-infinite runs.
  bool min_right_of_peak = false;
};

double resolved_shedding_threshold(const DiagnosticsConfig& d, const WettingParams& p);

template <class StateT>
struct RunHooks {
  std::function<void(const StateT&, const std::string& label)> on_snapshot;
  std::function<void(const StateT&, const Sample&)> on_sample;
  std::function<void(const Event&)> on_event;
};

// One agglomerate: a maximal region above the census threshold.  In 1D
// the support is a node index range; on triangulations it is a connected
// node set (bbox kept for reporting).
struct AgglomerateComponent {
  std::vector<int> nodes;
  double mass = 0.0;
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
};

struct AgglomerateReport {
  int count = 0;
  std::vector<AgglomerateComponent> components;
};

struct FitResult {
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  double determination = 0.0;  // R^2
};

double mass(const Film2d& state);
double mass(const Film3d& state);

// Discrete free energy with the same element-constant quadrature the
// stepper uses: sum_e energy(h_e) * q_e * |e|.
double energy(const Film2d& state, const WettingParams& p);
double energy(const Film3d& state, const WettingParams& p);

struct MinHeight {
  double value = 0.0;
  double x = 0.0;
  double y = 0.0;
};

MinHeight min_height(const Film2d& state,
                     std::optional<std::array<double, 2>> window = {});
MinHeight min_height(const Film3d& state,
                     std::optional<std::array<double, 4>> window = {});

// Census of regions with h > threshold: maximal node runs in 1D,
// connected components over triangulation edges in 2D.  Component mass
// integrates h over the elements owned by the component (an element
// belongs to a component when any of its nodes does; components cannot
// share elements since they are separated by sub-threshold nodes).
AgglomerateReport count_agglomerates(const Film2d& state, double threshold);
AgglomerateReport count_agglomerates(const Film3d& state, double threshold);

// First time the sampled h_min series reaches the record's shedding
// threshold, linearly interpolated between samples; absent if never.
std::optional<double> first_shedding_time(const RunRecord& record);
std::optional<double> first_shedding_time(const RunRecord& record, double threshold);

// Quadratic fit over the contiguous flank band alpha <= h <= h_c nearest
// the bare region; returns the fit root closest to the band.
double effective_contact_point(const Film2d& state, double h_c = 0.2, double alpha = 0.1);

// Least squares of x_c(t) in the basis {1, t^0.2, t^0.4}; coefficients
// are stored in that basis order.
FitResult fit_contact_law(std::span<const double> t, std::span<const double> x_c);

// Log-log line fit; coefficients = {prefactor, exponent}.
FitResult fit_power_law(std::span<const double> x, std::span<const double> y);

// Median height at distance >= margin from every agglomerate.
double wetting_layer_thickness(const Film2d& state, double threshold = 0.1,
                               double margin = 5.0);

}  // namespace dewet
