#pragma once

// Shared run loop for both steppers: sampling, event detection,
// conservation accounting, snapshots, optional equilibrium early-out.
// Included only by the solver translation units.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <type_traits>

#include "dewet/diagnostics.hpp"
#include "dewet/solver2d.hpp"
#include "dewet/state.hpp"

namespace dewet::detail {

inline std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", t);
  return buf;
}

template <class StateT, class StepperT>
RunRecord run_loop(StateT& state, StepperT& stepper, const WettingParams& p,
                   const SimOptions& opts_in, const DiagnosticsConfig& diag,
                   const RunHooks<StateT>& hooks) {
  constexpr bool is_2d = std::is_same_v<StateT, Film2d>;
  validate(opts_in);
  SimOptions opts = opts_in;
  if (std::isnan(opts.unphysical_floor)) opts.unphysical_floor = -p.epsilon;

  RunRecord rec;
  rec.shedding_threshold = resolved_shedding_threshold(diag, p);
  rec.initial_mass = mass(state);
  rec.mass_baseline = rec.initial_mass;
  const double mass_scale = std::max(std::abs(rec.initial_mass), 1e-300);

  constexpr size_t kMaxEvents = 200000;
  bool events_truncated = false;
  long step_idx = 0;
  auto log_event = [&](const char* kind, std::string detail) {
    if (events_truncated) return;
    if (rec.events.size() >= kMaxEvents) {
      events_truncated = true;
      rec.events.push_back({step_idx, state.t, "truncated", "event cap reached"});
      return;
    }
    Event ev{step_idx, state.t, kind, std::move(detail)};
    if (hooks.on_event) hooks.on_event(ev);
    rec.events.push_back(std::move(ev));
  };

  auto window_min = [&]() {
    if constexpr (is_2d) {
      std::optional<std::array<double, 2>> w;
      if (diag.min_window) w = std::array<double, 2>{(*diag.min_window)[0], (*diag.min_window)[1]};
      if (diag.min_right_of_peak) {
        Eigen::Index peak = 0;
        state.h.maxCoeff(&peak);
        const double x_peak = state.mesh.nodes[peak];
        if (!w) w = std::array<double, 2>{x_peak, std::numeric_limits<double>::infinity()};
        else (*w)[0] = std::max((*w)[0], x_peak);
      }
      return min_height(state, w).value;
    } else {
      return min_height(state, diag.min_window).value;
    }
  };

  int prev_count = -1;
  bool stop = false;
  bool shed_seen = false;
  auto take_sample = [&]() {
    Sample s;
    s.t = state.t;
    s.mass = mass(state);
    s.energy = energy(state, p);
    s.h_min = window_min();
    s.agglomerates = count_agglomerates(state, diag.agglomerate_threshold).count;
    if constexpr (is_2d) {
      if (diag.track_contact) {
        try {
          s.x_c = effective_contact_point(state, diag.contact_h_c, diag.contact_alpha);
        } catch (const std::exception&) {
          s.x_c = std::nan("");
        }
      }
    }
    if (prev_count >= 0 && s.agglomerates > prev_count)
      log_event("pinch_off", std::to_string(prev_count) + " -> " + std::to_string(s.agglomerates));
    else if (prev_count >= 0 && s.agglomerates < prev_count)
      log_event("absorption", std::to_string(prev_count) + " -> " + std::to_string(s.agglomerates));
    prev_count = s.agglomerates;
    if (!shed_seen && s.h_min <= rec.shedding_threshold) {
      shed_seen = true;
      log_event("shedding", "h_min " + format_time(s.h_min));
      if (diag.stop_on_shedding) stop = true;
    }
    if (opts.stationary_tol > 0.0 && rec.samples.size() >= 1) {
      const Sample& last = rec.samples.back();
      const double dt = s.t - last.t;
      if (dt > 0.0 && std::abs(s.energy - last.energy) / dt < opts.stationary_tol) {
        rec.reached_stationary = true;
        log_event("stationary", "energy change below tolerance");
        stop = true;
      }
    }
    rec.samples.push_back(s);
    if (hooks.on_sample) hooks.on_sample(state, s);
  };

  std::vector<double> snaps = opts.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  size_t snap_idx = 0;
  auto emit_snapshots = [&](double upto) {
    while (snap_idx < snaps.size() && snaps[snap_idx] <= upto) {
      const std::string label = format_time(snaps[snap_idx]);
      if (hooks.on_snapshot) hooks.on_snapshot(state, label);
      rec.snapshots.emplace_back(state.t, label);
      ++snap_idx;
    }
  };

  double energy_prev = energy(state, p);
  const double cadence = std::max(diag.cadence, opts.tau);
  double next_sample_t = state.t + cadence;
  take_sample();
  emit_snapshots(state.t + 1e-12);

  StateT saved;
  while (!stop && state.t < opts.t_end - 0.5 * opts.tau) {
    if constexpr (is_2d) {
      if (opts.semi_infinite) {
        Film2d ext = maybe_extend_domain(state, opts);
        if (ext.h.size() != state.h.size()) {
          const double before = mass(state);
          const double after = mass(ext);
          rec.mass_baseline += after - before;
          log_event("extension",
                    "length " + format_time(ext.mesh.b - state.mesh.b) + ", new end " +
                        format_time(ext.mesh.b));
          state = std::move(ext);
          // The appended strip carries its own mass and energy; both
          // baselines move with it or every later comparison is against
          // the shorter domain.
          energy_prev = energy(state, p);
        }
      }
    }

    const bool may_retry = opts.retry_energy_increase;
    if (may_retry) saved = state;
    double tau_eff = opts.tau;
    stepper.advance(state, tau_eff);
    ++step_idx;
    double W = energy(state, p);
    if (may_retry) {
      int halvings = 0;
      while (W > energy_prev + opts.retry_threshold * std::abs(energy_prev) &&
             halvings < opts.retry_max_halvings) {
        tau_eff *= 0.5;
        ++halvings;
        state = saved;
        stepper.advance(state, tau_eff);
        W = energy(state, p);
        log_event("tau_retry", "tau " + format_time(tau_eff));
      }
    }
    rec.steps_taken = step_idx;

    if (W > energy_prev + 1e-6 * std::abs(energy_prev))
      log_event("energy_increase", "rel " + format_time((W - energy_prev) / std::abs(energy_prev)));
    if (W > energy_prev)
      rec.max_rel_energy_increase = std::max(
          rec.max_rel_energy_increase, (W - energy_prev) / std::max(std::abs(energy_prev), 1e-300));
    energy_prev = W;

    const double A = mass(state);
    rec.max_rel_mass_drift =
        std::max(rec.max_rel_mass_drift, std::abs(A - rec.mass_baseline) / mass_scale);

    const double h_floor = state.h.minCoeff();
    if (h_floor < opts.unphysical_floor) {
      log_event("unphysical", "min h " + format_time(h_floor));
      if (!opts.continue_on_unphysical) {
        rec.aborted_unphysical = true;
        rec.failure = "unphysical state: min h " + format_time(h_floor) + " at t " +
                      format_time(state.t);
        take_sample();
        return rec;
      }
    }

    emit_snapshots(state.t + 0.5 * opts.tau);
    if (state.t >= next_sample_t - 1e-9 * opts.tau) {
      take_sample();
      next_sample_t += cadence;
    }
  }

  if (!rec.samples.empty() && rec.samples.back().t < state.t - 1e-9 * opts.tau) take_sample();
  emit_snapshots(state.t + 0.5 * opts.tau);
  return rec;
}

}  // namespace dewet::detail
