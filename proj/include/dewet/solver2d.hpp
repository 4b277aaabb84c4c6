#pragma once

#include "dewet/diagnostics.hpp"
#include "dewet/linear_solver.hpp"
#include "dewet/state.hpp"
#include "dewet/wetting.hpp"

namespace dewet {

struct StepInfo {
  int iterations = 0;     // Krylov iterations (0 for direct backends)
  double residual = 0.0;  // relative residual of the accepted solution
};

// One semi-implicit step couples h and mu in a single band system; the
// unknowns interleave as (h_0, mu_0, h_1, mu_1, ...), giving bandwidth 3.
// The band is filled directly from the element loop and factored by
// LAPACK each step.
class Film2dStepper {
 public:
  Film2dStepper(const WettingParams& p, const SimOptions& opts);

  // Advances state by tau in place.  Throws on solver failure.
  StepInfo advance(Film2d& state, double tau);

 private:
  WettingParams params_;
  SimOptions opts_;
  SurrogateCoeffs surrogate_;
  BandedLu band_;
  std::vector<double> saved_band_;  // copy for the residual check
  Vector rhs_;
};

// Single step as a pure function: returns (h, mu, t + tau).
Film2d step(const Film2d& state, const WettingParams& p, const SimOptions& opts);

// Appends cells on the right (new nodes at the far-field height 1) when
// |h(b) - 1| >= opts.extension_trigger; otherwise returns the state
// unchanged.
Film2d maybe_extend_domain(const Film2d& state, const SimOptions& opts);

// Advances to opts.t_end with fixed tau, sampling diagnostics at the
// configured cadence.  The state is evolved in place so the caller keeps
// the final fields.  Solver failures throw; an unphysical state aborts
// with record.failure set (unless configured to continue).
RunRecord run(Film2d& state, const WettingParams& p, const SimOptions& opts,
              const DiagnosticsConfig& diag = {}, const RunHooks<Film2d>& hooks = {});

}  // namespace dewet
