#pragma once

#include <memory>

#include "dewet/diagnostics.hpp"
#include "dewet/solver2d.hpp"
#include "dewet/state.hpp"
#include "dewet/wetting.hpp"

namespace dewet {

// Semi-implicit stepper on the graph surface.  The sparsity pattern and
// per-triangle scatter slots are built once; each step rewrites the
// values in place and solves with an ILU-preconditioned BiCGSTAB warm
// started from the previous solution (the incomplete factorization is
// rebuilt only when the iteration count degrades).  Small systems fall
// back to a direct sparse factorization.
class Film3dStepper {
 public:
  Film3dStepper(const TriMesh& mesh, const WettingParams& p, const SimOptions& opts);
  ~Film3dStepper();

  StepInfo advance(Film3d& state, double tau);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Film3d step3d(const Film3d& state, const WettingParams& p, const SimOptions& opts);

RunRecord run3d(Film3d& state, const WettingParams& p, const SimOptions& opts,
                const DiagnosticsConfig& diag = {}, const RunHooks<Film3d>& hooks = {});

}  // namespace dewet
