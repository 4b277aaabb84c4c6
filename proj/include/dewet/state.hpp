#pragma once

#include <cmath>
#include <vector>

#include "dewet/assembly.hpp"
#include "dewet/linear_solver.hpp"
#include "dewet/mesh.hpp"

namespace dewet {

// Nodal height and chemical potential on a mesh.  mu is meaningful after
// the first step (it is an unknown of the coupled solve, not initial
// data).
template <class MeshT>
struct FilmState {
  MeshT mesh;
  Vector h;
  Vector mu;
  double t = 0.0;
};

using Film2d = FilmState<IntervalMesh>;
using Film3d = FilmState<TriMesh>;

template <class MeshT>
FilmState<MeshT> make_state(MeshT mesh, Vector h, double t = 0.0) {
  FilmState<MeshT> s;
  s.mu = Vector::Zero(h.size());
  s.mesh = std::move(mesh);
  s.h = std::move(h);
  s.t = t;
  return s;
}

// Which weight the wetting load carries.  The two coincide wherever the
// film is flat; they differ by a factor Q^2 on slopes.
enum class WeakForm {
  Paper,       // load weight 1/Q, the variational form as printed
  Consistent,  // load weight Q, the exact first variation
};

struct SimOptions {
  double tau = 0.1;
  double t_end = 0.0;
  WeakForm weak_form = WeakForm::Paper;
  double solver_rtol = 1e-10;
  SolverBackend backend = SolverBackend::Auto;
  int solver_max_iterations = 4000;

  // Semi-infinite mode: append cells on the right whenever the film end
  // deviates from the far-field height by extension_trigger or more.
  bool semi_infinite = false;
  double extension_trigger = 1e-6;
  double extension_unit = 1.0;

  std::vector<double> snapshot_times;

  // A state with min h below this is unphysical.  NaN resolves to
  // -epsilon at run time.
  double unphysical_floor = std::nan("");
  bool continue_on_unphysical = false;

  // When enabled, a step that raises the energy by more than
  // retry_threshold relative is re-taken with a halved time step, up to
  // retry_max_halvings times (logged).
  bool retry_energy_increase = false;
  double retry_threshold = 1e-4;
  int retry_max_halvings = 4;

  // When positive, stop once the sampled energy changes by less than
  // this per unit time (an equilibrium early-out; logged as an event).
  double stationary_tol = 0.0;
};

void validate(const SimOptions& opts);

}  // namespace dewet
