#include "dewet/solver2d.hpp"

#include <cmath>
#include <stdexcept>

#include "run_driver.hpp"

namespace dewet {

void validate(const SimOptions& opts) {
  if (!(opts.tau > 0.0)) throw std::invalid_argument("SimOptions: tau must be positive");
  if (!(opts.t_end >= 0.0)) throw std::invalid_argument("SimOptions: t_end must be nonnegative");
  if (!(opts.solver_rtol > 0.0) || !(opts.solver_rtol <= 1e-4))
    throw std::invalid_argument("SimOptions: solver_rtol must lie in (0, 1e-4]");
  if (!(opts.extension_trigger > 0.0))
    throw std::invalid_argument("SimOptions: extension_trigger must be positive");
  if (!(opts.extension_unit > 0.0))
    throw std::invalid_argument("SimOptions: extension_unit must be positive");
  if (!(opts.retry_threshold > 0.0))
    throw std::invalid_argument("SimOptions: retry_threshold must be positive");
  if (opts.retry_max_halvings < 0)
    throw std::invalid_argument("SimOptions: retry_max_halvings must be nonnegative");
}

Film2dStepper::Film2dStepper(const WettingParams& p, const SimOptions& opts)
    : params_(p), opts_(opts), surrogate_(surrogate_coeffs(p)), band_(2, 3, 3) {
  validate(opts);
}

StepInfo Film2dStepper::advance(Film2d& state, double tau) {
  const IntervalMesh& mesh = state.mesh;
  const int n = mesh.n_nodes();
  if (n < 2) throw std::invalid_argument("Film2dStepper: mesh has no cells");
  if (state.h.size() != n) throw std::invalid_argument("Film2dStepper: field size mismatch");
  const int dim = 2 * n;
  if (band_.size() != dim) band_.resize(dim);
  band_.zero();
  rhs_.setZero(dim);

  const double* h = state.h.data();
  const double inv_tau = 1.0 / tau;
  const bool paper = opts_.weak_form == WeakForm::Paper;

  // Unknown layout: h_i at 2i, mu_i at 2i+1, so every element touches a
  // 4x4 block and the system bandwidth is 3.
  for (int e = 0; e + 1 < n; ++e) {
    const double dx = mesh.nodes[e + 1] - mesh.nodes[e];
    const double h0 = h[e], h1 = h[e + 1];
    const double hm = 0.5 * (h0 + h1);
    const double slope = (h1 - h0) / dx;
    const double q = std::sqrt(1.0 + slope * slope);
    const auto [gam, dgam] = surface_energy_with_deriv(hm, params_);
    const double m00 = dx / 3.0, m01 = dx / 6.0;
    const double k = 1.0 / (q * dx);
    const double kg = gam * k;
    const double w1 = paper ? 1.0 / q : q;
    const int i0 = 2 * e, i1 = i0 + 2;  // h unknowns
    const int j0 = i0 + 1, j1 = i0 + 3;  // mu unknowns

    // height equation: (1/tau) M h + K_{1/q} mu = (1/tau) M h_old
    band_.at(i0, i0) += m00 * inv_tau;
    band_.at(i0, i1) += m01 * inv_tau;
    band_.at(i1, i0) += m01 * inv_tau;
    band_.at(i1, i1) += m00 * inv_tau;
    rhs_[i0] += (m00 * h0 + m01 * h1) * inv_tau;
    rhs_[i1] += (m01 * h0 + m00 * h1) * inv_tau;
    band_.at(i0, j0) += k;
    band_.at(i0, j1) -= k;
    band_.at(i1, j0) -= k;
    band_.at(i1, j1) += k;

    // potential equation: M mu - K_{gam/q} h - M_SI h = r
    band_.at(j0, j0) += m00;
    band_.at(j0, j1) += m01;
    band_.at(j1, j0) += m01;
    band_.at(j1, j1) += m00;
    band_.at(j0, i0) -= kg;
    band_.at(j0, i1) += kg;
    band_.at(j1, i0) += kg;
    band_.at(j1, i1) -= kg;
    if (hm <= params_.h_bar) {
      const double c = (surrogate_.c1 + surrogate_.c2 * hm) * w1;
      band_.at(j0, i0) -= c * m00;
      band_.at(j0, i1) -= c * m01;
      band_.at(j1, i0) -= c * m01;
      band_.at(j1, i1) -= c * m00;
    } else {
      const double r = dgam * w1 * dx * 0.5;
      rhs_[j0] += r;
      rhs_[j1] += r;
    }
  }

  band_.snapshot();
  const Vector b = rhs_;
  band_.factor_solve(rhs_);
  double res = (band_.multiply_snapshot(rhs_) - b).norm();
  const double scale = std::max(b.norm(), 1e-300);
  if (res > opts_.solver_rtol * scale) {
    // One pass of iterative refinement with the existing factors.
    Vector corr = b - band_.multiply_snapshot(rhs_);
    band_.solve_factored(corr);
    rhs_ += corr;
    res = (band_.multiply_snapshot(rhs_) - b).norm();
    if (res > opts_.solver_rtol * scale)
      throw std::runtime_error("Film2dStepper: band solve residual " + std::to_string(res / scale) +
                               " above tolerance");
  }

  if (state.mu.size() != n) state.mu.resize(n);
  for (int i = 0; i < n; ++i) {
    state.h[i] = rhs_[2 * i];
    state.mu[i] = rhs_[2 * i + 1];
  }
  state.t += tau;
  return {0, res / scale};
}

Film2d step(const Film2d& state, const WettingParams& p, const SimOptions& opts) {
  for (int i = 0; i < state.h.size(); ++i)
    if (!std::isfinite(state.h[i])) throw std::invalid_argument("step: non-finite height");
  Film2d out = state;
  Film2dStepper stepper(p, opts);
  stepper.advance(out, opts.tau);
  const double floor = std::isnan(opts.unphysical_floor) ? -p.epsilon : opts.unphysical_floor;
  if (out.h.minCoeff() < floor)
    throw std::runtime_error("step: unphysical state, min h " +
                             std::to_string(out.h.minCoeff()));
  return out;
}

Film2d maybe_extend_domain(const Film2d& state, const SimOptions& opts) {
  if (!opts.semi_infinite) return state;
  const double hb = state.h[state.h.size() - 1];
  if (std::abs(hb - 1.0) < opts.extension_trigger) return state;
  Film2d out;
  out.mesh = extend_interval_mesh(state.mesh, opts.extension_unit);
  const int n_old = state.h.size() > 0 ? static_cast<int>(state.h.size()) : 0;
  const int n_new = out.mesh.n_nodes();
  out.h = Vector::Constant(n_new, 1.0);
  out.h.head(n_old) = state.h;
  // mu on new nodes is irrelevant: it is recomputed by the next solve.
  out.mu = Vector::Zero(n_new);
  out.mu.head(n_old) = state.mu;
  out.t = state.t;
  return out;
}

RunRecord run(Film2d& state, const WettingParams& p, const SimOptions& opts,
              const DiagnosticsConfig& diag, const RunHooks<Film2d>& hooks) {
  Film2dStepper stepper(p, opts);
  return detail::run_loop(state, stepper, p, opts, diag, hooks);
}

}  // namespace dewet
