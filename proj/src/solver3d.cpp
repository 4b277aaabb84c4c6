#include "dewet/solver3d.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "run_driver.hpp"

namespace dewet {

namespace {

constexpr int kDirectDimLimit = 6000;    // below this, factor directly every step
constexpr int kRescueDimLimit = 90000;   // direct rescue allowed up to this size
constexpr int kRebuildIterations = 45;   // refresh the ILU above this per-step count

}  // namespace

struct Film3dStepper::Impl {
  int n = 0;
  int dim = 0;
  WettingParams params;
  SimOptions opts;
  SurrogateCoeffs surrogate;
  std::vector<std::array<int, 3>> tris;
  std::vector<TriGeometry> geo;

  SparseMatrix A;
  Vector b;
  std::vector<int> slots;  // 4 value slots per (triangle, i, j), build order

  bool use_direct = false;
  Eigen::SparseLU<SparseMatrix> lu;
  bool lu_analyzed = false;

  Eigen::IncompleteLUT<double> ilut;
  bool have_ilut = false;
  bool want_rebuild = true;

  Impl(const TriMesh& mesh, const WettingParams& p, const SimOptions& o)
      : params(p), opts(o), surrogate(surrogate_coeffs(p)) {
    validate(opts);
    n = mesh.n_nodes();
    dim = 2 * n;
    tris = mesh.triangles;
    geo = precompute_geometry(mesh);
    switch (opts.backend) {
      case SolverBackend::Auto:
        use_direct = dim <= kDirectDimLimit;
        break;
      case SolverBackend::SparseLu:
        use_direct = true;
        break;
      case SolverBackend::BiCgStab:
        use_direct = false;
        break;
      default:
        throw std::invalid_argument("Film3dStepper: unsupported backend for triangulated meshes");
    }
    build_pattern();
    ilut.setDroptol(1e-7);
    ilut.setFillfactor(10);
  }

  void build_pattern() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(36) * tris.size());
    for (const auto& tri : tris)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int a = 2 * tri[i], c = 2 * tri[j];
          trip.emplace_back(a, c, 0.0);
          trip.emplace_back(a, c + 1, 0.0);
          trip.emplace_back(a + 1, c, 0.0);
          trip.emplace_back(a + 1, c + 1, 0.0);
        }
    A.resize(dim, dim);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();

    const int* outer = A.outerIndexPtr();
    const int* inner = A.innerIndexPtr();
    auto find_slot = [&](int row, int col) {
      const int* first = inner + outer[col];
      const int* last = inner + outer[col + 1];
      const int* it = std::lower_bound(first, last, row);
      return static_cast<int>(it - inner);
    };
    slots.clear();
    slots.reserve(static_cast<size_t>(36) * tris.size());
    for (const auto& tri : tris)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int a = 2 * tri[i], c = 2 * tri[j];
          slots.push_back(find_slot(a, c));
          slots.push_back(find_slot(a, c + 1));
          slots.push_back(find_slot(a + 1, c));
          slots.push_back(find_slot(a + 1, c + 1));
        }
  }

  void fill(const Film3d& state, double tau) {
    double* val = A.valuePtr();
    std::fill(val, val + A.nonZeros(), 0.0);
    b.setZero(dim);
    const double inv_tau = 1.0 / tau;
    const bool paper = opts.weak_form == WeakForm::Paper;
    const double* h = state.h.data();
    const int* slot = slots.data();
    for (size_t t = 0; t < tris.size(); ++t) {
      const auto& tri = tris[t];
      const TriGeometry& g = geo[t];
      const double h0 = h[tri[0]], h1 = h[tri[1]], h2 = h[tri[2]];
      const double hsum = h0 + h1 + h2;
      const double hc = hsum / 3.0;
      const double hx = h0 * g.gx[0] + h1 * g.gx[1] + h2 * g.gx[2];
      const double hy = h0 * g.gy[0] + h1 * g.gy[1] + h2 * g.gy[2];
      const double q2 = 1.0 + hx * hx + hy * hy;
      const double q = std::sqrt(q2);
      const auto [gam, dgam] = surface_energy_with_deriv(hc, params);
      const double mw = g.area / 12.0;
      const double kgw = gam / q * g.area;
      const double sw = q * g.area;
      const double w1 = paper ? 1.0 / q : q;
      const bool implicit_wetting = hc <= params.h_bar;
      const double c = implicit_wetting ? (surrogate.c1 + surrogate.c2 * hc) * w1 : 0.0;
      const double rload = implicit_wetting ? 0.0 : dgam * w1 * g.area / 3.0;
      double d[3];
      const double hloc[3] = {h0, h1, h2};
      for (int k = 0; k < 3; ++k) d[k] = hx * g.gx[k] + hy * g.gy[k];
      for (int i = 0; i < 3; ++i) {
        b[2 * tri[i]] += inv_tau * mw * (hsum + hloc[i]);
        b[2 * tri[i] + 1] += rload;
        for (int j = 0; j < 3; ++j) {
          const double gg = g.gx[i] * g.gx[j] + g.gy[i] * g.gy[j];
          const double m = mw * (i == j ? 2.0 : 1.0);
          val[*slot++] += m * inv_tau;                     // height eq, h block
          val[*slot++] += sw * (gg - d[i] * d[j] / q2);    // height eq, mu block
          val[*slot++] += -kgw * gg - c * m;               // potential eq, h block
          val[*slot++] += m;                               // potential eq, mu block
        }
      }
    }
  }

  // Preconditioned BiCGSTAB on the true residual; returns iterations or
  // -1 on breakdown.
  int bicgstab(Vector& x, double tol_abs, int maxit) {
    Vector r = b - A * x;
    if (r.norm() <= tol_abs) return 0;
    const Vector r0 = r;
    Vector p = r;
    Vector v(dim), s(dim), t(dim), y(dim), z(dim);
    double rho = r0.dot(r);
    if (rho == 0.0) return -1;
    for (int it = 1; it <= maxit; ++it) {
      y = ilut.solve(p);
      v.noalias() = A * y;
      const double rv = r0.dot(v);
      if (rv == 0.0 || !std::isfinite(rv)) return -1;
      const double alpha = rho / rv;
      s = r - alpha * v;
      x += alpha * y;
      if (s.norm() <= tol_abs) return it;
      z = ilut.solve(s);
      t.noalias() = A * z;
      const double tt = t.squaredNorm();
      if (tt == 0.0 || !std::isfinite(tt)) return -1;
      const double omega = t.dot(s) / tt;
      if (omega == 0.0) return -1;
      x += omega * z;
      r = s - omega * t;
      if (r.norm() <= tol_abs) return it;
      const double rho_new = r0.dot(r);
      if (rho_new == 0.0 || !std::isfinite(rho_new)) return -1;
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      p = r + beta * (p - omega * v);
    }
    return -(maxit + 1);
  }

  StepInfo solve_direct(Vector& x, const double bnorm) {
    if (!lu_analyzed) {
      lu.analyzePattern(A);
      lu_analyzed = true;
    }
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("Film3dStepper: sparse LU factorization failed");
    x = lu.solve(b);
    x += lu.solve(Vector(b - A * x));
    const double res = (b - A * x).norm() / bnorm;
    if (!(res <= opts.solver_rtol))
      throw std::runtime_error("Film3dStepper: direct solve residual above tolerance");
    return {0, res};
  }

  StepInfo solve(Vector& x) {
    const double bnorm = std::max(b.norm(), 1e-300);
    if (use_direct) return solve_direct(x, bnorm);

    const double tol_abs = 0.5 * opts.solver_rtol * bnorm;
    int total = 0;
    for (int attempt = 0; attempt < 3; ++attempt) {
      if (!have_ilut || want_rebuild) {
        ilut.compute(A);
        if (ilut.info() != Eigen::Success)
          throw std::runtime_error("Film3dStepper: incomplete LU factorization failed");
        have_ilut = true;
        want_rebuild = false;
      }
      const int it = bicgstab(x, tol_abs, opts.solver_max_iterations);
      total += std::abs(it);
      const double res = (b - A * x).norm() / bnorm;
      if (res <= opts.solver_rtol) {
        if (it < 0 || it > kRebuildIterations) want_rebuild = true;
        return {total, res};
      }
      want_rebuild = true;
      if (attempt == 1 && dim <= kRescueDimLimit) {
        StepInfo info = solve_direct(x, bnorm);
        info.iterations = total;
        return info;
      }
    }
    throw std::runtime_error("Film3dStepper: iterative solve failed to reach tolerance");
  }
};

Film3dStepper::Film3dStepper(const TriMesh& mesh, const WettingParams& p,
                             const SimOptions& opts)
    : impl_(std::make_unique<Impl>(mesh, p, opts)) {}

Film3dStepper::~Film3dStepper() = default;

StepInfo Film3dStepper::advance(Film3d& state, double tau) {
  Impl& im = *impl_;
  if (state.h.size() != im.n) throw std::invalid_argument("Film3dStepper: field size mismatch");
  im.fill(state, tau);
  Vector x(im.dim);
  if (state.mu.size() != im.n) state.mu = Vector::Zero(im.n);
  for (int i = 0; i < im.n; ++i) {
    x[2 * i] = state.h[i];
    x[2 * i + 1] = state.mu[i];
  }
  const StepInfo info = im.solve(x);
  for (int i = 0; i < im.n; ++i) {
    state.h[i] = x[2 * i];
    state.mu[i] = x[2 * i + 1];
  }
  state.t += tau;
  return info;
}

Film3d step3d(const Film3d& state, const WettingParams& p, const SimOptions& opts) {
  for (int i = 0; i < state.h.size(); ++i)
    if (!std::isfinite(state.h[i])) throw std::invalid_argument("step3d: non-finite height");
  Film3d out = state;
  Film3dStepper stepper(out.mesh, p, opts);
  stepper.advance(out, opts.tau);
  const double floor = std::isnan(opts.unphysical_floor) ? -p.epsilon : opts.unphysical_floor;
  if (out.h.minCoeff() < floor)
    throw std::runtime_error("step3d: unphysical state, min h " +
                             std::to_string(out.h.minCoeff()));
  return out;
}

RunRecord run3d(Film3d& state, const WettingParams& p, const SimOptions& opts,
                const DiagnosticsConfig& diag, const RunHooks<Film3d>& hooks) {
  Film3dStepper stepper(state.mesh, p, opts);
  return detail::run_loop(state, stepper, p, opts, diag, hooks);
}

}  // namespace dewet
