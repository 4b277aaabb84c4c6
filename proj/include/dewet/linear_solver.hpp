#pragma once

#include <string>
#include <vector>

#include "dewet/assembly.hpp"

namespace dewet {

enum class SolverBackend {
  Auto,      // banded when the band is narrow, else direct or iterative by size
  BandedLu,  // LAPACK general band factorization
  SparseLu,  // sparse direct factorization
  BiCgStab,  // ILU-preconditioned Krylov iteration
};

struct SolveOptions {
  SolverBackend backend = SolverBackend::Auto;
  // Accept a solution only if ||A x - b|| <= rtol * ||b||.
  double rtol = 1e-10;
  int max_iterations = 4000;
};

struct SolveReport {
  std::string backend;
  int iterations = 0;
  double residual = 0.0;
};

// Solves A x = b and verifies the residual; throws std::runtime_error when
// no backend reaches the requested tolerance.
Vector solve_sparse(const SparseSystem& system, const Vector& rhs,
                    const SolveOptions& options = {}, SolveReport* report = nullptr);

// General band matrix with LU factorization in place (partial pivoting).
// The stepper fills the band directly from element loops, so no sparse
// matrix is materialized on the hot path.
class BandedLu {
 public:
  BandedLu(int n, int kl, int ku);

  void resize(int n);
  void zero();

  // Accumulates into entry (i, j); |i - j| must be within the band.
  double& at(int i, int j) { return ab_[static_cast<size_t>(j) * ldab_ + offset_ + i - j]; }

  // Factors and overwrites rhs with the solution.  The filled band is
  // consumed; call zero() and refill before the next solve.
  void factor_solve(Vector& rhs);

  // Re-uses the factors of the last factor_solve for another right-hand
  // side (iterative refinement).
  void solve_factored(Vector& rhs);

  // Copies the unfactored band so the residual can be checked after the
  // solve destroys it.
  void snapshot();
  Vector multiply_snapshot(const Vector& x) const;

  int size() const { return n_; }

 private:
  int n_, kl_, ku_, ldab_, offset_;
  std::vector<double> ab_;
  std::vector<double> snap_;
  std::vector<int> ipiv_;
};

}  // namespace dewet
