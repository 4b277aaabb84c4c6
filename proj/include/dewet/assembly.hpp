#pragma once

#include <Eigen/Sparse>
#include <span>

#include "dewet/mesh.hpp"

namespace dewet {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

// A compressed sparse matrix acting as a linear system operator.
struct SparseSystem {
  SparseMatrix matrix;

  int dimension() const { return static_cast<int>(matrix.rows()); }
};

// Lumped nothing, exact P1 mass: elementwise dx/6 [[2,1],[1,2]] in 1D and
// |T|/12 [[2,1,1],[1,2,1],[1,1,2]] on triangles.  The weighted overloads
// scale each element block by the given per-element constant.
SparseSystem assemble_mass(const IntervalMesh& mesh);
SparseSystem assemble_mass(const IntervalMesh& mesh, std::span<const double> weight);
SparseSystem assemble_mass(const TriMesh& mesh);
SparseSystem assemble_mass(const TriMesh& mesh, std::span<const double> weight);

// Stiffness with a per-element scalar weight w_e: sum_e w_e (grad phi_i,
// grad phi_j)_e.  Natural (zero-flux) boundary conditions: no boundary
// rows are altered.
SparseSystem assemble_weighted_stiffness(const IntervalMesh& mesh,
                                         std::span<const double> weight);
SparseSystem assemble_weighted_stiffness(const TriMesh& mesh,
                                         std::span<const double> weight);

// Stiffness of the graph surface: for nodal heights h, with per-triangle
// gradient grad h and area element q = sqrt(1 + |grad h|^2),
//   sum_T q |T| [ grad phi_i . grad phi_j
//                 - (grad h . grad phi_i)(grad h . grad phi_j) / q^2 ].
SparseSystem assemble_surface_stiffness(const TriMesh& mesh, const Vector& h);

// Load vector with per-element constant density: entries w_e integral of
// phi_i over the element (dx/2 per endpoint in 1D, |T|/3 per vertex).
Vector assemble_load(const IntervalMesh& mesh, std::span<const double> weight);
Vector assemble_load(const TriMesh& mesh, std::span<const double> weight);

// Exact integral of the P1 interpolant of nodal values f.
double integrate_field(const IntervalMesh& mesh, const Vector& f);
double integrate_field(const TriMesh& mesh, const Vector& f);

}  // namespace dewet
