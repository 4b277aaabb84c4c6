#pragma once

#include <array>
#include <vector>

namespace dewet {

// Uniform partition of [a, b] into cells of width dx.  Nodes are stored
// explicitly so that extension appends exactly and downstream code never
// re-derives coordinates from indices.
struct IntervalMesh {
  double a = 0.0;
  double b = 0.0;
  double dx = 0.0;
  std::vector<double> nodes;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_cells() const { return static_cast<int>(nodes.size()) - 1; }
};

IntervalMesh build_interval_mesh(double a, double b, int n_cells);

// Appends ceil(length / dx) whole cells on the right.  Cell width is
// preserved exactly; the new right end is a + n_cells * dx.
IntervalMesh extend_interval_mesh(const IntervalMesh& mesh, double length);

// Structured triangulation of [a, b] x [c, d]: nx-by-ny quads, each split
// along its up-right diagonal into two counterclockwise triangles.
struct TriMesh {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  int nx = 0, ny = 0;
  std::vector<double> x, y;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> on_boundary;

  int n_nodes() const { return static_cast<int>(x.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
};

TriMesh build_rect_tri_mesh(double a, double b, double c, double d, int nx, int ny);

// Area and P1 basis gradients of one triangle; the solvers precompute
// these once per mesh.
struct TriGeometry {
  double area;
  std::array<double, 3> gx;
  std::array<double, 3> gy;
};

TriGeometry tri_geometry(const TriMesh& mesh, int t);
std::vector<TriGeometry> precompute_geometry(const TriMesh& mesh);

}  // namespace dewet
