#include "dewet/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace dewet {

IntervalMesh build_interval_mesh(double a, double b, int n_cells) {
  if (!(b > a)) throw std::invalid_argument("build_interval_mesh: need b > a");
  if (n_cells < 1) throw std::invalid_argument("build_interval_mesh: need n_cells >= 1");
  IntervalMesh m;
  m.a = a;
  m.b = b;
  m.dx = (b - a) / n_cells;
  m.nodes.resize(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i)
    m.nodes[i] = a + (b - a) * (static_cast<double>(i) / n_cells);
  m.nodes[n_cells] = b;
  return m;
}

IntervalMesh extend_interval_mesh(const IntervalMesh& mesh, double length) {
  if (!(length > 0.0)) throw std::invalid_argument("extend_interval_mesh: need length > 0");
  const int extra = static_cast<int>(std::ceil(length / mesh.dx - 1e-12));
  IntervalMesh out = mesh;
  out.nodes.reserve(mesh.nodes.size() + extra);
  for (int k = 1; k <= extra; ++k) out.nodes.push_back(mesh.b + k * mesh.dx);
  out.b = out.nodes.back();
  return out;
}

TriMesh build_rect_tri_mesh(double a, double b, double c, double d, int nx, int ny) {
  if (!(b > a) || !(d > c))
    throw std::invalid_argument("build_rect_tri_mesh: need b > a and d > c");
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_rect_tri_mesh: need nx, ny >= 1");
  TriMesh m;
  m.a = a;
  m.b = b;
  m.c = c;
  m.d = d;
  m.nx = nx;
  m.ny = ny;
  const int nnx = nx + 1, nny = ny + 1;
  m.x.resize(static_cast<size_t>(nnx) * nny);
  m.y.resize(m.x.size());
  m.on_boundary.assign(m.x.size(), false);
  for (int j = 0; j < nny; ++j) {
    const double yj = c + (d - c) * (static_cast<double>(j) / ny);
    for (int i = 0; i < nnx; ++i) {
      const int n = j * nnx + i;
      m.x[n] = a + (b - a) * (static_cast<double>(i) / nx);
      m.y[n] = yj;
      if (i == 0 || i == nx || j == 0 || j == ny) m.on_boundary[n] = true;
    }
  }
  m.triangles.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = j * nnx + i;
      const int n10 = n00 + 1;
      const int n01 = n00 + nnx;
      const int n11 = n01 + 1;
      m.triangles.push_back({n00, n10, n11});
      m.triangles.push_back({n00, n11, n01});
    }
  }
  return m;
}

TriGeometry tri_geometry(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const double x0 = mesh.x[tri[0]], y0 = mesh.y[tri[0]];
  const double x1 = mesh.x[tri[1]], y1 = mesh.y[tri[1]];
  const double x2 = mesh.x[tri[2]], y2 = mesh.y[tri[2]];
  const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  if (!(det > 0.0))
    throw std::runtime_error("tri_geometry: triangle is degenerate or clockwise");
  TriGeometry g;
  g.area = 0.5 * det;
  g.gx = {(y1 - y2) / det, (y2 - y0) / det, (y0 - y1) / det};
  g.gy = {(x2 - x1) / det, (x0 - x2) / det, (x1 - x0) / det};
  return g;
}

std::vector<TriGeometry> precompute_geometry(const TriMesh& mesh) {
  std::vector<TriGeometry> g;
  g.reserve(mesh.triangles.size());
  for (int t = 0; t < mesh.n_triangles(); ++t) g.push_back(tri_geometry(mesh, t));
  return g;
}

}  // namespace dewet
