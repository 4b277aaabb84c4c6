#include "dewet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dewet {

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct File {
  FILE* f;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
  }
  ~File() {
    if (f) std::fclose(f);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
};

}  // namespace

void write_snapshot(const Film2d& state, const std::string& path) {
  File out(path);
  std::fprintf(out.f, "# x h  (t = %s)\n", format_g17(state.t).c_str());
  for (int i = 0; i < state.mesh.n_nodes(); ++i)
    std::fprintf(out.f, "%.17g %.17g\n", state.mesh.nodes[i], state.h[i]);
}

void write_snapshot(const Film3d& state, const std::string& path) {
  const auto& mesh = state.mesh;
  File out(path);
  std::fprintf(out.f, "# vtk DataFile Version 3.0\n");
  std::fprintf(out.f, "film height at t = %s\n", format_g17(state.t).c_str());
  std::fprintf(out.f, "ASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(out.f, "POINTS %d double\n", mesh.n_nodes());
  for (int i = 0; i < mesh.n_nodes(); ++i)
    std::fprintf(out.f, "%.17g %.17g 0\n", mesh.x[i], mesh.y[i]);
  std::fprintf(out.f, "CELLS %d %d\n", mesh.n_triangles(), 4 * mesh.n_triangles());
  for (const auto& tri : mesh.triangles)
    std::fprintf(out.f, "3 %d %d %d\n", tri[0], tri[1], tri[2]);
  std::fprintf(out.f, "CELL_TYPES %d\n", mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) std::fprintf(out.f, "5\n");
  std::fprintf(out.f, "POINT_DATA %d\nSCALARS h double 1\nLOOKUP_TABLE default\n",
               mesh.n_nodes());
  for (int i = 0; i < mesh.n_nodes(); ++i) std::fprintf(out.f, "%.17g\n", state.h[i]);
}

void write_snapshot_xyz(const Film3d& state, const std::string& path) {
  File out(path);
  std::fprintf(out.f, "# x y h  (t = %s)\n", format_g17(state.t).c_str());
  for (int i = 0; i < state.mesh.n_nodes(); ++i)
    std::fprintf(out.f, "%.17g %.17g %.17g\n", state.mesh.x[i], state.mesh.y[i], state.h[i]);
}

CrossSection midline_section(const Film3d& state) {
  const auto& mesh = state.mesh;
  const int j = mesh.ny / 2;
  CrossSection sec;
  sec.s.reserve(mesh.nx + 1);
  sec.h.reserve(mesh.nx + 1);
  for (int i = 0; i <= mesh.nx; ++i) {
    const int n = mesh.node_index(i, j);
    sec.s.push_back(mesh.x[n]);
    sec.h.push_back(state.h[n]);
  }
  return sec;
}

CrossSection diagonal_section(const Film3d& state) {
  const auto& mesh = state.mesh;
  if (mesh.nx != mesh.ny)
    throw std::runtime_error("diagonal_section: mesh is not square (nx != ny)");
  const double xc = 0.5 * (mesh.a + mesh.b), yc = 0.5 * (mesh.c + mesh.d);
  CrossSection sec;
  sec.s.reserve(mesh.nx + 1);
  sec.h.reserve(mesh.nx + 1);
  for (int i = 0; i <= mesh.nx; ++i) {
    const int n = mesh.node_index(i, i);
    const double dx = mesh.x[n] - xc, dy = mesh.y[n] - yc;
    const double s = std::hypot(dx, dy) * (dx < 0 ? -1.0 : 1.0);
    sec.s.push_back(s);
    sec.h.push_back(state.h[n]);
  }
  return sec;
}

void write_section(const CrossSection& sec, const std::string& path) {
  File out(path);
  std::fprintf(out.f, "# s h\n");
  for (size_t i = 0; i < sec.s.size(); ++i)
    std::fprintf(out.f, "%.17g %.17g\n", sec.s[i], sec.h[i]);
}

std::vector<std::vector<double>> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dewet
