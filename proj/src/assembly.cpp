#include "dewet/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dewet {

namespace {

void check_weights(std::span<const double> weight, size_t expected, const char* who) {
  if (weight.size() != expected)
    throw std::invalid_argument(std::string(who) + ": weight size does not match element count");
  for (double w : weight)
    if (!std::isfinite(w))
      throw std::invalid_argument(std::string(who) + ": non-finite element weight");
}

SparseSystem from_triplets(int n, std::vector<Eigen::Triplet<double>>& trip) {
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return {std::move(m)};
}

SparseSystem interval_mass(const IntervalMesh& mesh, const double* weight) {
  const int nc = mesh.n_cells();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(4) * nc);
  for (int e = 0; e < nc; ++e) {
    const double dx = mesh.nodes[e + 1] - mesh.nodes[e];
    const double w = (weight ? weight[e] : 1.0) * dx / 6.0;
    trip.emplace_back(e, e, 2.0 * w);
    trip.emplace_back(e, e + 1, w);
    trip.emplace_back(e + 1, e, w);
    trip.emplace_back(e + 1, e + 1, 2.0 * w);
  }
  return from_triplets(mesh.n_nodes(), trip);
}

SparseSystem tri_mass(const TriMesh& mesh, const double* weight) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(9) * mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double w = (weight ? weight[t] : 1.0) * tri_geometry(mesh, t).area / 12.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(tri[i], tri[j], (i == j ? 2.0 : 1.0) * w);
  }
  return from_triplets(mesh.n_nodes(), trip);
}

}  // namespace

SparseSystem assemble_mass(const IntervalMesh& mesh) { return interval_mass(mesh, nullptr); }

SparseSystem assemble_mass(const IntervalMesh& mesh, std::span<const double> weight) {
  check_weights(weight, mesh.n_cells(), "assemble_mass");
  return interval_mass(mesh, weight.data());
}

SparseSystem assemble_mass(const TriMesh& mesh) { return tri_mass(mesh, nullptr); }

SparseSystem assemble_mass(const TriMesh& mesh, std::span<const double> weight) {
  check_weights(weight, mesh.n_triangles(), "assemble_mass");
  return tri_mass(mesh, weight.data());
}

SparseSystem assemble_weighted_stiffness(const IntervalMesh& mesh,
                                         std::span<const double> weight) {
  check_weights(weight, mesh.n_cells(), "assemble_weighted_stiffness");
  const int nc = mesh.n_cells();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(4) * nc);
  for (int e = 0; e < nc; ++e) {
    const double k = weight[e] / (mesh.nodes[e + 1] - mesh.nodes[e]);
    trip.emplace_back(e, e, k);
    trip.emplace_back(e, e + 1, -k);
    trip.emplace_back(e + 1, e, -k);
    trip.emplace_back(e + 1, e + 1, k);
  }
  return from_triplets(mesh.n_nodes(), trip);
}

SparseSystem assemble_weighted_stiffness(const TriMesh& mesh,
                                         std::span<const double> weight) {
  check_weights(weight, mesh.n_triangles(), "assemble_weighted_stiffness");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(9) * mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const TriGeometry g = tri_geometry(mesh, t);
    const double w = weight[t] * g.area;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(tri[i], tri[j], w * (g.gx[i] * g.gx[j] + g.gy[i] * g.gy[j]));
  }
  return from_triplets(mesh.n_nodes(), trip);
}

SparseSystem assemble_surface_stiffness(const TriMesh& mesh, const Vector& h) {
  if (h.size() != mesh.n_nodes())
    throw std::invalid_argument("assemble_surface_stiffness: field size mismatch");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(9) * mesh.n_triangles());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const TriGeometry g = tri_geometry(mesh, t);
    double hx = 0.0, hy = 0.0;
    for (int k = 0; k < 3; ++k) {
      hx += h[tri[k]] * g.gx[k];
      hy += h[tri[k]] * g.gy[k];
    }
    const double q2 = 1.0 + hx * hx + hy * hy;
    const double q = std::sqrt(q2);
    double d[3];
    for (int k = 0; k < 3; ++k) d[k] = hx * g.gx[k] + hy * g.gy[k];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double v = g.gx[i] * g.gx[j] + g.gy[i] * g.gy[j] - d[i] * d[j] / q2;
        trip.emplace_back(tri[i], tri[j], q * g.area * v);
      }
  }
  return from_triplets(mesh.n_nodes(), trip);
}

Vector assemble_load(const IntervalMesh& mesh, std::span<const double> weight) {
  check_weights(weight, mesh.n_cells(), "assemble_load");
  Vector r = Vector::Zero(mesh.n_nodes());
  for (int e = 0; e < mesh.n_cells(); ++e) {
    const double v = weight[e] * (mesh.nodes[e + 1] - mesh.nodes[e]) / 2.0;
    r[e] += v;
    r[e + 1] += v;
  }
  return r;
}

Vector assemble_load(const TriMesh& mesh, std::span<const double> weight) {
  check_weights(weight, mesh.n_triangles(), "assemble_load");
  Vector r = Vector::Zero(mesh.n_nodes());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double v = weight[t] * tri_geometry(mesh, t).area / 3.0;
    for (int k = 0; k < 3; ++k) r[mesh.triangles[t][k]] += v;
  }
  return r;
}

double integrate_field(const IntervalMesh& mesh, const Vector& f) {
  if (f.size() != mesh.n_nodes())
    throw std::invalid_argument("integrate_field: field size mismatch");
  double s = 0.0;
  for (int e = 0; e < mesh.n_cells(); ++e)
    s += 0.5 * (f[e] + f[e + 1]) * (mesh.nodes[e + 1] - mesh.nodes[e]);
  return s;
}

double integrate_field(const TriMesh& mesh, const Vector& f) {
  if (f.size() != mesh.n_nodes())
    throw std::invalid_argument("integrate_field: field size mismatch");
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    s += tri_geometry(mesh, t).area * (f[tri[0]] + f[tri[1]] + f[tri[2]]) / 3.0;
  }
  return s;
}

}  // namespace dewet
