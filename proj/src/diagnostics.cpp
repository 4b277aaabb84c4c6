#include "dewet/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dewet {

double resolved_shedding_threshold(const DiagnosticsConfig& d, const WettingParams& p) {
  if (!std::isnan(d.shedding_threshold)) return d.shedding_threshold;
  return std::max(2.0 * p.epsilon * p.epsilon, 1e-5);
}

double mass(const Film2d& state) { return integrate_field(state.mesh, state.h); }
double mass(const Film3d& state) { return integrate_field(state.mesh, state.h); }

double energy(const Film2d& state, const WettingParams& p) {
  const auto& mesh = state.mesh;
  double w = 0.0;
  for (int e = 0; e < mesh.n_cells(); ++e) {
    const double dx = mesh.nodes[e + 1] - mesh.nodes[e];
    const double hm = 0.5 * (state.h[e] + state.h[e + 1]);
    const double s = (state.h[e + 1] - state.h[e]) / dx;
    w += surface_energy(hm, p) * std::sqrt(1.0 + s * s) * dx;
  }
  return w;
}

double energy(const Film3d& state, const WettingParams& p) {
  const auto& mesh = state.mesh;
  double w = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const TriGeometry g = tri_geometry(mesh, t);
    const double hc = (state.h[tri[0]] + state.h[tri[1]] + state.h[tri[2]]) / 3.0;
    double hx = 0.0, hy = 0.0;
    for (int k = 0; k < 3; ++k) {
      hx += state.h[tri[k]] * g.gx[k];
      hy += state.h[tri[k]] * g.gy[k];
    }
    w += surface_energy(hc, p) * std::sqrt(1.0 + hx * hx + hy * hy) * g.area;
  }
  return w;
}

MinHeight min_height(const Film2d& state, std::optional<std::array<double, 2>> window) {
  MinHeight best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  bool found = false;
  for (int i = 0; i < state.mesh.n_nodes(); ++i) {
    const double x = state.mesh.nodes[i];
    if (window && (x < (*window)[0] || x > (*window)[1])) continue;
    found = true;
    if (state.h[i] < best.value) {
      best.value = state.h[i];
      best.x = x;
    }
  }
  if (!found) throw std::invalid_argument("min_height: empty window");
  return best;
}

MinHeight min_height(const Film3d& state, std::optional<std::array<double, 4>> window) {
  MinHeight best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  bool found = false;
  for (int i = 0; i < state.mesh.n_nodes(); ++i) {
    const double x = state.mesh.x[i], y = state.mesh.y[i];
    if (window && (x < (*window)[0] || x > (*window)[1] || y < (*window)[2] || y > (*window)[3]))
      continue;
    found = true;
    if (state.h[i] < best.value) {
      best.value = state.h[i];
      best.x = x;
      best.y = y;
    }
  }
  if (!found) throw std::invalid_argument("min_height: empty window");
  return best;
}

AgglomerateReport count_agglomerates(const Film2d& state, double threshold) {
  const auto& mesh = state.mesh;
  AgglomerateReport rep;
  const int n = mesh.n_nodes();
  int i = 0;
  while (i < n) {
    if (state.h[i] > threshold) {
      AgglomerateComponent comp;
      const int start = i;
      while (i < n && state.h[i] > threshold) {
        comp.nodes.push_back(i);
        ++i;
      }
      const int stop = i - 1;
      comp.x_lo = mesh.nodes[start];
      comp.x_hi = mesh.nodes[stop];
      // A cell belongs to the component when either endpoint does; with a
      // sub-threshold node between components no cell is shared.
      const int c_lo = std::max(0, start - 1);
      const int c_hi = std::min(n - 2, stop);
      for (int e = c_lo; e <= c_hi; ++e)
        comp.mass += 0.5 * (state.h[e] + state.h[e + 1]) * (mesh.nodes[e + 1] - mesh.nodes[e]);
      rep.components.push_back(std::move(comp));
    } else {
      ++i;
    }
  }
  rep.count = static_cast<int>(rep.components.size());
  return rep;
}

AgglomerateReport count_agglomerates(const Film3d& state, double threshold) {
  const auto& mesh = state.mesh;
  const int n = mesh.n_nodes();
  std::vector<int> label(n, -1);
  // Union by BFS over triangle edges restricted to above-threshold nodes.
  std::vector<std::vector<int>> adj(n);
  for (const auto& tri : mesh.triangles)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        if (state.h[tri[a]] > threshold && state.h[tri[b]] > threshold) {
          adj[tri[a]].push_back(tri[b]);
          adj[tri[b]].push_back(tri[a]);
        }
      }
  AgglomerateReport rep;
  std::vector<int> queue;
  for (int seed = 0; seed < n; ++seed) {
    if (state.h[seed] <= threshold || label[seed] >= 0) continue;
    const int id = static_cast<int>(rep.components.size());
    AgglomerateComponent comp;
    comp.x_lo = comp.x_hi = mesh.x[seed];
    comp.y_lo = comp.y_hi = mesh.y[seed];
    queue.assign(1, seed);
    label[seed] = id;
    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      comp.nodes.push_back(u);
      comp.x_lo = std::min(comp.x_lo, mesh.x[u]);
      comp.x_hi = std::max(comp.x_hi, mesh.x[u]);
      comp.y_lo = std::min(comp.y_lo, mesh.y[u]);
      comp.y_hi = std::max(comp.y_hi, mesh.y[u]);
      for (int v : adj[u])
        if (label[v] < 0) {
          label[v] = id;
          queue.push_back(v);
        }
    }
    std::sort(comp.nodes.begin(), comp.nodes.end());
    rep.components.push_back(std::move(comp));
  }
  // A triangle cannot touch two components: its nodes are pairwise
  // connected, so above-threshold nodes of one triangle share a label.
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    int id = -1;
    for (int k = 0; k < 3; ++k)
      if (label[tri[k]] >= 0) id = label[tri[k]];
    if (id < 0) continue;
    const double a3 = tri_geometry(mesh, t).area / 3.0;
    rep.components[id].mass += a3 * (state.h[tri[0]] + state.h[tri[1]] + state.h[tri[2]]);
  }
  std::sort(rep.components.begin(), rep.components.end(),
            [](const AgglomerateComponent& a, const AgglomerateComponent& b) {
              return a.x_lo != b.x_lo ? a.x_lo < b.x_lo : a.y_lo < b.y_lo;
            });
  rep.count = static_cast<int>(rep.components.size());
  return rep;
}

std::optional<double> first_shedding_time(const RunRecord& record) {
  return first_shedding_time(record, record.shedding_threshold);
}

std::optional<double> first_shedding_time(const RunRecord& record, double threshold) {
  const auto& s = record.samples;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k].h_min <= threshold) {
      if (k == 0) return s[0].t;
      const double h0 = s[k - 1].h_min, h1 = s[k].h_min;
      const double t0 = s[k - 1].t, t1 = s[k].t;
      if (h0 == h1) return t1;
      return t0 + (t1 - t0) * (h0 - threshold) / (h0 - h1);
    }
  }
  return std::nullopt;
}

double effective_contact_point(const Film2d& state, double h_c, double alpha) {
  if (!(alpha < h_c)) throw std::invalid_argument("effective_contact_point: need alpha < h_c");
  const auto& mesh = state.mesh;
  const int n = mesh.n_nodes();

  // Maximal contiguous runs inside the band.
  struct Run {
    int lo, hi;
  };
  std::vector<Run> runs;
  for (int i = 0; i < n;) {
    if (state.h[i] >= alpha && state.h[i] <= h_c) {
      const int lo = i;
      while (i < n && state.h[i] >= alpha && state.h[i] <= h_c) ++i;
      runs.push_back({lo, i - 1});
    } else {
      ++i;
    }
  }
  if (runs.empty())
    throw std::runtime_error("effective_contact_point: no nodes in the fit band");

  // The bare side is where h drops below alpha; pick the run nearest the
  // barest point of the film.
  int barest = 0;
  for (int i = 1; i < n; ++i)
    if (state.h[i] < state.h[barest]) barest = i;
  const Run* chosen = nullptr;
  int best_dist = n;
  for (const Run& r : runs) {
    const int d = barest < r.lo ? r.lo - barest : (barest > r.hi ? barest - r.hi : 0);
    if (d < best_dist) {
      best_dist = d;
      chosen = &r;
    }
  }
  const int count = chosen->hi - chosen->lo + 1;
  if (count < 3)
    throw std::runtime_error("effective_contact_point: fewer than 3 nodes in the fit band");

  const double x0 = 0.5 * (mesh.nodes[chosen->lo] + mesh.nodes[chosen->hi]);
  Eigen::MatrixXd design(count, 3);
  Eigen::VectorXd ys(count);
  for (int k = 0; k < count; ++k) {
    const double u = mesh.nodes[chosen->lo + k] - x0;
    design(k, 0) = 1.0;
    design(k, 1) = u;
    design(k, 2) = u * u;
    ys[k] = state.h[chosen->lo + k];
  }
  const Eigen::Vector3d cf = design.colPivHouseholderQr().solve(ys);
  const double c = cf[0], bb = cf[1], a = cf[2];

  const double band_lo = mesh.nodes[chosen->lo] - x0;
  const double band_hi = mesh.nodes[chosen->hi] - x0;
  auto band_distance = [&](double u) {
    return std::max({band_lo - u, u - band_hi, 0.0});
  };

  double root;
  const double scale = std::abs(a) * (band_hi - band_lo) * (band_hi - band_lo);
  if (std::abs(a) < 1e-14 || scale < 1e-12 * std::abs(c)) {
    if (bb == 0.0) throw std::runtime_error("effective_contact_point: degenerate fit");
    root = -c / bb;
  } else {
    const double disc = bb * bb - 4.0 * a * c;
    if (disc < 0.0) throw std::runtime_error("effective_contact_point: no real root");
    const double sq = std::sqrt(disc);
    const double r1 = (-bb + sq) / (2.0 * a);
    const double r2 = (-bb - sq) / (2.0 * a);
    root = band_distance(r1) <= band_distance(r2) ? r1 : r2;
  }
  return root + x0;
}

namespace {

FitResult linear_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < design.cols())
    throw std::runtime_error("fit: rank-deficient design matrix");
  const Eigen::VectorXd coeff = qr.solve(y);
  FitResult out;
  out.coefficients.assign(coeff.data(), coeff.data() + coeff.size());
  const double ss_res = (design * coeff - y).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  out.residual_norm = std::sqrt(ss_res);
  out.determination = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

}  // namespace

FitResult fit_contact_law(std::span<const double> t, std::span<const double> x_c) {
  if (t.size() != x_c.size()) throw std::invalid_argument("fit_contact_law: length mismatch");
  if (t.size() < 4) throw std::invalid_argument("fit_contact_law: need at least 4 samples");
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    if (!(t[i] > 0.0)) throw std::invalid_argument("fit_contact_law: need t > 0");
    const double p = std::pow(t[i], 0.2);
    design(i, 0) = 1.0;
    design(i, 1) = p;
    design(i, 2) = p * p;
    y[i] = x_c[i];
  }
  return linear_fit(design, y);
}

FitResult fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit_power_law: need at least 3 pairs");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_power_law: data must be positive");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  FitResult fit = linear_fit(design, ly);
  fit.coefficients = {std::exp(fit.coefficients[0]), fit.coefficients[1]};
  return fit;
}

double wetting_layer_thickness(const Film2d& state, double threshold, double margin) {
  const AgglomerateReport rep = count_agglomerates(state, threshold);
  std::vector<double> values;
  for (int i = 0; i < state.mesh.n_nodes(); ++i) {
    const double x = state.mesh.nodes[i];
    bool far = true;
    for (const auto& comp : rep.components) {
      const double d = x < comp.x_lo ? comp.x_lo - x : (x > comp.x_hi ? x - comp.x_hi : 0.0);
      if (d < margin) {
        far = false;
        break;
      }
    }
    if (far) values.push_back(state.h[i]);
  }
  if (values.empty())
    throw std::runtime_error("wetting_layer_thickness: no nodes far enough from agglomerates");
  std::sort(values.begin(), values.end());
  const size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace dewet
