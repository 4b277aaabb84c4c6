#include "dewet/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dewet {

namespace {

double step1d(double x, double x1, double x2) {
  return 1.0 / (std::exp(x1 - x) + 1.0) + 1.0 / (std::exp(x - x2) + 1.0) - 1.0;
}

double cuboid_field(double x, double y, double cx, double cy, double wx, double wy) {
  return step1d(x, cx - 0.5 * wx, cx + 0.5 * wx) * step1d(y, cy - 0.5 * wy, cy + 0.5 * wy);
}

}  // namespace

Vector stepped_profile(const ProfileSpec& spec, const IntervalMesh& mesh) {
  if (spec.kind != ProfileSpec::Kind::Stepped && spec.kind != ProfileSpec::Kind::SemiInfinite)
    throw std::invalid_argument("stepped_profile: spec kind is not a step");
  if (!(spec.x1 < spec.x2))
    throw std::invalid_argument("stepped_profile: need x1 < x2");
  Vector h(mesh.n_nodes());
  for (int i = 0; i < mesh.n_nodes(); ++i) h[i] = step1d(mesh.nodes[i], spec.x1, spec.x2);
  return h;
}

Vector island_3d(const ProfileSpec& spec, const TriMesh& mesh) {
  const double floor = spec.floor_thickness;
  if (!(floor > 0.0)) throw std::invalid_argument("island_3d: floor_thickness must be positive");
  const double cx = spec.center_x, cy = spec.center_y;
  Vector h(mesh.n_nodes());
  switch (spec.kind) {
    case ProfileSpec::Kind::Cuboid: {
      if (!(spec.width_x > 0.0) || !(spec.width_y > 0.0))
        throw std::invalid_argument("island_3d: cuboid widths must be positive");
      for (int i = 0; i < mesh.n_nodes(); ++i)
        h[i] = cuboid_field(mesh.x[i], mesh.y[i], cx, cy, spec.width_x, spec.width_y);
      break;
    }
    case ProfileSpec::Kind::SquareRing: {
      if (!(spec.inner_width > 0.0) || !(spec.inner_width < spec.outer_width))
        throw std::invalid_argument("island_3d: ring needs 0 < inner_width < outer_width");
      for (int i = 0; i < mesh.n_nodes(); ++i)
        h[i] = cuboid_field(mesh.x[i], mesh.y[i], cx, cy, spec.outer_width, spec.outer_width) -
               cuboid_field(mesh.x[i], mesh.y[i], cx, cy, spec.inner_width, spec.inner_width);
      break;
    }
    case ProfileSpec::Kind::Cross: {
      if (!(spec.limb_length > 0.0))
        throw std::invalid_argument("island_3d: cross limb length must be positive");
      const double c = spec.limb_length;
      // Unit center cube plus four (1, c, 1) limbs attached to its faces.
      const double lx = cx + 0.5 + 0.5 * c;  // +x limb center
      for (int i = 0; i < mesh.n_nodes(); ++i) {
        const double x = mesh.x[i], y = mesh.y[i];
        double v = cuboid_field(x, y, cx, cy, 1.0, 1.0);
        v = std::max(v, cuboid_field(x, y, lx, cy, c, 1.0));
        v = std::max(v, cuboid_field(x, y, 2.0 * cx - lx, cy, c, 1.0));
        v = std::max(v, cuboid_field(x, y, cx, cy + 0.5 + 0.5 * c, 1.0, c));
        v = std::max(v, cuboid_field(x, y, cx, cy - 0.5 - 0.5 * c, 1.0, c));
        h[i] = v;
      }
      break;
    }
    default:
      throw std::invalid_argument("island_3d: spec kind is not a 3D island");
  }
  for (int i = 0; i < mesh.n_nodes(); ++i) h[i] = std::max(h[i], floor);
  return h;
}

Vector flat_profile(double c, const IntervalMesh& mesh) {
  if (c < 0.0) throw std::invalid_argument("flat_profile: thickness must be nonnegative");
  return Vector::Constant(mesh.n_nodes(), c);
}

Vector flat_profile(double c, const TriMesh& mesh) {
  if (c < 0.0) throw std::invalid_argument("flat_profile: thickness must be nonnegative");
  return Vector::Constant(mesh.n_nodes(), c);
}

ProfileExtent profile_extent(const ProfileSpec& spec) {
  const double cx = spec.center_x, cy = spec.center_y;
  switch (spec.kind) {
    case ProfileSpec::Kind::Stepped:
      return {spec.x1, spec.x2, 0.0, 0.0};
    case ProfileSpec::Kind::SemiInfinite:
      return {spec.x1, spec.x1, 0.0, 0.0};
    case ProfileSpec::Kind::Cuboid:
      return {cx - 0.5 * spec.width_x, cx + 0.5 * spec.width_x, cy - 0.5 * spec.width_y,
              cy + 0.5 * spec.width_y};
    case ProfileSpec::Kind::SquareRing:
      return {cx - 0.5 * spec.outer_width, cx + 0.5 * spec.outer_width,
              cy - 0.5 * spec.outer_width, cy + 0.5 * spec.outer_width};
    case ProfileSpec::Kind::Cross: {
      const double r = 0.5 + spec.limb_length;
      return {cx - r, cx + r, cy - r, cy + r};
    }
    case ProfileSpec::Kind::Flat:
    default:
      return {};
  }
}

}  // namespace dewet
