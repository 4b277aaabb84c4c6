#pragma once

#include "dewet/assembly.hpp"
#include "dewet/mesh.hpp"

namespace dewet {

// Initial-condition descriptor.  Only the fields of the selected kind are
// read; 3D shapes are centered at (center_x, center_y) and sit on a
// wetting layer of floor_thickness.
struct ProfileSpec {
  enum class Kind { Stepped, SemiInfinite, Cuboid, SquareRing, Cross, Flat };

  Kind kind = Kind::Stepped;
  double x1 = 0.0;           // stepped: left shoulder
  double x2 = 0.0;           // stepped: right shoulder (semi-infinite: far away)
  double width_x = 0.0;      // cuboid
  double width_y = 0.0;      // cuboid
  double outer_width = 0.0;  // square ring
  double inner_width = 0.0;  // square ring
  double limb_length = 0.0;  // cross: length of each of the four limbs
  double center_x = 0.0;
  double center_y = 0.0;
  double thickness = 1.0;    // flat
  double floor_thickness = 1e-5;
};

// Double logistic step of unit height between shoulders x1 and x2:
//   h(x) = 1/(e^{x1-x} + 1) + 1/(e^{x-x2} + 1) - 1.
// Strictly inside (0, 1); transition width is 1.
Vector stepped_profile(const ProfileSpec& spec, const IntervalMesh& mesh);

// Cuboid: product of the x and y step factors; square ring: outer cuboid
// field minus inner cuboid field; cross: pointwise maximum of the center
// cube and the four limb cuboids.  All are clipped below at
// floor_thickness.
Vector island_3d(const ProfileSpec& spec, const TriMesh& mesh);

Vector flat_profile(double c, const IntervalMesh& mesh);
Vector flat_profile(double c, const TriMesh& mesh);

// Axis-aligned bounding box of the region where the profile deviates
// visibly from its far field; used to check domain margins.
struct ProfileExtent {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
};

ProfileExtent profile_extent(const ProfileSpec& spec);

}  // namespace dewet
