#pragma once

#include <string>
#include <vector>

#include "keycontact/geometry/mesh.hpp"

namespace keycontact {

using Vec2 = Eigen::Vector2d;

enum class Profile { rectangle, round, oval, hexagon, star, triangle, pentagon };

const char* to_string(Profile p);
Profile profile_from_string(const std::string& s);
const std::vector<Profile>& all_profiles();

/// Counter-clockwise peg cross-section centred on the origin, in metres.
/// Sizes: round r = 10 mm (64-gon), oval 12 x 8 mm semi-axes, rectangle
/// 16 x 10 mm, regular polygons with 10 mm circumradius, star 10 / 5 mm.
std::vector<Vec2> profile_polygon(Profile p);

/// Moves every edge outward by `distance` (mitred corners), so the
/// separation between the two outlines is exactly `distance`.
std::vector<Vec2> offset_polygon(const std::vector<Vec2>& poly, double distance);

/// Splits edges until no piece spans more than `max_angle` about the origin.
std::vector<Vec2> subdivide_by_angle(const std::vector<Vec2>& poly, double max_angle);

/// Extruded prism from z = 0 to z = length.
TriangleMesh make_prism(const std::vector<Vec2>& poly, double length);

/// Cylinder-like block with its top at z = 0 and a blind hole of outline
/// `hole` reaching down to -cavity_depth. The outline must be star-shaped
/// about the origin.
TriangleMesh make_block_with_hole(const std::vector<Vec2>& hole, double outer_radius, double cavity_depth,
                                  double height);

}  // namespace keycontact
