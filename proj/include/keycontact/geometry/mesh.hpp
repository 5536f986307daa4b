#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "keycontact/geometry/pose.hpp"

namespace keycontact {

using Face = Eigen::Vector3i;

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  bool valid() const { return (max.array() >= min.array()).all(); }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }
  double volume() const { return valid() ? extent().prod() : 0.0; }
  bool contains(const Vec3& p, double tol = 0.0) const {
    return ((p - min).array() >= -tol).all() && ((max - p).array() >= -tol).all();
  }
};

/// Oriented bounding box; half-extents are all positive.
struct Obb {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.5);
  Quat orientation = Quat::Identity();

  void validate() const;
  Vec3 extent() const { return 2.0 * half_extents; }
  Obb transformed(const Pose& pose) const;
};

/// Triangle mesh with counter-clockwise (outward) winding.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  void validate() const;
  Aabb bounds() const;
  Vec3 face_normal(std::size_t f) const;  // unit
  double face_area(std::size_t f) const;
  double surface_area() const;
  /// Signed enclosed volume (positive for outward winding).
  double volume() const;
  TriangleMesh transformed(const Pose& pose) const;
  std::uint64_t content_hash() const;
  /// True when every undirected edge is shared by exactly two faces with
  /// opposite orientation.
  bool is_watertight() const;
};

/// Closed, outward-wound mesh of an axis-aligned box.
TriangleMesh make_box_mesh(const Vec3& min, const Vec3& max);
TriangleMesh make_unit_cube();  // centered at the origin, side 1
TriangleMesh make_uv_sphere(double radius, int slices, int stacks);

/// Object-frame AABB expressed as an Obb with identity orientation.
Obb object_aabb(const TriangleMesh& mesh);
/// World OBB: the object-frame AABB carried by `pose`.
Obb world_obb(const TriangleMesh& mesh, const Pose& pose);

/// Area-weighted uniform surface samples; each sample also reports its face.
struct SurfaceSample {
  Vec3 point;
  std::size_t face;
};
std::vector<SurfaceSample> sample_surface_uniform(const TriangleMesh& mesh, std::size_t n,
                                                  std::mt19937_64& rng);
/// Blue-noise surface samples: greedy Poisson-disk selection from a dense
/// uniform candidate set, topped up to exactly n points.
std::vector<SurfaceSample> sample_surface_blue_noise(const TriangleMesh& mesh, std::size_t n,
                                                     std::uint64_t seed);

}  // namespace keycontact
