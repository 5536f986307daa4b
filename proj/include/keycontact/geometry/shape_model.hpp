#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "keycontact/geometry/mesh.hpp"
#include "keycontact/geometry/sdf_grid.hpp"

namespace keycontact {

class TriangleBvh;

struct ShapeOptions {
  double cell = 0.002;
  /// Grid padding around the mesh bounds; negative selects max(4 cells, 5 mm).
  double padding = -1.0;
  std::size_t surface_samples = 2000;
  std::uint64_t sample_seed = 0;
  /// Refuse grids larger than this many nodes.
  std::size_t max_nodes = 16'000'000;
  /// When set, grids are loaded from / written to `<dir>/<hash>_<cell>.sdf`.
  std::optional<std::filesystem::path> cache_dir;
};

/// Immutable triangle mesh with a precomputed signed-distance grid, exact
/// distance queries, and a fixed blue-noise surface sample set. Copies share
/// the underlying data.
class ShapeModel {
 public:
  ShapeModel() = default;
  static ShapeModel build(TriangleMesh mesh, const ShapeOptions& options = {});

  bool valid() const { return impl_ != nullptr; }
  const TriangleMesh& mesh() const;
  const SdfGrid& sdf() const;
  const Aabb& bounds() const;
  const ShapeOptions& options() const;

  /// Grid signed distance of a point given in the object frame.
  double local_sdf(const Vec3& p) const { return sdf().value(p); }
  /// Exact signed distance of a point given in the object frame.
  double exact_signed_distance(const Vec3& p) const;
  /// Closest surface point (object frame) and the outward normal there.
  std::pair<Vec3, Vec3> closest_surface_point(const Vec3& p) const;

  /// Blue-noise surface samples in the object frame, with face normals.
  const std::vector<Vec3>& surface_points() const;
  const std::vector<Vec3>& surface_normals() const;
  /// Mesh vertices followed by the surface samples; used wherever contact
  /// must be resolved on sharp features too.
  const std::vector<Vec3>& contact_points() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Signed distance from a world point to `shape` placed at `pose`.
double sdf_query(const ShapeModel& shape, const Pose& pose, const Vec3& point);

/// Largest interpenetration found by evaluating each shape's surface samples
/// against the other's SDF: max over samples of -sdf, clamped at 0.
double penetration_depth(const ShapeModel& a, const Pose& pose_a, const ShapeModel& b, const Pose& pose_b);

/// Same measure over vertices plus samples against the exact mesh distance;
/// slower, used to decide success in simulation.
double exact_penetration_depth(const ShapeModel& a, const Pose& pose_a, const ShapeModel& b, const Pose& pose_b);

/// Volume of the world AABB enclosing both posed vertex sets.
double union_aabb_volume(const ShapeModel& a, const Pose& pose_a, const ShapeModel& b, const Pose& pose_b);

/// World AABB of a posed vertex set.
Aabb posed_bounds(const TriangleMesh& mesh, const Pose& pose);

}  // namespace keycontact
