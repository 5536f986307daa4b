#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "keycontact/geometry/mesh.hpp"

namespace keycontact {

class TriangleBvh;

/// Uniform signed-distance grid sampled at node positions
/// origin + cell * (i, j, k). Values are negative inside the surface.
class SdfGrid {
 public:
  static constexpr std::uint32_t kFileVersion = 1;

  SdfGrid() = default;
  /// Samples the exact signed distance of `mesh` over its bounds padded by
  /// `padding` on every side.
  static SdfGrid build(const TriangleMesh& mesh, const TriangleBvh& bvh, double cell, double padding);

  /// Trilinear interpolation inside the domain. Outside, the value at the
  /// nearest domain point plus the distance to that point, which keeps the
  /// field monotone along outward rays.
  double value(const Vec3& p) const;
  /// Central-difference gradient of `value`.
  Vec3 gradient(const Vec3& p) const;

  double cell() const { return cell_; }
  const Vec3& origin() const { return origin_; }
  const Eigen::Vector3i& dims() const { return dims_; }
  Aabb domain() const;
  std::uint64_t mesh_hash() const { return mesh_hash_; }
  const std::vector<double>& values() const { return values_; }

  void save(const std::filesystem::path& path) const;
  /// Loads a cached grid; returns false if the file is missing, of another
  /// version, or keyed to a different mesh hash / cell size.
  bool load(const std::filesystem::path& path, std::uint64_t expected_hash, double expected_cell);

 private:
  double node(int i, int j, int k) const {
    return values_[(static_cast<std::size_t>(k) * dims_.y() + j) * dims_.x() + i];
  }
  double interpolate(const Vec3& p) const;

  Vec3 origin_ = Vec3::Zero();
  double cell_ = 0.0;
  Eigen::Vector3i dims_ = Eigen::Vector3i::Zero();
  std::vector<double> values_;
  std::uint64_t mesh_hash_ = 0;
};

}  // namespace keycontact
