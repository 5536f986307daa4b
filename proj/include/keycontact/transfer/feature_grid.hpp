#pragma once

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

#include "keycontact/geometry/point_cloud.hpp"

namespace keycontact {

/// Voxelized feature cloud. Voxels are keyed in a canonical frame derived
/// from the cloud itself (centroid + principal axes), so rigidly moving the
/// input moves every voxel center with it and leaves the partition unchanged.
struct FeatureGrid {
  std::vector<Vec3> centers;  // mean of member points, input frame
  Eigen::MatrixXd features;   // one row per voxel
  std::vector<std::array<int, 3>> keys;
  std::vector<int> counts;
  double cell_size = 0.005;
  std::string owner;

  std::size_t size() const { return centers.size(); }
  int dim() const { return static_cast<int>(features.cols()); }
  void validate() const;
  /// Sub-grid with the given voxel indices, in the given order.
  FeatureGrid subset(const std::vector<std::size_t>& indices) const;
  /// Index of the voxel center nearest to p (lowest index on ties).
  std::size_t nearest_voxel(const Vec3& p) const;
};

/// Canonical frame of a point set: origin at the centroid, axes along the
/// principal directions (descending variance), first two axes oriented so the
/// third moment along them is non-negative.
Pose canonical_frame(const std::vector<Vec3>& points);

/// Voxel feature = mean of member point features. Requires per-point features.
FeatureGrid build_feature_grid(const PointCloud& cloud, double cell_size = 0.005, const std::string& owner = "");

}  // namespace keycontact
