#pragma once

#include <Eigen/Core>

#include <vector>

#include "keycontact/geometry/pose.hpp"

namespace keycontact {

/// Points in meters with optional per-point feature vectors. When present,
/// `features` has one row per point and a fixed column count D.
struct PointCloud {
  std::vector<Vec3> points;
  Eigen::MatrixXd features;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}
  PointCloud(std::vector<Vec3> pts, Eigen::MatrixXd feats)
      : points(std::move(pts)), features(std::move(feats)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_features() const { return features.size() > 0; }
  int feature_dim() const { return has_features() ? static_cast<int>(features.cols()) : 0; }

  /// Throws if features are present but their row count mismatches.
  void validate() const;
  Vec3 centroid() const;
  PointCloud transformed(const Pose& pose) const;
};

/// Minimum Euclidean distance over all point pairs. Throws on empty input.
double cloud_min_distance(const PointCloud& a, const PointCloud& b);

}  // namespace keycontact
