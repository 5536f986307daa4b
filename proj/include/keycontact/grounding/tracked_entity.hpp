#pragma once

#include <string>
#include <vector>

#include "keycontact/geometry/point_cloud.hpp"
#include "keycontact/geometry/pose.hpp"

namespace keycontact {

/// Index-aligned hand landmarks, ordered base to tip.
struct HandLandmarks {
  std::vector<Vec3> thumb_points;
  std::vector<Vec3> index_points;

  const Vec3& thumb_tip() const { return thumb_points.back(); }
  const Vec3& index_tip() const { return index_points.back(); }
  void validate() const;
  HandLandmarks transformed(const Pose& pose) const;
};

/// One tracked hand or object. Clouds are in the world frame.
struct TrackedEntity {
  std::string id;
  std::vector<PointCloud> clouds;
  std::vector<Pose> poses;
  std::vector<double> timestamps;
  /// Optional; either empty or one entry per frame.
  std::vector<HandLandmarks> landmarks;

  std::size_t size() const { return timestamps.size(); }
  void validate() const;
  Vec3 centroid(std::size_t t) const { return clouds.at(t).centroid(); }
};

/// Builds an entity whose per-frame world clouds are an object-frame model
/// carried by each pose.
TrackedEntity entity_from_model(std::string id, const PointCloud& model, std::vector<Pose> poses,
                                std::vector<double> timestamps);

}  // namespace keycontact
