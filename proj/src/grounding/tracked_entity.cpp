#include "keycontact/grounding/tracked_entity.hpp"

#include "keycontact/common/error.hpp"

namespace keycontact {

void HandLandmarks::validate() const {
  if (thumb_points.size() < 2 || index_points.size() < 2) {
    fail(ErrorKind::invalid_argument, "hand landmarks need at least two thumb and two index points");
  }
  for (const auto* chain : {&thumb_points, &index_points})
    for (const Vec3& p : *chain)
      if (!p.allFinite()) fail(ErrorKind::invalid_argument, "hand landmarks must be finite");
  if ((thumb_tip() - index_tip()).norm() <= 1e-6) {
    fail(ErrorKind::degenerate, "thumb and index tips coincide");
  }
}

HandLandmarks HandLandmarks::transformed(const Pose& pose) const {
  HandLandmarks out;
  for (const Vec3& p : thumb_points) out.thumb_points.push_back(pose * p);
  for (const Vec3& p : index_points) out.index_points.push_back(pose * p);
  return out;
}

void TrackedEntity::validate() const {
  const std::size_t n = timestamps.size();
  if (n < 2) fail(ErrorKind::invalid_argument, "entity '" + id + "' needs at least two frames");
  if (clouds.size() != n || poses.size() != n) {
    fail(ErrorKind::invalid_argument, "entity '" + id + "': clouds, poses and timestamps differ in length");
  }
  if (!landmarks.empty() && landmarks.size() != n) {
    fail(ErrorKind::invalid_argument, "entity '" + id + "': landmarks must be empty or one per frame");
  }
  for (std::size_t t = 1; t < n; ++t) {
    if (!(timestamps[t] > timestamps[t - 1])) {
      fail(ErrorKind::invalid_argument, "entity '" + id + "': timestamps must strictly increase");
    }
  }
  for (const auto& c : clouds) c.validate();
}

TrackedEntity entity_from_model(std::string id, const PointCloud& model, std::vector<Pose> poses,
                                std::vector<double> timestamps) {
  TrackedEntity e;
  e.id = std::move(id);
  for (const Pose& p : poses) e.clouds.push_back(model.transformed(p));
  e.poses = std::move(poses);
  e.timestamps = std::move(timestamps);
  return e;
}

}  // namespace keycontact
