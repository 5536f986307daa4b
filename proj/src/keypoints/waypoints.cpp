#include "keycontact/keypoints/waypoints.hpp"

#include "keycontact/common/error.hpp"

namespace keycontact {

WaypointPath relative_waypoint_path(const KeypointFrame& slave_kf, const KeypointFrame& master_kf,
                                    std::span<const Pose> slave_poses, std::span<const Pose> master_poses,
                                    std::span<const double> timestamps) {
  if (slave_poses.size() != master_poses.size() || slave_poses.size() != timestamps.size()) {
    fail(ErrorKind::invalid_argument, "waypoint inputs must be index-aligned");
  }
  const Pose s_kf = slave_kf.pose();
  const Pose m_kf = master_kf.pose();
  WaypointPath path;
  for (std::size_t t = 0; t < slave_poses.size(); ++t) {
    path.waypoints.push_back((master_poses[t] * m_kf).inverse() * (slave_poses[t] * s_kf));
    path.timestamps.push_back(timestamps[t]);
  }
  return path;
}

}  // namespace keycontact
