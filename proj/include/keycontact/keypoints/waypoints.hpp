#pragma once

#include <span>

#include "keycontact/keypoints/keypoint_frame.hpp"

namespace keycontact {

/// waypoint_t = (master_pose_t * master_kf)^-1 * (slave_pose_t * slave_kf).
WaypointPath relative_waypoint_path(const KeypointFrame& slave_kf, const KeypointFrame& master_kf,
                                    std::span<const Pose> slave_poses, std::span<const Pose> master_poses,
                                    std::span<const double> timestamps);

}  // namespace keycontact
