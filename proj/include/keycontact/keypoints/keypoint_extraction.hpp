#pragma once

#include <span>

#include "keycontact/geometry/point_cloud.hpp"
#include "keycontact/keypoints/keypoint_frame.hpp"

namespace keycontact {

struct SlaveKeypointOptions {
  /// Pre-contact window used for the approach direction (s).
  double delta_t = 0.2;
  /// |cos| band for the x-axis search, and the wider retry band.
  double perpendicular_band = 0.05;
  double relaxed_band = 0.25;
};

/// Slave keypoint at contact onset. Clouds are world-frame at index
/// `contact_index`; `slave_poses` and `timestamps` cover the history.
/// Origin: slave point nearest the master cloud. z: unit displacement of
/// that point over the delta_t window, replayed through the slave poses.
/// x: direction to the farthest slave point inside the perpendicularity band,
/// projected onto the plane normal to z. y = z x x. Ties go to the lowest
/// point index. The frame is returned in the slave object frame.
KeypointFrame extract_slave_keypoint(const PointCloud& slave_cloud, const PointCloud& master_cloud,
                                     std::span<const Pose> slave_poses, std::span<const double> timestamps,
                                     std::size_t contact_index, const SlaveKeypointOptions& options = {},
                                     const std::string& owner = "slave");

/// Master keypoint: master point nearest the slave origin, axes copied from
/// the slave frame. Poses are the world poses at contact.
KeypointFrame extract_master_keypoint(const PointCloud& master_cloud, const KeypointFrame& slave_kf,
                                      const Pose& slave_pose, const Pose& master_pose,
                                      const std::string& owner = "master");

/// Grasp keypoint: the gripper pose at contact expressed in the object frame.
KeypointFrame grasp_keypoint(const Pose& gripper_world, const Pose& object_world, const std::string& owner);

/// First index of the pre-contact window: the latest frame at least delta_t
/// before contact, or frame 0 if the history is shorter.
std::size_t window_start(std::span<const double> timestamps, std::size_t contact_index, double delta_t);

}  // namespace keycontact
