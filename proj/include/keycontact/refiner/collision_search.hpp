#pragma once

#include <cstdint>
#include <vector>

#include "keycontact/geometry/shape_model.hpp"

namespace keycontact {

struct CollisionSearchConfig {
  double radius_t = 0.01;   // m
  double radius_r = 0.05;   // rad
  int samples = 512;        // per round
  int rounds = 8;           // each round halves the radius around the incumbent
  /// Penetration accepted as collision-free when aligning keypoints.
  double penetration_tolerance = 1e-4;
  std::uint64_t seed = 0;
  void validate() const;
  /// Weight turning rotation (rad) into metres in pose distances.
  double rotation_weight() const { return radius_t / radius_r; }
};

struct RefinedTrajectory {
  std::vector<Pose> poses;
  std::size_t contact_index = 0;
  std::vector<double> original_penetration;
  std::vector<double> refined_penetration;
};

/// Replaces each slave pose by the sampled neighbour with the least
/// penetration into the master, ties going to the neighbour nearest the
/// original. Collision-free poses are kept as they are.
RefinedTrajectory refine_grounded_trajectory(const std::vector<Pose>& slave_poses, const ShapeModel& master,
                                             const Pose& master_pose, const ShapeModel& slave,
                                             const CollisionSearchConfig& cfg);

/// Random pose within (radius_t, radius_r) of `center`, applied in the parent
/// frame: translation added, rotation pre-multiplied.
Pose sample_neighbor(const Pose& center, double radius_t, double radius_r, std::mt19937_64& rng);

struct AlignedKeypoints {
  Pose master_kf;   // master frame; equal to slave_kf
  Pose slave_kf;    // slave keypoint at the found configuration, master frame
  Pose slave_pose;  // slave object pose in the master frame
  double frame_distance = 0.0;  // between slave_kf and the input master_kf
  double penetration = 0.0;
};

/// With the master at the origin, finds the collision-free slave pose whose
/// keypoint frame is nearest the master keypoint frame. Throws not_found with
/// the best attempt when no sample is collision-free.
AlignedKeypoints refine_transferred_keypoints(const Pose& master_kf, const Pose& slave_kf, const ShapeModel& master,
                                              const ShapeModel& slave, const CollisionSearchConfig& cfg);

}  // namespace keycontact
