#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "keycontact/geometry/mesh.hpp"
#include "keycontact/keypoints/keypoint_frame.hpp"

namespace keycontact {

/// Box of allowed keypoint poses in the owner's object frame: per-axis
/// position bounds and per-axis limits on the rotation vector of
/// mean_rotation^-1 * R.
struct GraspRegion {
  Vec3 position_min = Vec3::Zero();
  Vec3 position_max = Vec3::Zero();
  Quat mean_rotation = Quat::Identity();
  Vec3 angular_limit = Vec3::Zero();
  Obb anchor;
  std::string group_label;
  std::string owner;

  void validate() const;
  /// Rotation-vector deviation of `rotation` from the mean, in the mean frame.
  Vec3 deviation(const Quat& rotation) const;
  bool contains(const KeypointFrame& kf, double tolerance = 1e-9) const;
};

GraspRegion build_grasp_region(const std::vector<KeypointFrame>& group, const Obb& anchor,
                               const std::string& label = "");

/// Density-based grouping under d = max(|dc| / pos_eps, angle / ang_eps)
/// with neighbourhood radius 1. Points that are not density-reachable form
/// singleton groups. Groups and their members follow input order.
std::vector<std::vector<std::size_t>> group_grasps_fallback(const std::vector<KeypointFrame>& frames, double pos_eps,
                                                            double ang_eps, std::size_t min_points = 1);

/// n frames drawn uniformly from the region box (position and per-axis
/// rotation deviation). Reproducible per seed.
std::vector<KeypointFrame> sample_grasp_candidates(const GraspRegion& region, std::size_t n, std::uint64_t seed);

/// Pre-grasp pose: the grasp pose backed off by `approach_distance` along
/// its own -Z axis.
Pose pregrasp_pose(const Pose& grasp, double approach_distance = 0.05);

enum class ConstraintSource { external_reasoner, fallback_grouping };

/// Free-text constraint carried through records; produced elsewhere.
struct SemanticConstraint {
  std::string label;
  std::string rationale;
  ConstraintSource source = ConstraintSource::fallback_grouping;
  void validate() const;
};

const char* to_string(ConstraintSource s);
ConstraintSource constraint_source_from_string(const std::string& s);

}  // namespace keycontact
