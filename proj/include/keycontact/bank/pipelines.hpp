#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "keycontact/bank/records.hpp"
#include "keycontact/keypoints/keypoint_extraction.hpp"
#include "keycontact/keypoints/squish_e.hpp"
#include "keycontact/sim/scene.hpp"
#include "keycontact/transfer/pipeline.hpp"

namespace keycontact {

// ground: trajectories -> segments + keypoints

struct GroundConfig {
  std::string hand_id = "hand";
  double epsilon = 0.02;
  double gamma = 0.05;
  SlaveKeypointOptions keypoint;
  double squish_mu = 0.001;
  void validate() const;
};

/// Keypoints of one segment. Grasping: the master keypoint is the gripper
/// pose in the object frame at t_b, the slave keypoint is the gripper frame
/// itself, and the path is the gripper approach over [0, t_b]. Manipulation:
/// extracted contact keypoints and the path over [t_b, t_e].
struct SubtaskKeypoints {
  Segment segment;
  KeypointFrame master_kf;
  KeypointFrame slave_kf;
  KeypointFrame observed_master_kf;  // this demo's own, before registry reuse
  WaypointPath raw_path;
  WaypointPath waypoints;  // compressed
};

struct GroundResult {
  std::vector<Segment> segments;
  std::vector<SubtaskKeypoints> subtasks;
  std::vector<double> timestamps;
};

/// Gripper pose per frame from the hand landmarks.
std::vector<Pose> gripper_poses(const TrackedEntity& hand);

/// `registry`, when given, supplies (and records) keypoint frames per
/// (phase, master, slave) so later demonstrations reuse the first one's.
GroundResult ground_demonstration(const std::vector<TrackedEntity>& entities, const GroundConfig& cfg,
                                  KeypointRegistry* registry = nullptr);
Json ground_result_to_json(const GroundResult& r);
Json ground_config_to_json(const GroundConfig& c);
GroundConfig ground_config_from_json(const Json& j);

// learn: demonstrations -> plan + skill records

struct LearnDemo {
  std::string id;
  std::filesystem::path trajectories;
};

struct LearnConfig {
  std::string task;
  std::vector<LearnDemo> demos;
  /// Descriptions of the first demo's segments, in order; missing ones are
  /// generated from the phase and object ids.
  std::vector<std::string> subtasks;
  /// object id -> mesh path, stored as references with hashes.
  std::map<std::string, std::string> meshes;
  std::vector<std::string> labels;
  GroundConfig ground;
  double grasp_pos_eps = 0.01;
  double grasp_ang_eps = 0.2;
  /// Relative paths in the config resolve against this directory.
  std::filesystem::path base_dir;
  void validate() const;
};

/// base_dir defaults to the directory of the config file.
LearnConfig learn_config_from_json(const Json& j, const std::filesystem::path& base_dir);
Json learn_config_to_json(const LearnConfig& c);

struct LearnResult {
  PlanRecord plan;
  std::vector<SkillRecord> skills;
};

/// One skill per segment of the first demonstration. Later demonstrations
/// contribute grasp keypoints to the grasp regions of matching segments.
LearnResult learn_skills(const LearnConfig& cfg);

// transfer: record keypoint -> target object

TransferResult transfer_record_keypoint(const SkillRecord& record, KeypointRole role, const PointCloud& reference,
                                        const PointCloud& target, const std::string& target_owner,
                                        const TransferConfig& cfg);

// refine: simulated peg-in-hole scene -> refined in-hand pose

struct RefineRequest {
  PegHoleOptions shapes;
  PerceptionNoise noise;
  std::uint64_t scene_seed = 0;
  RefinementConfig refinement;
  void validate() const;
};

RefineRequest refine_request_from_json(const Json& j);
Json refine_request_to_json(const RefineRequest& r);

struct RefineReport {
  RefinementResult result;
  InsertionOutcome vision;
  InsertionOutcome refined;
  Pose waypoint;  // insertion target used, block frame
  Pose true_in_hand;
};

/// When `record` is given, its last waypoint (with its keypoint frames)
/// replaces the scene's insertion waypoint; its objects must share the
/// block and peg frames.
RefineReport run_refine(const RefineRequest& request, const SkillRecord* record = nullptr);
Json refine_report_to_json(const RefineReport& r);

}  // namespace keycontact
