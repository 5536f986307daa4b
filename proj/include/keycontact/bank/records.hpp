#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keycontact/common/json_io.hpp"
#include "keycontact/constraints/grasp_region.hpp"
#include "keycontact/constraints/trajectory_spec.hpp"
#include "keycontact/grounding/segmentation.hpp"
#include "keycontact/keypoints/keypoint_frame.hpp"

namespace keycontact {

inline constexpr int kBankSchemaVersion = 1;

/// Mesh referenced by path plus content hash; the bank never copies meshes.
struct MeshReference {
  std::string object_id;
  std::string path;
  std::string sha256;  // lowercase hex
  bool operator==(const MeshReference&) const = default;
};

struct Provenance {
  std::string demo_id;
  std::string source;  // trajectory file as given on the command line
  double t_begin = 0.0;  // demo timestamps of the segment, s
  double t_end = 0.0;
  std::size_t frame_begin = 0;
  std::size_t frame_end = 0;
};

struct SkillRecord {
  std::string subtask;
  Phase phase = Phase::manipulation;
  std::string master_id;
  std::string slave_id;
  KeypointFrame master_keypoint;
  KeypointFrame slave_keypoint;
  WaypointPath waypoints;  // slave keypoint in the master keypoint frame
  std::vector<GraspRegion> grasp_regions;
  std::optional<TrajectorySpec> trajectory;
  std::vector<SemanticConstraint> constraints;
  std::vector<MeshReference> meshes;
  std::vector<std::string> labels;
  Provenance provenance;
  void validate() const;
};

struct PlanRecord {
  std::string task;
  std::vector<std::string> subtasks;
  void validate() const;
};

Json skill_record_to_json(const SkillRecord& r);
SkillRecord skill_record_from_json(const Json& j, const std::string& where = "skill_record");
Json plan_record_to_json(const PlanRecord& r);
PlanRecord plan_record_from_json(const Json& j, const std::string& where = "plan_record");

/// Sorted keys, no whitespace, shortest round-trip numbers.
std::string canonical_json(const Json& j);
std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);

/// Throws not_found for a missing mesh and schema for a hash mismatch.
/// Relative paths resolve against `base`.
void check_mesh_references(const SkillRecord& r, const std::filesystem::path& base = {});

}  // namespace keycontact
