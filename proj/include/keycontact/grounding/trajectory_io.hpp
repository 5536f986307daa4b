#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "keycontact/common/json_io.hpp"
#include "keycontact/grounding/segmentation.hpp"

namespace keycontact {

/// Reads JSON Lines frames {"t", "entity_id", "pose", "cloud_ref"} grouped by
/// entity (first-appearance order). cloud_ref is a PLY path relative to the
/// trajectory file. Optional per-frame fields: "cloud_frame" ("world", the
/// default, or "object" to place the cloud with the frame pose) and
/// "landmarks" {"thumb": [[x,y,z]...], "index": [...]}.
std::vector<TrackedEntity> read_trajectories(const std::filesystem::path& jsonl);

/// Writes the same format; clouds go to `<dir>/clouds/<entity>_<t>.ply`.
void write_trajectories(const std::vector<TrackedEntity>& entities, const std::filesystem::path& jsonl);

Json segments_to_json(const std::vector<Segment>& segments, const std::vector<double>& timestamps);
std::vector<Segment> segments_from_json(const Json& j);

HandLandmarks landmarks_from_json(const Json& j, const std::string& where);
Json landmarks_to_json(const HandLandmarks& h);

}  // namespace keycontact
