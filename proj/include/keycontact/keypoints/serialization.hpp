#pragma once

#include "keycontact/common/json_io.hpp"
#include "keycontact/keypoints/keypoint_frame.hpp"

namespace keycontact {

inline constexpr int kKeypointSchemaVersion = 1;

Json keypoint_frame_to_json(const KeypointFrame& kf);
KeypointFrame keypoint_frame_from_json(const Json& j, const std::string& where = "keypoint_frame");

Json waypoint_path_to_json(const WaypointPath& path);
WaypointPath waypoint_path_from_json(const Json& j, const std::string& where = "waypoint_path");

}  // namespace keycontact
