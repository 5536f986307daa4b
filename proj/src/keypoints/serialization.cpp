#include "keycontact/keypoints/serialization.hpp"

namespace keycontact {

Json keypoint_frame_to_json(const KeypointFrame& kf) {
  return Json{{"schema_version", kKeypointSchemaVersion},
              {"owner", kf.owner},
              {"role", to_string(kf.role)},
              {"origin", vec3_to_json(kf.origin)},
              {"x_axis", vec3_to_json(kf.x_axis)},
              {"y_axis", vec3_to_json(kf.y_axis)},
              {"z_axis", vec3_to_json(kf.z_axis)}};
}

KeypointFrame keypoint_frame_from_json(const Json& j, const std::string& where) {
  check_schema_version(j, kKeypointSchemaVersion, where);
  KeypointFrame kf;
  const Json& owner = require_field(j, "owner", where);
  if (!owner.is_string()) fail(ErrorKind::schema, where + ".owner: expected a string");
  kf.owner = owner.get<std::string>();
  const Json& role = require_field(j, "role", where);
  if (!role.is_string()) fail(ErrorKind::schema, where + ".role: expected a string");
  kf.role = role_from_string(role.get<std::string>());
  kf.origin = vec3_from_json(require_field(j, "origin", where), where + ".origin");
  kf.x_axis = vec3_from_json(require_field(j, "x_axis", where), where + ".x_axis");
  kf.y_axis = vec3_from_json(require_field(j, "y_axis", where), where + ".y_axis");
  kf.z_axis = vec3_from_json(require_field(j, "z_axis", where), where + ".z_axis");
  try {
    kf.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return kf;
}

Json waypoint_path_to_json(const WaypointPath& path) {
  Json wps = Json::array();
  for (const Pose& p : path.waypoints) wps.push_back(pose_to_json(p));
  return Json{{"schema_version", kKeypointSchemaVersion}, {"waypoints", std::move(wps)}, {"timestamps", path.timestamps}};
}

WaypointPath waypoint_path_from_json(const Json& j, const std::string& where) {
  check_schema_version(j, kKeypointSchemaVersion, where);
  const Json& wps = require_field(j, "waypoints", where);
  const Json& ts = require_field(j, "timestamps", where);
  if (!wps.is_array() || !ts.is_array()) fail(ErrorKind::schema, where + ": waypoints and timestamps must be arrays");
  WaypointPath path;
  for (std::size_t i = 0; i < wps.size(); ++i) {
    path.waypoints.push_back(pose_from_json(wps[i], where + ".waypoints[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    path.timestamps.push_back(number_from_json(ts[i], where + ".timestamps[" + std::to_string(i) + "]"));
  }
  try {
    path.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return path;
}

}  // namespace keycontact
