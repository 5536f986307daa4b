#include "keycontact/keypoints/keypoint_frame.hpp"

#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

const char* to_string(KeypointRole role) { return role == KeypointRole::master ? "master" : "slave"; }

KeypointRole role_from_string(const std::string& s) {
  if (s == "master") return KeypointRole::master;
  if (s == "slave") return KeypointRole::slave;
  fail(ErrorKind::schema, "unknown keypoint role '" + s + "'");
}

KeypointFrame KeypointFrame::from_pose(const Pose& p, std::string owner, KeypointRole role) {
  KeypointFrame kf;
  kf.origin = p.translation();
  kf.x_axis = p.x_axis();
  kf.y_axis = p.y_axis();
  kf.z_axis = p.z_axis();
  kf.owner = std::move(owner);
  kf.role = role;
  return kf;
}

void KeypointFrame::validate() const {
  constexpr double tol = 1e-9;
  if (!origin.allFinite()) fail(ErrorKind::invalid_argument, "keypoint origin is not finite");
  for (const Vec3* a : {&x_axis, &y_axis, &z_axis}) {
    if (std::abs(a->norm() - 1.0) > tol) fail(ErrorKind::invalid_argument, "keypoint axes must be unit length");
  }
  if ((z_axis.cross(x_axis) - y_axis).norm() > tol || std::abs(x_axis.dot(z_axis)) > tol) {
    fail(ErrorKind::invalid_argument, "keypoint axes must form a right-handed orthonormal triad");
  }
}

void WaypointPath::validate() const {
  if (waypoints.size() < 2) fail(ErrorKind::invalid_argument, "a waypoint path needs at least two waypoints");
  if (timestamps.size() != waypoints.size()) {
    fail(ErrorKind::invalid_argument, "waypoint path timestamps and waypoints differ in length");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) fail(ErrorKind::invalid_argument, "waypoint timestamps must increase");
  }
}

const KeypointRegistry::Entry& KeypointRegistry::get_or_insert(const std::string& subtask_id, const Entry& candidate) {
  return entries_.try_emplace(subtask_id, candidate).first->second;
}

const KeypointRegistry::Entry* KeypointRegistry::find(const std::string& subtask_id) const {
  auto it = entries_.find(subtask_id);
  return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace keycontact
