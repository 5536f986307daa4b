#pragma once

#include <map>
#include <string>
#include <vector>

#include "keycontact/geometry/pose.hpp"

namespace keycontact {

enum class KeypointRole { master, slave };
const char* to_string(KeypointRole role);
KeypointRole role_from_string(const std::string& s);

/// Object-attached frame: origin plus axes, all in the owner's object frame.
/// The triad satisfies y = z x x (equivalently z = x x y).
struct KeypointFrame {
  Vec3 origin = Vec3::Zero();
  Vec3 x_axis = Vec3::UnitX();
  Vec3 y_axis = Vec3::UnitY();
  Vec3 z_axis = Vec3::UnitZ();
  std::string owner;
  KeypointRole role = KeypointRole::slave;

  /// The frame as a Pose relative to the owner object.
  Pose pose() const { return Pose::from_axes(x_axis, y_axis, z_axis, origin); }
  static KeypointFrame from_pose(const Pose& p, std::string owner, KeypointRole role);
  /// Throws unless the axes are unit, orthogonal and right-handed (1e-9).
  void validate() const;
};

/// Slave keypoint frames expressed in the master keypoint frame, with times.
struct WaypointPath {
  std::vector<Pose> waypoints;
  std::vector<double> timestamps;

  std::size_t size() const { return waypoints.size(); }
  void validate() const;
};

/// Keypoint frames of the first demonstration of each subtask, reused for
/// later demonstrations so that every demo shares one frame set.
class KeypointRegistry {
 public:
  struct Entry {
    KeypointFrame master;
    KeypointFrame slave;
  };
  /// Returns the stored entry, inserting `candidate` if the subtask is new.
  const Entry& get_or_insert(const std::string& subtask_id, const Entry& candidate);
  const Entry* find(const std::string& subtask_id) const;

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace keycontact
