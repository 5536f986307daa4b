#include "keycontact/keypoints/keypoint_extraction.hpp"

#include <cmath>
#include <optional>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/kd_tree.hpp"

namespace keycontact {

std::size_t window_start(std::span<const double> timestamps, std::size_t contact_index, double delta_t) {
  if (contact_index < 1 || contact_index >= timestamps.size()) {
    fail(ErrorKind::invalid_argument, "contact index must be in [1, history length)");
  }
  if (!(delta_t > 0.0)) fail(ErrorKind::invalid_argument, "delta_t must be positive");
  std::size_t start = 0;
  for (std::size_t i = contact_index; i-- > 0;) {
    if (timestamps[contact_index] - timestamps[i] >= delta_t - 1e-12) {
      start = i;
      break;
    }
  }
  return start;
}

namespace {

std::optional<std::size_t> farthest_in_band(const std::vector<Vec3>& pts, const Vec3& c, const Vec3& z, double band) {
  std::optional<std::size_t> best;
  double best_d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 v = pts[i] - c;
    const double d2 = v.squaredNorm();
    if (d2 < 1e-18) continue;
    if (std::abs(v.dot(z)) > band * std::sqrt(d2)) continue;
    if (!best || d2 > best_d2) {
      best = i;
      best_d2 = d2;
    }
  }
  return best;
}

}  // namespace

KeypointFrame extract_slave_keypoint(const PointCloud& slave_cloud, const PointCloud& master_cloud,
                                     std::span<const Pose> slave_poses, std::span<const double> timestamps,
                                     std::size_t contact_index, const SlaveKeypointOptions& options,
                                     const std::string& owner) {
  if (slave_cloud.empty() || master_cloud.empty()) fail(ErrorKind::invalid_argument, "keypoint clouds must be non-empty");
  if (slave_poses.size() != timestamps.size()) fail(ErrorKind::invalid_argument, "pose history and timestamps differ");
  const std::size_t t0 = window_start(timestamps, contact_index, options.delta_t);

  // Origin: argmin over slave points of the distance to the master cloud.
  KdTree3 master_tree(master_cloud.points);
  std::size_t ci = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < slave_cloud.size(); ++i) {
    const double d2 = master_tree.nearest(slave_cloud.points[i]).distance_sq;
    if (d2 < best) {
      best = d2;
      ci = i;
    }
  }
  const Vec3 c = slave_cloud.points[ci];

  // Approach direction from the replayed trajectory of c.
  const Pose& at_contact = slave_poses[contact_index];
  const Vec3 c_before = slave_poses[t0] * (at_contact.inverse() * c);
  const Vec3 disp = c - c_before;
  if (disp.norm() < 1e-6) fail(ErrorKind::degenerate, "no pre-contact motion; approach direction undefined");
  const Vec3 z = disp.normalized();

  auto xi = farthest_in_band(slave_cloud.points, c, z, options.perpendicular_band);
  if (!xi) xi = farthest_in_band(slave_cloud.points, c, z, options.relaxed_band);
  if (!xi) fail(ErrorKind::degenerate, "no slave point roughly perpendicular to the approach direction");
  Vec3 x = slave_cloud.points[*xi] - c;
  x -= x.dot(z) * z;
  x.normalize();
  const Vec3 y = z.cross(x);

  const Pose inv = at_contact.inverse();
  KeypointFrame kf;
  kf.origin = inv * c;
  kf.x_axis = inv.rotate(x);
  kf.y_axis = inv.rotate(y);
  kf.z_axis = inv.rotate(z);
  kf.owner = owner;
  kf.role = KeypointRole::slave;
  return kf;
}

KeypointFrame extract_master_keypoint(const PointCloud& master_cloud, const KeypointFrame& slave_kf,
                                      const Pose& slave_pose, const Pose& master_pose, const std::string& owner) {
  if (master_cloud.empty()) fail(ErrorKind::invalid_argument, "master cloud must be non-empty");
  const Vec3 c_world = slave_pose * slave_kf.origin;
  KdTree3 tree(master_cloud.points);
  const Vec3 cm_world = master_cloud.points[tree.nearest(c_world).index];
  const Pose world_from_master_kf(Quat(slave_pose.rotation() * slave_kf.pose().rotation()), cm_world);
  return KeypointFrame::from_pose(master_pose.inverse() * world_from_master_kf, owner, KeypointRole::master);
}

KeypointFrame grasp_keypoint(const Pose& gripper_world, const Pose& object_world, const std::string& owner) {
  return KeypointFrame::from_pose(object_world.inverse() * gripper_world, owner, KeypointRole::master);
}

}  // namespace keycontact
