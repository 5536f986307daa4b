#include "keycontact/transfer/keypoint_solve.hpp"

#include <vector>

#include "keycontact/common/error.hpp"
#include "keycontact/transfer/ransac.hpp"

namespace keycontact {

double keypoint_frame_objective(const Pose& frame, const Pose& ref_kf, std::span<const Vec3> ref_points,
                                std::span<const Vec3> deformed, std::span<const double> weights) {
  const Pose fi = frame.inverse(), ri = ref_kf.inverse();
  double s = 0;
  for (std::size_t i = 0; i < ref_points.size(); ++i)
    s += (weights.empty() ? 1.0 : weights[i]) * (fi * deformed[i] - ri * ref_points[i]).squaredNorm();
  return s;
}

KeypointFrame solve_keypoint_frame(const KeypointFrame& ref_kf, std::span<const Vec3> ref_points,
                                   std::span<const Vec3> deformed, std::span<const double> weights) {
  if (ref_points.size() != deformed.size()) fail(ErrorKind::invalid_argument, "solve_keypoint_frame: point count mismatch");
  const Pose ri = ref_kf.pose().inverse();
  std::vector<Vec3> local;
  local.reserve(ref_points.size());
  for (const auto& p : ref_points) local.push_back(ri * p);
  const Pose f = fit_rigid(local, deformed, weights);
  return KeypointFrame::from_pose(f, ref_kf.owner, ref_kf.role);
}

}  // namespace keycontact
