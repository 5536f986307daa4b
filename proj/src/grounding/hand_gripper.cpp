#include "keycontact/grounding/hand_gripper.hpp"

#include <Eigen/SVD>

#include "keycontact/common/error.hpp"

namespace keycontact {

Pose gripper_from_hand(const HandLandmarks& hand) {
  hand.validate();
  std::vector<Vec3> pts = hand.thumb_points;
  pts.insert(pts.end(), hand.index_points.begin(), hand.index_points.end());

  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::MatrixXd centered(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) centered.row(static_cast<Eigen::Index>(i)) = (pts[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (sv(1) <= 1e-9 * std::max(1.0, sv(0))) fail(ErrorKind::degenerate, "hand landmarks are collinear; plane undefined");

  const Vec3 origin = 0.5 * (hand.thumb_tip() + hand.index_tip());
  Vec3 x = svd.matrixV().col(2).normalized();
  const Vec3 ref = (hand.thumb_tip() - hand.thumb_points.front()).cross(hand.index_tip() - origin);
  if (x.dot(ref) < 0.0) x = -x;

  Vec3 y = hand.index_tip() - origin;
  y -= y.dot(x) * x;
  if (y.norm() < 1e-9) fail(ErrorKind::degenerate, "index tip lies on the plane normal through the grasp point");
  y.normalize();
  const Vec3 z = x.cross(y);
  return Pose::from_axes(x, y, z, origin);
}

}  // namespace keycontact
