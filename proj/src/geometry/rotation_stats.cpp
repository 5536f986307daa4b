#include "keycontact/geometry/rotation_stats.hpp"

#include <Eigen/Eigenvalues>

#include "keycontact/common/error.hpp"

namespace keycontact {

Quat average_quaternions(std::span<const Quat> rotations, std::span<const double> weights) {
  if (rotations.empty()) fail(ErrorKind::invalid_argument, "average_quaternions: no rotations");
  if (!weights.empty() && weights.size() != rotations.size()) {
    fail(ErrorKind::invalid_argument, "average_quaternions: weight count mismatch");
  }
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (w < 0.0) fail(ErrorKind::invalid_argument, "average_quaternions: negative weight");
    const Eigen::Vector4d q = rotations[i].normalized().coeffs();
    acc += w * q * q.transpose();
    total += w;
  }
  if (total <= 0.0) fail(ErrorKind::invalid_argument, "average_quaternions: weights sum to zero");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(acc / total);
  Eigen::Vector4d v = es.eigenvectors().col(3);  // eigenvalues ascend
  Quat q(v[3], v[0], v[1], v[2]);                // coeffs() order is x, y, z, w
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q.normalized();
}

}  // namespace keycontact
