#include "keycontact/geometry/pose.hpp"

#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

Pose::Pose(const Quat& rotation, const Vec3& translation)
    : rotation_(rotation.normalized()), translation_(translation) {}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(Quat(rotation).normalized()), translation_(translation) {}

Pose Pose::from_matrix(const Mat4& m) {
  return {Mat3(m.topLeftCorner<3, 3>()), Vec3(m.topRightCorner<3, 1>())};
}

Pose Pose::from_axes(const Vec3& x, const Vec3& y, const Vec3& z, const Vec3& origin) {
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return {r, origin};
}

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Pose Pose::inverse() const {
  const Quat inv = rotation_.conjugate();
  return {inv, -(inv * translation_)};
}

bool Pose::is_finite() const {
  return rotation_.coeffs().allFinite() && translation_.allFinite();
}

Pose compose(const Pose& a, const Pose& b) {
  return {a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation()};
}

Vec3 rotation_log(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  const Vec3 v = q.vec();
  const double s = v.norm();
  if (s < 1e-12) return 2.0 * v;
  const double angle = 2.0 * std::atan2(s, q.w());
  return v * (angle / s);
}

Quat rotation_exp(const Vec3& omega) {
  const double angle = omega.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * omega.x(), 0.5 * omega.y(), 0.5 * omega.z());
    return q.normalized();
  }
  return Quat(Eigen::AngleAxisd(angle, omega / angle));
}

double angular_distance(const Quat& a, const Quat& b) {
  const Quat r = a.normalized().conjugate() * b.normalized();
  return 2.0 * std::atan2(r.vec().norm(), std::abs(r.w()));
}

double rotation_angle(const Pose& p) { return angular_distance(p.rotation(), Quat::Identity()); }

double pose_distance(const Pose& a, const Pose& b, double rotation_weight) {
  return (a.translation() - b.translation()).norm() +
         rotation_weight * angular_distance(a.rotation(), b.rotation());
}

Vec3 any_orthogonal(const Vec3& n) {
  const Vec3 u = n.normalized();
  const Vec3 helper = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (helper - helper.dot(u) * u).normalized();
}

Quat rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 a = from.normalized();
  const Vec3 b = to.normalized();
  const double c = a.dot(b);
  if (c < -1.0 + 1e-12) {
    return Quat(Eigen::AngleAxisd(M_PI, any_orthogonal(a)));
  }
  return Quat::FromTwoVectors(a, b);
}

Vec3 sample_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Vec3 v(normal(rng), normal(rng), normal(rng));
    const double n = v.norm();
    if (n > 1e-9) return v / n;
  }
}

Pose sample_pose_noise(std::mt19937_64& rng, double sigma_t, double sigma_r) {
  if (sigma_t < 0.0 || sigma_r < 0.0) fail(ErrorKind::invalid_argument, "noise sigma must be >= 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  // Draw order is fixed so a given seed always yields the same perturbation.
  Vec3 t(normal(rng), normal(rng), normal(rng));
  const Vec3 axis = sample_unit_vector(rng);
  const double angle = normal(rng) * sigma_r;
  return {rotation_exp(axis * angle), t * sigma_t};
}

}  // namespace keycontact
