#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <random>

namespace keycontact {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;

/// Rigid SE(3) transform. Applying a Pose maps points from its local frame
/// into the parent frame: p_parent = R * p_local + t.
class Pose {
 public:
  Pose() : rotation_(Quat::Identity()), translation_(Vec3::Zero()) {}
  Pose(const Quat& rotation, const Vec3& translation);
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {Quat::Identity(), t}; }
  static Pose from_rotation(const Quat& q) { return {q, Vec3::Zero()}; }
  static Pose from_matrix(const Mat4& m);
  /// Frame whose columns are the given axes. The axes must already be
  /// orthonormal and right-handed.
  static Pose from_axes(const Vec3& x, const Vec3& y, const Vec3& z, const Vec3& origin);

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  Mat3 rotation_matrix() const { return rotation_.toRotationMatrix(); }
  Mat4 matrix() const;

  Vec3 x_axis() const { return rotation_ * Vec3::UnitX(); }
  Vec3 y_axis() const { return rotation_ * Vec3::UnitY(); }
  Vec3 z_axis() const { return rotation_ * Vec3::UnitZ(); }

  Pose inverse() const;
  Vec3 transform_point(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 rotate(const Vec3& v) const { return rotation_ * v; }
  Vec3 operator*(const Vec3& p) const { return transform_point(p); }

  bool is_finite() const;

 private:
  Quat rotation_;
  Vec3 translation_;
};

/// compose(a, b) applies b first, then a. The result quaternion is
/// renormalized.
Pose compose(const Pose& a, const Pose& b);
inline Pose operator*(const Pose& a, const Pose& b) { return compose(a, b); }
inline Pose invert(const Pose& p) { return p.inverse(); }

/// Rotation vector (axis * angle, angle in [0, pi]).
Vec3 rotation_log(const Quat& q);
Quat rotation_exp(const Vec3& omega);

/// Geodesic angle between two rotations, in [0, pi].
double angular_distance(const Quat& a, const Quat& b);
double rotation_angle(const Pose& p);
/// Translation distance plus weighted rotation geodesic.
double pose_distance(const Pose& a, const Pose& b, double rotation_weight);

/// Any unit vector orthogonal to n (n must be non-zero).
Vec3 any_orthogonal(const Vec3& n);

/// Minimal rotation taking unit vector `from` onto unit vector `to`.
Quat rotation_between(const Vec3& from, const Vec3& to);

/// Isotropic pose noise: translation ~ N(0, sigma_t^2 I); rotation is an
/// axis-angle perturbation with uniformly distributed axis and angle
/// ~ N(0, sigma_r^2).
Pose sample_pose_noise(std::mt19937_64& rng, double sigma_t, double sigma_r);
Vec3 sample_unit_vector(std::mt19937_64& rng);

}  // namespace keycontact
