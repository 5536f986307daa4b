#include "keycontact/constraints/grasp_region.hpp"

#include <cmath>
#include <random>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/rotation_stats.hpp"

namespace keycontact {

void GraspRegion::validate() const {
  if (!((position_max.array() >= position_min.array()).all())) {
    fail(ErrorKind::invalid_argument, "grasp region position bounds need min <= max");
  }
  if (!((angular_limit.array() >= 0.0).all() && (angular_limit.array() <= M_PI).all())) {
    fail(ErrorKind::invalid_argument, "grasp region angular limits must lie in [0, pi]");
  }
  anchor.validate();
}

Vec3 GraspRegion::deviation(const Quat& rotation) const {
  return rotation_log(mean_rotation.conjugate() * rotation);
}

bool GraspRegion::contains(const KeypointFrame& kf, double tolerance) const {
  const Vec3 lo = position_min - Vec3::Constant(tolerance);
  const Vec3 hi = position_max + Vec3::Constant(tolerance);
  if (!((kf.origin.array() >= lo.array()).all() && (kf.origin.array() <= hi.array()).all())) return false;
  const Vec3 dev = deviation(kf.pose().rotation()).cwiseAbs();
  return (dev.array() <= angular_limit.array() + tolerance).all();
}

GraspRegion build_grasp_region(const std::vector<KeypointFrame>& group, const Obb& anchor, const std::string& label) {
  if (group.empty()) fail(ErrorKind::invalid_argument, "cannot build a grasp region from an empty group");
  GraspRegion r;
  r.anchor = anchor;
  r.group_label = label;
  r.owner = group.front().owner;
  r.position_min = r.position_max = group.front().origin;
  std::vector<Quat> rotations;
  for (const auto& kf : group) {
    r.position_min = r.position_min.cwiseMin(kf.origin);
    r.position_max = r.position_max.cwiseMax(kf.origin);
    rotations.push_back(kf.pose().rotation());
  }
  r.mean_rotation = average_quaternions(rotations);
  for (const Quat& q : rotations) r.angular_limit = r.angular_limit.cwiseMax(r.deviation(q).cwiseAbs());
  r.angular_limit = r.angular_limit.cwiseMin(Vec3::Constant(M_PI));
  r.validate();
  return r;
}

std::vector<std::vector<std::size_t>> group_grasps_fallback(const std::vector<KeypointFrame>& frames, double pos_eps,
                                                            double ang_eps, std::size_t min_points) {
  if (!(pos_eps > 0.0) || !(ang_eps > 0.0)) fail(ErrorKind::invalid_argument, "grouping radii must be positive");
  const std::size_t n = frames.size();
  std::vector<Quat> rot;
  for (const auto& f : frames) rot.push_back(f.pose().rotation());
  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::max((frames[i].origin - frames[j].origin).norm() / pos_eps,
                                angular_distance(rot[i], rot[j]) / ang_eps);
      if (d <= 1.0) out.push_back(j);
    }
    return out;
  };

  constexpr int kUnset = -1;
  std::vector<int> label(n, kUnset);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnset) continue;
    auto seeds = neighbours(i);
    label[i] = next;
    if (seeds.size() >= min_points) {
      for (std::size_t k = 0; k < seeds.size(); ++k) {
        const std::size_t j = seeds[k];
        if (label[j] != kUnset && j != i) continue;
        label[j] = next;
        auto more = neighbours(j);
        if (more.size() >= min_points) {
          for (std::size_t m : more)
            if (label[m] == kUnset) seeds.push_back(m);
        }
      }
    }
    ++next;
  }
  std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(next));
  for (std::size_t i = 0; i < n; ++i) groups[static_cast<std::size_t>(label[i])].push_back(i);
  return groups;
}

std::vector<KeypointFrame> sample_grasp_candidates(const GraspRegion& region, std::size_t n, std::uint64_t seed) {
  region.validate();
  if (n < 1) fail(ErrorKind::invalid_argument, "need at least one grasp candidate");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<KeypointFrame> out;
  out.reserve(n);
  while (out.size() < n) {
    Vec3 pos, dev;
    for (int a = 0; a < 3; ++a) {
      pos[a] = region.position_min[a] + unit(rng) * (region.position_max[a] - region.position_min[a]);
      dev[a] = (2.0 * unit(rng) - 1.0) * region.angular_limit[a];
    }
    // Rotation vectors beyond pi wrap around; redraw those.
    if (dev.norm() >= M_PI - 1e-9) continue;
    out.push_back(KeypointFrame::from_pose(Pose(region.mean_rotation * rotation_exp(dev), pos), region.owner,
                                           KeypointRole::master));
  }
  return out;
}

Pose pregrasp_pose(const Pose& grasp, double approach_distance) {
  return grasp * Pose::from_translation(Vec3(0, 0, -approach_distance));
}

void SemanticConstraint::validate() const {
  if (label.empty()) fail(ErrorKind::invalid_argument, "semantic constraint label must be non-empty");
}

const char* to_string(ConstraintSource s) {
  return s == ConstraintSource::external_reasoner ? "external_reasoner" : "fallback_grouping";
}

ConstraintSource constraint_source_from_string(const std::string& s) {
  if (s == "external_reasoner") return ConstraintSource::external_reasoner;
  if (s == "fallback_grouping") return ConstraintSource::fallback_grouping;
  fail(ErrorKind::schema, "unknown constraint source '" + s + "'");
}

}  // namespace keycontact
