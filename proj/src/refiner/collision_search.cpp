#include "keycontact/refiner/collision_search.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "keycontact/common/error.hpp"
#include "keycontact/common/seed.hpp"

namespace keycontact {

void CollisionSearchConfig::validate() const {
  if (!(radius_t > 0.0)) fail(ErrorKind::invalid_argument, "collision search: radius_t must be > 0");
  if (!(radius_r > 0.0)) fail(ErrorKind::invalid_argument, "collision search: radius_r must be > 0");
  if (samples < 1) fail(ErrorKind::invalid_argument, "collision search: samples must be >= 1");
  if (rounds < 1) fail(ErrorKind::invalid_argument, "collision search: rounds must be >= 1");
  if (!(penetration_tolerance >= 0.0)) fail(ErrorKind::invalid_argument, "collision search: penetration_tolerance must be >= 0");
}

Pose sample_neighbor(const Pose& center, double radius_t, double radius_r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec3 dt = radius_t * std::cbrt(unit(rng)) * sample_unit_vector(rng);
  const Vec3 axis = sample_unit_vector(rng);
  const double angle = radius_r * std::cbrt(unit(rng));
  const Quat dq(Eigen::AngleAxisd(angle, axis));
  return Pose(dq * center.rotation(), center.translation() + dt);
}

namespace {

constexpr double kTie = 1e-9;
constexpr double kPenalty = 2.0;

struct Candidate {
  Pose pose;
  double penetration;
  double distance;
};

bool better_penetration(const Candidate& a, const Candidate& b) {
  if (a.penetration < b.penetration - kTie) return true;
  if (a.penetration > b.penetration + kTie) return false;
  return a.distance < b.distance;
}

}  // namespace

RefinedTrajectory refine_grounded_trajectory(const std::vector<Pose>& slave_poses, const ShapeModel& master,
                                             const Pose& master_pose, const ShapeModel& slave,
                                             const CollisionSearchConfig& cfg) {
  cfg.validate();
  if (slave_poses.empty()) fail(ErrorKind::invalid_argument, "refine_grounded_trajectory: empty trajectory");
  const double w = cfg.rotation_weight();
  RefinedTrajectory out;
  out.poses.reserve(slave_poses.size());
  for (std::size_t t = 0; t < slave_poses.size(); ++t) {
    const Pose& orig = slave_poses[t];
    Candidate best{orig, penetration_depth(slave, orig, master, master_pose), 0.0};
    out.original_penetration.push_back(best.penetration);
    if (best.penetration > 0.0) {
      std::mt19937_64 rng(derive_seed(cfg.seed, {t}));
      double rt = cfg.radius_t, rr = cfg.radius_r;
      Pose center = orig;
      for (int round = 0; round < cfg.rounds; ++round) {
        for (int k = 0; k < cfg.samples; ++k) {
          const Pose p = sample_neighbor(center, rt, rr, rng);
          const Candidate c{p, penetration_depth(slave, p, master, master_pose), pose_distance(p, orig, w)};
          if (better_penetration(c, best)) best = c;
        }
        center = best.pose;
        rt *= 0.5;
        rr *= 0.5;
      }
    }
    out.poses.push_back(best.pose);
    out.refined_penetration.push_back(best.penetration);
  }
  double vmin = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < out.poses.size(); ++t) {
    const double v = union_aabb_volume(slave, out.poses[t], master, master_pose);
    if (v < vmin) {
      vmin = v;
      out.contact_index = t;
    }
  }
  return out;
}

AlignedKeypoints refine_transferred_keypoints(const Pose& master_kf, const Pose& slave_kf, const ShapeModel& master,
                                              const ShapeModel& slave, const CollisionSearchConfig& cfg) {
  cfg.validate();
  const double w = cfg.rotation_weight();
  const Pose kf_inv = slave_kf.inverse();
  auto evaluate = [&](const Pose& x) {
    return Candidate{x, penetration_depth(slave, x, master, Pose::identity()), pose_distance(x * slave_kf, master_kf, w)};
  };
  // Feasible beats infeasible; among feasible the nearer frame wins; among
  // infeasible the shallower penetration wins.
  auto better = [&](const Candidate& a, const Candidate& b) {
    const bool fa = a.penetration <= cfg.penetration_tolerance, fb = b.penetration <= cfg.penetration_tolerance;
    if (fa != fb) return fa;
    if (fa) return a.distance < b.distance;
    return better_penetration(a, b);
  };

  // Rounds are centred on the best penalized candidate so the search can
  // slide toward thin free regions; the answer is the nearest free pose seen.
  auto merit = [&](const Candidate& c) {
    return c.distance + kPenalty * std::max(0.0, c.penetration - cfg.penetration_tolerance);
  };
  Candidate best = evaluate(master_kf * kf_inv);
  if (best.penetration > cfg.penetration_tolerance) {
    std::mt19937_64 rng(derive_seed(cfg.seed, {0x6b66ULL}));
    Candidate center = best;
    double rt = cfg.radius_t, rr = cfg.radius_r;
    for (int round = 0; round < cfg.rounds; ++round) {
      const Pose c0 = center.pose;
      for (int k = 0; k < cfg.samples; ++k) {
        const Candidate c = evaluate(sample_neighbor(c0, rt, rr, rng));
        if (better(c, best)) best = c;
        if (merit(c) < merit(center)) center = c;
      }
      rt *= 0.5;
      rr *= 0.5;
    }
  }
  if (best.penetration > cfg.penetration_tolerance) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "refine_transferred_keypoints: no collision-free configuration found (best penetration %.6g m, "
                  "frame distance %.6g)",
                  best.penetration, best.distance);
    fail(ErrorKind::not_found, buf);
  }
  AlignedKeypoints out;
  out.slave_pose = best.pose;
  out.slave_kf = best.pose * slave_kf;
  out.master_kf = out.slave_kf;
  out.frame_distance = best.distance;
  out.penetration = best.penetration;
  return out;
}

}  // namespace keycontact
