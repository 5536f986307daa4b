#pragma once

// Randomized inputs shared by unit and acceptance tests.

#include <random>
#include <vector>

#include "keycontact/geometry/point_cloud.hpp"
#include "keycontact/geometry/pose.hpp"

namespace keycontact::testing {

struct KeypointScene {
  PointCloud slave_local;
  PointCloud slave_world;  // at contact
  PointCloud master_world;
  std::vector<Pose> slave_poses;
  std::vector<double> timestamps;
  std::size_t contact = 0;
};

// Slave object approaching a master cloud; at most 500 points in total.
inline KeypointScene random_keypoint_scene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ns(150, 300), nm(20, 200), frames(6, 14), face(0, 5);
  KeypointScene s;
  const int n_s = ns(rng), n_m = nm(rng);
  const Vec3 half(0.02 + 0.03 * std::abs(u(rng)), 0.02 + 0.03 * std::abs(u(rng)), 0.02 + 0.03 * std::abs(u(rng)));
  // Box surface samples, roughly face-down so a near-perpendicular x exists.
  for (int i = 0; i < n_s; ++i) {
    Vec3 q(u(rng), u(rng), u(rng));
    const int f = face(rng);
    q[f / 2] = f % 2 ? 1.0 : -1.0;
    s.slave_local.points.push_back(half.cwiseProduct(q));
  }
  for (int i = 0; i < n_m; ++i)
    s.master_world.points.push_back(Vec3(0.1 * u(rng), 0.1 * u(rng), -0.02 - 0.03 * std::abs(u(rng))));

  const int k = frames(rng);
  const Vec3 dir = Vec3(0.1 * u(rng), 0.1 * u(rng), -1.0).normalized();
  const Vec3 goal(0.05 * u(rng), 0.05 * u(rng), half.maxCoeff() * 1.8);
  const Vec3 spin = 0.5 * Vec3(u(rng), u(rng), u(rng));
  const Quat base = rotation_exp(0.08 * Vec3(u(rng), u(rng), u(rng)));
  for (int t = 0; t < k; ++t) {
    const double back = 0.01 * (k - 1 - t);
    s.slave_poses.emplace_back(rotation_exp(spin * back) * base, goal - back * dir);
    s.timestamps.push_back(0.05 * t);
  }
  s.contact = static_cast<std::size_t>(k - 1);
  s.slave_world = s.slave_local.transformed(s.slave_poses.back());
  return s;
}

inline std::vector<Vec3> random_walk_path(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 0.01);
  std::vector<Vec3> p{Vec3::Zero()};
  Vec3 vel(0.01, 0, 0);
  for (int i = 1; i < n; ++i) {
    vel += Vec3(g(rng), g(rng), g(rng)) * 0.5;
    p.push_back(p.back() + vel);
  }
  return p;
}

}  // namespace keycontact::testing
