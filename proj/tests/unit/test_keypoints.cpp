#include <cmath>
#include <random>

#include "doctest.h"
#include "keycontact/common/error.hpp"
#include "keycontact/keypoints/keypoint_extraction.hpp"
#include "keycontact/keypoints/serialization.hpp"
#include "keycontact/keypoints/squish_e.hpp"
#include "keycontact/keypoints/waypoints.hpp"
#include "oracles/keypoints.hpp"
#include "scenarios.hpp"
#include "test_support.hpp"

using namespace keycontact;
using keycontact::testing::pose_gap;
using keycontact::testing::random_pose;

namespace {

std::vector<Vec3> cube_surface_grid(int n) {
  std::vector<Vec3> pts;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        if (i == 0 || j == 0 || k == 0 || i == n || j == n || k == n)
          pts.emplace_back(-0.5 + double(i) / n, -0.5 + double(j) / n, -0.5 + double(k) / n);
  return pts;
}

std::vector<Eigen::Matrix4d> matrices(const std::vector<Pose>& poses) {
  std::vector<Eigen::Matrix4d> m;
  for (const auto& p : poses) m.push_back(p.matrix());
  return m;
}

WaypointPath path_from(const std::vector<Vec3>& pts) {
  WaypointPath p;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    p.waypoints.push_back(Pose::from_translation(pts[i]));
    p.timestamps.push_back(0.1 * i);
  }
  return p;
}

std::vector<Vec3> positions(const WaypointPath& p) {
  std::vector<Vec3> out;
  for (auto& w : p.waypoints) out.push_back(w.translation());
  return out;
}

}  // namespace

TEST_CASE("slave keypoint of a cube descending onto a plane") {
  PointCloud cube(cube_surface_grid(6));
  std::vector<Vec3> plane;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) plane.emplace_back(0.2 * i, 0.2 * j, 0.0);
  std::vector<Pose> poses;
  std::vector<double> ts;
  for (int t = 0; t < 10; ++t) {
    poses.push_back(Pose::from_translation(Vec3(0.03, -0.02, 0.51 + 0.1 * (9 - t))));
    ts.push_back(0.05 * t);
  }
  auto kf = extract_slave_keypoint(cube.transformed(poses.back()), PointCloud(plane), poses, ts, 9);
  CHECK(kf.origin.z() == doctest::Approx(-0.5));
  CHECK((kf.z_axis - Vec3(0, 0, -1)).norm() < 1e-12);
  CHECK(std::abs(kf.x_axis.dot(kf.z_axis)) < 1e-9);
  kf.validate();

  auto oracle = oracle::slave_keypoint(cube.transformed(poses.back()).points, plane, matrices(poses),
                                       window_start(ts, 9, 0.2), 9, 0.05, 0.25);
  CHECK(cube.points[oracle.origin_index] == kf.origin);
}

TEST_CASE("rigid translation gives the translation direction") {
  PointCloud obj({Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0, 0.05, 0), Vec3(0.02, 0.02, 0.03)});
  const Vec3 dir = Vec3(1, -2, 0.5).normalized();
  std::vector<Pose> poses;
  std::vector<double> ts;
  for (int t = 0; t < 6; ++t) {
    poses.push_back(Pose(Quat(Eigen::AngleAxisd(0.7, Vec3(1, 1, 0).normalized())), dir * 0.01 * t));
    ts.push_back(0.1 * t);
  }
  PointCloud master({poses.back() * Vec3(0.02, 0.02, 0.03) + 0.001 * dir});
  auto kf = extract_slave_keypoint(obj.transformed(poses.back()), master, poses, ts, 5);
  CHECK((poses.back().rotate(kf.z_axis) - dir).norm() < 1e-12);
  CHECK((kf.origin - Vec3(0.02, 0.02, 0.03)).norm() < 1e-12);
}

TEST_CASE("symmetric cloud picks a maximizer deterministically") {
  std::vector<Vec3> sphere;
  for (int i = 0; i < 24; ++i)
    for (int j = 1; j < 12; ++j) {
      double th = 2 * M_PI * i / 24, ph = M_PI * j / 12;
      sphere.emplace_back(std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th), std::cos(ph));
    }
  sphere.emplace_back(0, 0, -1);
  std::vector<Pose> poses{Pose::from_translation(Vec3(0, 0, 1.5)), Pose::from_translation(Vec3(0, 0, 1.05))};
  std::vector<double> ts{0.0, 0.2};
  PointCloud master({Vec3(0, 0, 0)});
  PointCloud world = PointCloud(sphere).transformed(poses.back());
  auto kf = extract_slave_keypoint(world, master, poses, ts, 1);
  auto again = extract_slave_keypoint(world, master, poses, ts, 1);
  CHECK(kf.x_axis == again.x_axis);
  // Enumerate all points within the band that reach the maximal distance.
  Vec3 c(0, 0, -1);
  double far = 0, band = 0;
  for (double b : {0.05, 0.25}) {
    for (auto& p : sphere)
      if ((p - c).norm() > 1e-9 && std::abs((p - c).normalized().z()) <= b) far = std::max(far, (p - c).norm());
    band = b;
    if (far > 0) break;
  }
  REQUIRE(far > 0);
  int maximizers = 0;
  bool among = false;
  for (auto& p : sphere) {
    Vec3 v = p - c;
    if (v.norm() > 1e-9 && std::abs(v.normalized().z()) <= band && std::abs(v.norm() - far) < 1e-12) {
      ++maximizers;
      Vec3 proj = Vec3(v.x(), v.y(), 0).normalized();
      among = among || (proj - kf.x_axis).norm() < 1e-9;
    }
  }
  CHECK(maximizers > 1);
  CHECK(among);
}

TEST_CASE("slave keypoint matches the exhaustive oracle on random scenes") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = keycontact::testing::random_keypoint_scene(rng);
    auto kf = extract_slave_keypoint(s.slave_world, s.master_world, s.slave_poses, s.timestamps, s.contact);
    auto o = oracle::slave_keypoint(s.slave_world.points, s.master_world.points, matrices(s.slave_poses),
                                    window_start(s.timestamps, s.contact, 0.2), s.contact, 0.05, 0.25);
    const Pose& pc = s.slave_poses[s.contact];
    CHECK((pc * kf.origin - s.slave_world.points[o.origin_index]).norm() < 1e-12);
    CHECK((pc.rotate(kf.z_axis) - o.z).norm() < 1e-6);
    CHECK((pc.rotate(kf.x_axis) - o.x).norm() < 1e-6);
    CHECK((pc.rotate(kf.y_axis) - o.y).norm() < 1e-6);
    CHECK(std::abs(kf.x_axis.dot(kf.z_axis)) < 1e-6);
    kf.validate();
  }
}

TEST_CASE("keypoints are unchanged by a change of camera frame") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = keycontact::testing::random_keypoint_scene(rng);
    Pose cam = random_pose(rng, 2.0);
    std::vector<Pose> moved;
    for (auto& p : s.slave_poses) moved.push_back(cam * p);
    auto a = extract_slave_keypoint(s.slave_world, s.master_world, s.slave_poses, s.timestamps, s.contact);
    auto b = extract_slave_keypoint(s.slave_world.transformed(cam), s.master_world.transformed(cam), moved,
                                    s.timestamps, s.contact);
    CHECK(pose_gap(a.pose(), b.pose()) < 1e-9);
    Pose master_pose = Pose::from_translation(Vec3(0.01, 0.02, -0.03));
    auto ma = extract_master_keypoint(s.master_world, a, s.slave_poses[s.contact], master_pose);
    auto mb = extract_master_keypoint(s.master_world.transformed(cam), b, moved[s.contact], cam * master_pose);
    CHECK(pose_gap(ma.pose(), mb.pose()) < 1e-9);
  }
}

TEST_CASE("zero pre-contact motion is degenerate") {
  PointCloud obj({Vec3(0, 0, 0), Vec3(0.1, 0, 0)});
  std::vector<Pose> poses(3, Pose::from_translation(Vec3(0, 0, 0.1)));
  std::vector<double> ts{0, 0.1, 0.2};
  CHECK_THROWS_AS(extract_slave_keypoint(obj.transformed(poses[2]), PointCloud({Vec3(0, 0, 0)}), poses, ts, 2), Error);
  CHECK_THROWS_AS(window_start(ts, 0, 0.2), Error);
}

TEST_CASE("master keypoint") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec3> master;
    for (int i = 0; i < 200; ++i) master.emplace_back(u(rng), u(rng), u(rng));
    KeypointFrame skf = KeypointFrame::from_pose(random_pose(rng, 0.05), "peg", KeypointRole::slave);
    Pose sp = random_pose(rng, 0.1), mp = random_pose(rng, 0.1);
    auto mkf = extract_master_keypoint(PointCloud(master), skf, sp, mp, "hole");
    Vec3 cw = sp * skf.origin;
    std::size_t best = 0;
    for (std::size_t i = 1; i < master.size(); ++i)
      if ((master[i] - cw).norm() < (master[best] - cw).norm()) best = i;
    CHECK((mp * mkf.origin - master[best]).norm() < 1e-12);
    CHECK((mp.rotate(mkf.x_axis) - sp.rotate(skf.x_axis)).norm() < 1e-9);
    CHECK((mp.rotate(mkf.z_axis) - sp.rotate(skf.z_axis)).norm() < 1e-9);
    CHECK(mkf.role == KeypointRole::master);
  }
  // Contact point present in the cloud.
  KeypointFrame skf = KeypointFrame::from_pose(Pose::from_translation(Vec3(0.01, 0, 0)), "s", KeypointRole::slave);
  auto mkf = extract_master_keypoint(PointCloud({Vec3(0, 0, 1), Vec3(0.01, 0, 0)}), skf, Pose(), Pose());
  CHECK(mkf.origin == Vec3(0.01, 0, 0));
}

TEST_CASE("relative waypoint path") {
  std::mt19937_64 rng(34);
  KeypointFrame skf = KeypointFrame::from_pose(random_pose(rng, 0.05), "s", KeypointRole::slave);
  KeypointFrame mkf = KeypointFrame::from_pose(random_pose(rng, 0.05), "m", KeypointRole::master);
  std::vector<double> ts;
  std::vector<Pose> still_s, still_m;
  Pose s0 = random_pose(rng), m0 = random_pose(rng);
  for (int t = 0; t < 5; ++t) {
    ts.push_back(t);
    still_s.push_back(s0);
    still_m.push_back(m0);
  }
  auto p = relative_waypoint_path(skf, mkf, still_s, still_m, ts);
  for (auto& w : p.waypoints) CHECK(pose_gap(w, p.waypoints[0]) == 0.0);

  // Helix of the slave keypoint about a fixed master keypoint.
  std::vector<Pose> helix_s, helix_m;
  std::vector<double> ht;
  const Pose master_world = random_pose(rng);
  const double r = 0.05, pitch = 0.01;
  for (int t = 0; t < 50; ++t) {
    double th = 0.2 * t;
    Pose in_master(Quat(Eigen::AngleAxisd(th, Vec3::UnitZ())), Vec3(r * std::cos(th), r * std::sin(th), pitch * th));
    helix_m.push_back(master_world * mkf.pose().inverse());
    helix_s.push_back(master_world * in_master * skf.pose().inverse());
    ht.push_back(0.1 * t);
  }
  auto hp = relative_waypoint_path(skf, mkf, helix_s, helix_m, ht);
  for (int t = 0; t < 50; ++t) {
    double th = 0.2 * t;
    CHECK((hp.waypoints[t].translation() - Vec3(r * std::cos(th), r * std::sin(th), pitch * th)).norm() < 1e-9);
    CHECK(angular_distance(hp.waypoints[t].rotation(), Quat(Eigen::AngleAxisd(th, Vec3::UnitZ()))) < 1e-9);
  }

  // Common world motion leaves the path unchanged.
  Pose g = random_pose(rng, 3.0);
  std::vector<Pose> gs, gm;
  for (std::size_t i = 0; i < helix_s.size(); ++i) {
    gs.push_back(g * helix_s[i]);
    gm.push_back(g * helix_m[i]);
  }
  auto gp = relative_waypoint_path(skf, mkf, gs, gm, ht);
  for (std::size_t i = 0; i < gp.size(); ++i) CHECK(pose_gap(gp.waypoints[i], hp.waypoints[i]) < 1e-9);
}

TEST_CASE("squish-e compression") {
  std::vector<Vec3> line;
  for (int i = 0; i < 30; ++i) line.emplace_back(0.01 * i, 0.02 * i, -0.005 * i);
  for (double mu : {1e-9, 1e-4, 0.1}) CHECK(compress_squishe(path_from(line), SquishMode::error_bound(mu)).size() == 2);

  std::vector<Vec3> corner;
  for (int i = 0; i <= 10; ++i) corner.emplace_back(0.01 * i, 0, 0);
  for (int i = 1; i <= 10; ++i) corner.emplace_back(0.1, 0.01 * i, 0);
  auto idx = squishe_indices(path_from(corner), SquishMode::error_bound(0.01));
  CHECK(idx == std::vector<std::size_t>{0, 10, 20});
  CHECK(oracle::max_dropped_sed(corner, path_from(corner).timestamps, idx) <= 0.01);

  auto same = compress_squishe(path_from(corner), SquishMode::ratio(1.0));
  CHECK(positions(same) == corner);
  auto half = squishe_indices(path_from(corner), SquishMode::ratio(0.5));
  CHECK(half.size() == 11);
  CHECK(half.front() == 0);
  CHECK(half.back() == 20);
  CHECK_THROWS_AS(squishe_indices(path_from(corner), SquishMode::ratio(0.0)), Error);
  CHECK_THROWS_AS(squishe_indices(path_from(corner), SquishMode::error_bound(0.0)), Error);
}

TEST_CASE("squish-e error bound holds on random paths") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    auto pts = keycontact::testing::random_walk_path(rng, 20 + trial);
    auto path = path_from(pts);
    for (double mu : {0.001, 0.005, 0.02}) {
      auto idx = squishe_indices(path, SquishMode::error_bound(mu));
      CHECK(idx.front() == 0);
      CHECK(idx.back() == pts.size() - 1);
      CHECK(oracle::max_dropped_sed(pts, path.timestamps, idx) <= mu);
    }
  }
}

TEST_CASE("keypoint serialization round trip") {
  std::mt19937_64 rng(36);
  auto kf = KeypointFrame::from_pose(random_pose(rng), "peg", KeypointRole::slave);
  auto back = keypoint_frame_from_json(Json::parse(keypoint_frame_to_json(kf).dump()));
  CHECK(back.origin == kf.origin);
  CHECK(back.x_axis == kf.x_axis);
  CHECK(back.owner == "peg");
  CHECK(keypoint_frame_to_json(back).dump() == keypoint_frame_to_json(kf).dump());

  WaypointPath p;
  for (int i = 0; i < 4; ++i) {
    p.waypoints.push_back(random_pose(rng));
    p.timestamps.push_back(i * 0.5);
  }
  auto pj = waypoint_path_to_json(p);
  CHECK(waypoint_path_to_json(waypoint_path_from_json(Json::parse(pj.dump()))).dump() == pj.dump());

  auto bad = keypoint_frame_to_json(kf);
  bad.erase("schema_version");
  CHECK_THROWS_AS(keypoint_frame_from_json(bad), Error);
  bad = keypoint_frame_to_json(kf);
  bad["x_axis"] = Json::array({1, 1, 0});
  CHECK_THROWS_AS(keypoint_frame_from_json(bad), Error);
}

TEST_CASE("keypoint registry keeps the first demonstration") {
  KeypointRegistry reg;
  KeypointRegistry::Entry first{KeypointFrame::from_pose(Pose(), "m", KeypointRole::master),
                                KeypointFrame::from_pose(Pose::from_translation(Vec3(1, 0, 0)), "s", KeypointRole::slave)};
  KeypointRegistry::Entry second = first;
  second.slave.origin = Vec3(2, 0, 0);
  reg.get_or_insert("insert", first);
  CHECK(reg.get_or_insert("insert", second).slave.origin == Vec3(1, 0, 0));
  CHECK(reg.find("other") == nullptr);
}
