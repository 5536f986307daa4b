// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Thresholds come from
// $KEYCONTACT_FIXTURES/acceptance.json.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "keycontact/bank/pipelines.hpp"
#include "keycontact/bank/records.hpp"
#include "keycontact/common/json_io.hpp"
#include "keycontact/geometry/mesh.hpp"
#include "keycontact/geometry/shape_model.hpp"
#include "keycontact/grounding/segmentation.hpp"
#include "keycontact/keypoints/keypoint_extraction.hpp"
#include "keycontact/keypoints/squish_e.hpp"
#include "keycontact/refiner/collision_search.hpp"
#include "keycontact/refiner/information_gain.hpp"
#include "keycontact/refiner/particle_filter.hpp"
#include "keycontact/sim/campaign.hpp"
#include "keycontact/transfer/cpd.hpp"
#include "keycontact/transfer/pipeline.hpp"
#include "keycontact/transfer/ransac.hpp"
#include "oracles/grounding.hpp"
#include "oracles/keypoints.hpp"
#include "oracles/refiner.hpp"
#include "scenarios.hpp"
#include "test_support.hpp"
#include "transfer_scenes.hpp"

using namespace keycontact;
using keycontact::testing::pose_gap;
using keycontact::testing::random_pose;

namespace {

std::filesystem::path fixtures() {
  const char* env = std::getenv("KEYCONTACT_FIXTURES");
  return env ? std::filesystem::path(env) : std::filesystem::path("tests/fixtures");
}

// Collects failed checks; the first few are reported.
struct Verdict {
  bool ok = true;
  std::vector<std::string> failures;
  std::ostringstream info;
  void check(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (failures.size() < 3) failures.push_back(what);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---- shared scenes ----

ShapeOptions small_options() {
  ShapeOptions o;
  o.cell = 0.001;
  o.surface_samples = 500;
  return o;
}

const ShapeModel& slab() {
  static const ShapeModel m = ShapeModel::build(make_box_mesh(Vec3(-0.05, -0.05, -0.02), Vec3(0.05, 0.05, 0.0)), small_options());
  return m;
}

const ShapeModel& cube() {
  static const ShapeModel m = ShapeModel::build(make_box_mesh(Vec3(-0.005, -0.005, 0.0), Vec3(0.005, 0.005, 0.01)), small_options());
  return m;
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
    p.timestamps.push_back(0.1 * static_cast<double>(i));
  }
  return p;
}

TrackedEntity hand_along(const std::vector<Vec3>& path) {
  TrackedEntity h{"hand", {}, {}, {}, {}};
  for (std::size_t t = 0; t < path.size(); ++t) {
    h.clouds.emplace_back(std::vector<Vec3>{path[t] + Vec3(0.01, 0, 0), path[t] - Vec3(0.01, 0, 0)});
    h.poses.push_back(Pose::from_translation(path[t]));
    h.timestamps.push_back(0.1 * static_cast<double>(t));
  }
  return h;
}

CorrespondenceSet planted(std::mt19937_64& rng, const Pose& t_ref_from_tgt, int n, double outlier_frac) {
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  CorrespondenceSet c;
  for (int i = 0; i < n; ++i) {
    Vec3 tgt(u(rng), u(rng), u(rng));
    Vec3 ref = t_ref_from_tgt * tgt;
    if (i < outlier_frac * n) ref = Vec3(u(rng), u(rng), u(rng)) * 2;
    c.pairs.push_back({ref, tgt, static_cast<std::size_t>(i), static_cast<std::size_t>(i)});
  }
  return c;
}

std::vector<Vec3> volume_points(std::mt19937_64& rng, int n, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  std::vector<Vec3> p;
  for (int i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng), u(rng));
  return p;
}

Vec3 warp(const Vec3& p, double amp) {
  const double k = 2 * M_PI / 0.1;
  return p + amp * Vec3(std::sin(k * p.y()), std::sin(k * p.z()), std::sin(k * p.x()));
}

CampaignConfig efficacy_campaign(const Json& fx) {
  CampaignConfig c;
  c.profiles.clear();
  for (const auto& p : fx.at("profiles")) c.profiles.push_back(profile_from_string(p.get<std::string>()));
  c.clearance = fx.at("clearance").get<double>();
  c.noise_grid = {PerceptionNoise{fx.at("sigma_t").get<double>(), fx.at("sigma_r").get<double>()}};
  c.selections = {SelectionMode::information_gain};
  c.trials = fx.at("trials_per_profile").get<int>();
  c.refinement.contacts = fx.at("contacts").get<int>();
  c.refinement.particles = fx.at("particles").get<std::size_t>();
  c.refinement.noise.d_th = fx.at("d_th").get<double>();
  c.workers = 1;
  return c;
}

const CellMetrics* find_cell(const CampaignResult& r, SelectionMode s) {
  for (const auto& c : r.cells)
    if (c.selection == s) return &c;
  return nullptr;
}

// ---- criteria ----

void refinement_efficacy(const Json& all, Verdict& v) {
  const Json& fx = all.at("refinement_efficacy");
  const auto r = run_campaign(efficacy_campaign(fx));
  int n = 0;
  double vision = 0, refined = 0;
  for (const auto& c : r.cells) {
    n += c.trials;
    vision += c.vision_success_rate * c.trials;
    refined += c.refined_success_rate * c.trials;
    v.info << to_string(c.profile) << " vision " << fmt(c.vision_success_rate) << " refined "
           << fmt(c.refined_success_rate) << " err " << fmt(c.translation_mean * 1e3) << " mm; ";
  }
  vision /= n;
  refined /= n;
  v.info << "all " << n << " trials: vision " << fmt(vision) << " refined " << fmt(refined);
  v.check(vision <= fx.at("max_vision_success").get<double>(), "vision success " + fmt(vision));
  v.check(refined >= fx.at("min_refined_success").get<double>(), "refined success " + fmt(refined));
  v.check(refined - vision >= fx.at("min_gap").get<double>(), "gap " + fmt(refined - vision));
}

void selection_comparison(const Json& all, Verdict& v) {
  const Json& fx = all.at("selection");
  CampaignConfig c = efficacy_campaign(all.at("refinement_efficacy"));
  c.profiles = {profile_from_string(fx.at("profile").get<std::string>())};
  c.trials = fx.at("seeds").get<int>();
  c.selections = {SelectionMode::information_gain, SelectionMode::random};
  const auto r = run_campaign(c);
  const CellMetrics* ig = find_cell(r, SelectionMode::information_gain);
  const CellMetrics* rnd = find_cell(r, SelectionMode::random);
  v.check(ig && rnd, "missing cells");
  if (!ig || !rnd) return;
  const double ratio = ig->translation_mean / rnd->translation_mean;
  // Posterior spread: entropy of the Gaussian fit to the particle cloud, prior first.
  const auto& h = ig->pose_entropy_mean;
  v.info << "IG " << fmt(ig->translation_mean * 1e3) << " mm, random " << fmt(rnd->translation_mean * 1e3)
         << " mm, ratio " << fmt(ratio) << "; IG pose entropy per step:";
  for (double x : h) v.info << " " << fmt(x);
  v.info << "; IG weight entropy per update:";
  for (double x : ig->weight_entropy_mean) v.info << " " << fmt(x);
  v.check(ratio <= fx.at("max_error_ratio").get<double>(), "error ratio " + fmt(ratio));
  for (std::size_t k = 1; k < h.size(); ++k)
    v.check(h[k] <= h[k - 1], "entropy rises at step " + std::to_string(k) + ": " + fmt(h[k - 1]) + " -> " + fmt(h[k]));
}

void filter_exactness(const Json& all, Verdict& v) {
  const Json& fx = all.at("exactness");
  const double tol = fx.at("tolerance").get<double>();
  for (const auto& jd : fx.at("d_th")) {
    const double d_th = jd.get<double>();
    v.check(contact_likelihood(0.0, d_th) == 1.0, "l(0) at d_th " + fmt(d_th));
    v.check(contact_likelihood(d_th, d_th) == 0.0, "l(d_th) at d_th " + fmt(d_th));
    v.check(std::abs(contact_likelihood(0.5 * d_th, d_th) - 0.5) <= tol, "l(d_th/2) at d_th " + fmt(d_th));
  }

  NoiseConfig noise;
  noise.d_th = all.at("refinement_efficacy").at("d_th").get<double>();
  ContactProblem surf;
  surf.geometry = ContactGeometry(slab(), cube());
  const Pose down = Pose::from_rotation(Quat(Eigen::AngleAxisd(M_PI, Vec3::UnitX())));
  surf.slave_keypoint = down;
  surf.model = ContactModel::slave_surface;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.002);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  int updates = 0;
  double worst_sum = 0, worst_weight = 0;
  for (int trial = 0; trial < 50; ++trial) {
    ParticleSet ps;
    for (int j = 0; j < 60; ++j) {
      ps.particles.push_back(down * Pose::from_translation(Vec3(g(rng), g(rng), g(rng))));
      ps.weights.push_back(u(rng));
    }
    ps.weights = oracle::normalized(ps.weights);
    const ContactMeasurement m{Pose::identity(), Pose::identity(), true};
    const auto out = filter_update(ps, m, surf, noise);
    if (out.diverged) continue;
    ++updates;
    double sum = 0;
    for (double w : out.weights) sum += w;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    std::vector<double> expect;
    for (std::size_t j = 0; j < ps.size(); ++j)
      expect.push_back(ps.weights[j] * oracle::triangular(surf.distance(m.master, m.end_effector, ps.particles[j]), noise.d_th));
    expect = oracle::normalized(expect);
    for (std::size_t j = 0; j < ps.size(); ++j) worst_weight = std::max(worst_weight, std::abs(out.weights[j] - expect[j]));
  }
  v.check(updates >= 25, "only " + std::to_string(updates) + " non-diverged updates");
  v.check(worst_sum <= tol, "weight sum off by " + fmt(worst_sum));
  v.check(worst_weight <= tol, "weight off oracle by " + fmt(worst_weight));

  double worst_ig = 0;
  std::uniform_real_distribution<double> w01(0.0, 1.0);
  for (int n : {1, 2, 10, 37, 500}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> w(static_cast<std::size_t>(n));
      for (double& x : w) x = w01(rng) < 0.2 ? 0.0 : w01(rng);
      w[0] += 1e-3;
      w = oracle::normalized(w);
      worst_ig = std::max(worst_ig, std::abs(information_gain(w) - oracle::information_gain(w)));
    }
  }
  v.check(worst_ig <= tol, "IG off oracle by " + fmt(worst_ig));
  v.info << updates << " updates, max |sum-1| " << fmt(worst_sum) << ", max weight diff " << fmt(worst_weight)
         << ", max IG diff " << fmt(worst_ig);
}

void keypoint_oracle(const Json& all, Verdict& v) {
  const Json& fx = all.at("keypoints");
  const double tol = fx.at("axis_tolerance").get<double>();
  std::mt19937_64 rng(31);
  const int scenes = fx.at("scenes").get<int>();
  int matched = 0;
  for (int trial = 0; trial < scenes; ++trial) {
    auto s = keycontact::testing::random_keypoint_scene(rng);
    v.check(s.slave_world.size() + s.master_world.size() <= 500, "scene too large");
    auto kf = extract_slave_keypoint(s.slave_world, s.master_world, s.slave_poses, s.timestamps, s.contact);
    auto o = oracle::slave_keypoint(s.slave_world.points, s.master_world.points, matrices(s.slave_poses),
                                    window_start(s.timestamps, s.contact, 0.2), s.contact, 0.05, 0.25);
    const Pose& pc = s.slave_poses[s.contact];
    const bool ok = (pc * kf.origin - s.slave_world.points[o.origin_index]).norm() < 1e-12 &&
                    (pc.rotate(kf.z_axis) - o.z).norm() < tol && (pc.rotate(kf.x_axis) - o.x).norm() < tol &&
                    (pc.rotate(kf.y_axis) - o.y).norm() < tol;
    matched += ok;
    v.check(ok, "scene " + std::to_string(trial) + " differs");
  }
  v.info << matched << "/" << scenes << " scenes match";
}

void transfer_round_trip(const Json& all, Verdict& v) {
  const Json& fx = all.at("transfer");
  const double tol = fx.at("rigid_tolerance").get<double>();
  auto obj = testing::featured_object(60);
  std::mt19937_64 rng(61);
  double worst_t = 0, worst_r = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const Pose t = random_pose(rng, 0.3);
    auto res = transfer_keypoint(obj.cloud, obj.keypoint, obj.cloud.transformed(t), "copy");
    const Pose expect = t * obj.keypoint.pose();
    worst_t = std::max(worst_t, (res.keypoint.origin - expect.translation()).norm());
    worst_r = std::max(worst_r, angular_distance(res.keypoint.pose().rotation(), expect.rotation()));
  }
  v.check(worst_t <= tol && worst_r <= tol, "rigid copy off by " + fmt(worst_t) + " m / " + fmt(worst_r) + " rad");

  const double scale = fx.at("scale").get<double>();
  PointCloud big = obj.cloud;
  for (auto& p : big.points) p *= scale;
  auto res = transfer_keypoint(obj.cloud, obj.keypoint, big, "big");
  const double err = (res.keypoint.origin - scale * obj.keypoint.origin).norm();
  v.check(err <= fx.at("scaled_tolerance").get<double>(), "scaled error " + fmt(err));

  const Pose g = random_pose(rng, 0.5);
  auto moved = transfer_keypoint(obj.cloud, obj.keypoint, big.transformed(g), "big");
  const double gap = pose_gap(g.inverse() * moved.keypoint.pose(), res.keypoint.pose());
  v.check(gap <= fx.at("equivariance_tolerance").get<double>(), "equivariance gap " + fmt(gap));
  v.info << "rigid " << fmt(worst_t) << " m / " << fmt(worst_r) << " rad, scaled " << fmt(err * 1e3)
         << " mm, equivariance " << fmt(gap);
}

void registration(const Json& all, Verdict& v) {
  const Json& fx = all.at("registration");
  const double tol = fx.at("tolerance").get<double>();
  const int seeds = fx.at("seeds").get<int>();
  int good = 0;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + s));
    const Pose t = random_pose(rng, 0.1);
    auto c = planted(rng, t, 100, fx.at("outlier_fraction").get<double>());
    auto r = ransac_rigid_align(c, {2000, 0.005, static_cast<std::uint64_t>(s)});
    good += (r.target_to_reference.translation() - t.translation()).norm() <= tol &&
            angular_distance(r.target_to_reference.rotation(), t.rotation()) <= tol;
  }
  const double rate = double(good) / seeds;
  v.check(rate >= fx.at("min_success").get<double>(), "ransac success " + fmt(rate));

  std::mt19937_64 rng(54);
  const double amp = fx.at("warp_amplitude").get<double>();
  auto ref = volume_points(rng, 300, 0.05);
  std::vector<Vec3> warped;
  for (const auto& p : ref) warped.push_back(warp(p, amp));
  auto reg = nonrigid_register(ref, warped);
  double mean = 0;
  for (const auto& p : ref) mean += (reg.map.apply(p) - warp(p, amp)).norm();
  mean /= static_cast<double>(ref.size());
  v.check(mean < fx.at("max_mean_residual").get<double>(), "warp residual " + fmt(mean));
  v.info << "ransac " << good << "/" << seeds << ", warp mean residual " << fmt(mean * 1e3) << " mm";
}

void grounding_segmentation(const Json& all, Verdict& v) {
  const Json& fx = all.at("grounding");
  const double eps = fx.at("epsilon").get<double>(), gamma = fx.at("gamma").get<double>();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 2 * eps);
  std::uniform_int_distribution<int> len(2, 60), q(0, 4);
  const int series = fx.at("series").get<int>();
  int equal = 0;
  for (int trial = 0; trial < series; ++trial) {
    std::vector<double> d(static_cast<std::size_t>(len(rng)));
    for (auto& x : d) x = trial % 2 ? u(rng) : 0.5 * eps * q(rng);
    equal += markers_from_distances(d, eps) == oracle::threshold_scan(d, eps);
  }
  v.check(equal == series, std::to_string(series - equal) + " marker series differ");

  std::normal_distribution<double> n(0.0, 0.01);
  std::uniform_int_distribution<int> span(1, 8);
  int kept = 0, dropped = 0, filters_ok = 0, filters = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec3> walk{Vec3::Zero()};
    for (int t = 1; t < 40; ++t) walk.push_back(walk.back() + Vec3(n(rng), n(rng), n(rng)));
    std::vector<Segment> segs, expect;
    for (std::size_t b = 0; b + 1 < walk.size();) {
      const std::size_t e = std::min(walk.size() - 1, b + static_cast<std::size_t>(span(rng)));
      segs.push_back({b, e, "m", "s", Phase::manipulation});
      b = e;
    }
    for (auto& sg : segs)
      if (oracle::step_sum(walk, sg.t_b, sg.t_e) >= gamma) expect.push_back(sg), ++kept;
      else ++dropped;
    ++filters;
    filters_ok += filter_segments(segs, hand_along(walk), gamma) == expect;
  }
  v.check(filters_ok == filters, std::to_string(filters - filters_ok) + " filtered sets differ");
  v.check(kept > 0 && dropped > 0, "segment lengths do not straddle gamma");
  v.info << equal << "/" << series << " marker series, " << filters_ok << "/" << filters << " filters (" << kept
         << " kept, " << dropped << " dropped)";
}

void squish_bound(const Json& all, Verdict& v) {
  const Json& fx = all.at("squish");
  std::mt19937_64 rng(35);
  const int paths = fx.at("paths").get<int>();
  double worst_ratio = 0;
  for (int trial = 0; trial < paths; ++trial) {
    auto pts = keycontact::testing::random_walk_path(rng, 20 + trial);
    auto path = path_from(pts);
    for (const auto& jm : fx.at("mu")) {
      const double mu = jm.get<double>();
      auto idx = squishe_indices(path, SquishMode::error_bound(mu));
      v.check(idx.front() == 0 && idx.back() == pts.size() - 1, "endpoints dropped");
      const double e = oracle::max_dropped_sed(pts, path.timestamps, idx);
      worst_ratio = std::max(worst_ratio, e / mu);
      v.check(e <= mu, "SED " + fmt(e) + " > " + fmt(mu));
    }
  }
  int lines_ok = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 dir = random_pose(rng, 0.05).translation();
    std::vector<Vec3> line;
    for (int i = 0; i < 10 + trial; ++i) line.push_back(dir * i);
    lines_ok += compress_squishe(path_from(line), SquishMode::error_bound(1e-6)).size() == 2;
  }
  v.check(lines_ok == 20, "straight lines kept extra points");
  v.info << "max SED/mu " << fmt(worst_ratio) << ", straight lines " << lines_ok << "/20";
}

void collision_search(const Json& all, Verdict& v) {
  const Json& fx = all.at("collision");
  CollisionSearchConfig cfg;
  cfg.radius_t = fx.at("radius").get<double>();
  const Pose planted_pose = Pose::from_translation(Vec3(0, 0.01, -fx.at("planted_depth").get<double>()));
  const int seeds = fx.at("seeds").get<int>();
  int below = 0, worse = 0, poses = 0;
  double worst = 0;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto out = refine_grounded_trajectory({planted_pose}, slab(), Pose(), cube(), cfg);
    below += out.refined_penetration[0] < fx.at("target").get<double>();
    worse += out.refined_penetration[0] > out.original_penetration[0];
    worst = std::max(worst, out.refined_penetration[0]);
  }
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.006, 0.006);
  CollisionSearchConfig quick = cfg;
  quick.samples = 64;
  quick.rounds = 3;
  for (int s = 0; s < 10; ++s) {
    std::vector<Pose> traj;
    for (int t = 0; t < 12; ++t) traj.push_back(Pose(rotation_exp(Vec3(u(rng), u(rng), u(rng)) * 20), Vec3(u(rng), u(rng), u(rng))));
    quick.seed = static_cast<std::uint64_t>(s);
    const auto out = refine_grounded_trajectory(traj, slab(), Pose(), cube(), quick);
    for (std::size_t t = 0; t < traj.size(); ++t, ++poses) worse += out.refined_penetration[t] > out.original_penetration[t];
  }
  const double frac = double(below) / seeds;
  v.check(worse == 0, std::to_string(worse) + " poses got worse");
  v.check(frac >= fx.at("min_fraction").get<double>(), "below target in " + fmt(frac));
  v.info << below << "/" << seeds << " planted below target (worst " << fmt(worst * 1e3) << " mm), " << worse << "/"
         << poses + seeds << " worse";
}

void determinism(const Json& all, Verdict& v) {
  CampaignConfig c = efficacy_campaign(all.at("refinement_efficacy"));
  c.trials = all.at("determinism").at("campaign_seeds").get<int>();
  c.selections = {SelectionMode::information_gain, SelectionMode::random};
  const auto a = run_campaign(c);
  c.workers = 2;
  const auto b = run_campaign(c);
  v.check(trials_csv(a.trials) == trials_csv(b.trials), "campaign trials differ");
  v.check(campaign_summary_json(a).dump(2) == campaign_summary_json(b).dump(2), "campaign summary differs");

  const auto learn_dir = fixtures() / "demo";
  const auto learn_cfg = learn_config_from_json(read_json_file(learn_dir / "learn.json"), learn_dir);
  auto dump = [](const LearnResult& r) {
    std::string s = plan_record_to_json(r.plan).dump();
    for (const auto& k : r.skills) s += skill_record_to_json(k).dump();
    return s;
  };
  v.check(dump(learn_skills(learn_cfg)) == dump(learn_skills(learn_cfg)), "learned records differ");

  auto obj = testing::featured_object(60, 1500);
  std::mt19937_64 rng(70);
  const PointCloud tgt = obj.cloud.transformed(random_pose(rng, 0.2));
  auto t1 = transfer_keypoint(obj.cloud, obj.keypoint, tgt, "t");
  auto t2 = transfer_keypoint(obj.cloud, obj.keypoint, tgt, "t");
  v.check(transfer_diagnostics_to_json(t1.diagnostics).dump() == transfer_diagnostics_to_json(t2.diagnostics).dump() &&
              t1.keypoint.pose().matrix() == t2.keypoint.pose().matrix(),
          "transfer differs");

  auto corr = planted(rng, random_pose(rng, 0.1), 60, 0.3);
  v.check(ransac_rigid_align(corr, {500, 0.005, 3}).target_to_reference.matrix() ==
              ransac_rigid_align(corr, {500, 0.005, 3}).target_to_reference.matrix(),
          "ransac differs");

  CollisionSearchConfig cs;
  cs.seed = 5;
  const std::vector<Pose> traj{Pose::from_translation(Vec3(0, 0.01, -0.003))};
  const auto c1 = refine_grounded_trajectory(traj, slab(), Pose(), cube(), cs);
  const auto c2 = refine_grounded_trajectory(traj, slab(), Pose(), cube(), cs);
  v.check(c1.poses[0].matrix() == c2.poses[0].matrix(), "collision search differs");
  v.info << a.trials.size() << " campaign trials, learn, transfer, ransac, collision search rerun identically";
}

struct Criterion {
  int id;
  const char* name;
  const char* budget_key;  // fixture section holding max_seconds, or null
  std::function<void(const Json&, Verdict&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  Json fx;
  try {
    fx = read_json_file(fixtures() / "acceptance.json");
  } catch (const std::exception& e) {
    std::cerr << "cannot read acceptance fixture: " << e.what() << "\n";
    return 2;
  }
  const std::vector<Criterion> criteria{
      {1, "contact refinement efficacy", "refinement_efficacy", refinement_efficacy},
      {2, "information gain beats random selection", "selection", selection_comparison},
      {3, "likelihood, weight and information gain exactness", "exactness", filter_exactness},
      {4, "keypoint extraction oracle equivalence", "keypoints", keypoint_oracle},
      {5, "transfer round trip", "transfer", transfer_round_trip},
      {6, "registration properties", "registration", registration},
      {7, "grounding segmentation", "grounding", grounding_segmentation},
      {8, "squish-e error bound", "squish", squish_bound},
      {9, "collision-minimal refinement", "collision", collision_search},
      {10, "determinism", nullptr, determinism},
  };
  // Optional filter: criterion ids on the command line.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(fx, v);
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string budget;
    if (c.budget_key) {
      const double limit = fx.at(c.budget_key).at("max_seconds").get<double>();
      v.check(secs <= limit, "runtime " + fmt(secs) + " s > " + fmt(limit) + " s");
      budget = " / " + fmt(limit);
    }
    failed += !v.ok;
    std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " [" << fmt(secs) << budget
              << " s] " << v.info.str();
    for (const auto& f : v.failures) std::cout << " | " << f;
    std::cout << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
