#include "keycontact/bank/pipelines.hpp"

#include <algorithm>
#include <map>

#include "keycontact/common/config_check.hpp"
#include "keycontact/common/error.hpp"
#include "keycontact/grounding/hand_gripper.hpp"
#include "keycontact/grounding/trajectory_io.hpp"
#include "keycontact/keypoints/serialization.hpp"
#include "keycontact/keypoints/waypoints.hpp"
#include "keycontact/geometry/mesh_io.hpp"
#include "keycontact/refiner/config_io.hpp"

namespace keycontact {

namespace {

const TrackedEntity& entity(const std::vector<TrackedEntity>& entities, const std::string& id) {
  for (const auto& e : entities)
    if (e.id == id) return e;
  fail(ErrorKind::not_found, "no tracked entity '" + id + "'");
}

template <typename T>
std::vector<T> slice(const std::vector<T>& v, std::size_t a, std::size_t b) {
  return std::vector<T>(v.begin() + static_cast<std::ptrdiff_t>(a), v.begin() + static_cast<std::ptrdiff_t>(b + 1));
}

std::string subtask_key(const Segment& s) {
  return std::string(to_string(s.phase)) + ":" + s.master_id + ":" + s.slave_id;
}

Obb points_box(const std::vector<Vec3>& pts) {
  Vec3 lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  Obb b;
  b.center = 0.5 * (lo + hi);
  b.half_extents = 0.5 * (hi - lo);
  return b;
}

}  // namespace

void GroundConfig::validate() const {
  if (hand_id.empty()) fail(ErrorKind::invalid_argument, "ground: empty hand id");
  if (!(epsilon > 0)) fail(ErrorKind::invalid_argument, "ground: epsilon must be > 0");
  if (!(gamma >= 0)) fail(ErrorKind::invalid_argument, "ground: gamma must be >= 0");
  if (!(squish_mu > 0)) fail(ErrorKind::invalid_argument, "ground: squish_mu must be > 0");
}

std::vector<Pose> gripper_poses(const TrackedEntity& hand) {
  if (hand.landmarks.size() != hand.size()) fail(ErrorKind::schema, "entity '" + hand.id + "' has no hand landmarks");
  std::vector<Pose> out;
  for (const auto& l : hand.landmarks) out.push_back(gripper_from_hand(l));
  return out;
}

GroundResult ground_demonstration(const std::vector<TrackedEntity>& entities, const GroundConfig& cfg,
                                  KeypointRegistry* registry) {
  cfg.validate();
  const TrackedEntity& hand = entity(entities, cfg.hand_id);
  GroundResult out;
  out.timestamps = hand.timestamps;
  out.segments = segment_demonstration(entities, cfg.hand_id, cfg.epsilon, cfg.gamma);
  std::vector<Pose> gripper;
  for (const auto& seg : out.segments) {
    const TrackedEntity& m = entity(entities, seg.master_id);
    const TrackedEntity& s = entity(entities, seg.slave_id);
    SubtaskKeypoints k;
    k.segment = seg;
    std::vector<Pose> slave_poses;
    std::size_t a = 0, b = 0;
    if (seg.phase == Phase::grasping) {
      if (gripper.empty()) gripper = gripper_poses(hand);
      k.master_kf = grasp_keypoint(gripper[seg.t_b], m.poses[seg.t_b], m.id);
      k.slave_kf = KeypointFrame::from_pose(Pose::identity(), s.id, KeypointRole::slave);
      slave_poses = gripper;
      a = 0;
      b = seg.t_b;
    } else {
      k.slave_kf = extract_slave_keypoint(s.clouds[seg.t_b], m.clouds[seg.t_b], s.poses, s.timestamps, seg.t_b,
                                          cfg.keypoint, s.id);
      k.master_kf = extract_master_keypoint(m.clouds[seg.t_b], k.slave_kf, s.poses[seg.t_b], m.poses[seg.t_b], m.id);
      slave_poses = s.poses;
      a = seg.t_b;
      b = seg.t_e;
    }
    k.observed_master_kf = k.master_kf;
    if (registry) {
      const auto& e = registry->get_or_insert(subtask_key(seg), {k.master_kf, k.slave_kf});
      k.master_kf = e.master;
      k.slave_kf = e.slave;
    }
    const auto sp = slice(slave_poses, a, b), mp = slice(m.poses, a, b);
    const auto ts = slice(out.timestamps, a, b);
    k.raw_path = relative_waypoint_path(k.slave_kf, k.master_kf, sp, mp, ts);
    k.waypoints = compress_squishe(k.raw_path, SquishMode::error_bound(cfg.squish_mu));
    out.subtasks.push_back(std::move(k));
  }
  return out;
}

Json ground_result_to_json(const GroundResult& r) {
  Json subtasks = Json::array();
  for (const auto& k : r.subtasks) {
    subtasks.push_back({{"t_b", k.segment.t_b},
                        {"t_e", k.segment.t_e},
                        {"phase", to_string(k.segment.phase)},
                        {"master_id", k.segment.master_id},
                        {"slave_id", k.segment.slave_id},
                        {"master_keypoint", keypoint_frame_to_json(k.master_kf)},
                        {"slave_keypoint", keypoint_frame_to_json(k.slave_kf)},
                        {"raw_waypoint_count", k.raw_path.size()},
                        {"waypoints", waypoint_path_to_json(k.waypoints)}});
  }
  return Json{{"schema_version", 1},
              {"segments", segments_to_json(r.segments, r.timestamps)},
              {"subtasks", subtasks}};
}

Json ground_config_to_json(const GroundConfig& c) {
  return Json{{"hand_id", c.hand_id},
              {"epsilon", c.epsilon},
              {"gamma", c.gamma},
              {"delta_t", c.keypoint.delta_t},
              {"perpendicular_band", c.keypoint.perpendicular_band},
              {"relaxed_band", c.keypoint.relaxed_band},
              {"squish_mu", c.squish_mu}};
}

namespace {

void read_ground_config(const Json& j, const std::string& prefix, GroundConfig& c, std::vector<FieldIssue>& issues) {
  FieldReader r(j, prefix, issues);
  r.string("hand_id", c.hand_id);
  r.check(!c.hand_id.empty(), "hand_id", "must not be empty");
  r.number("epsilon", c.epsilon);
  r.check(c.epsilon > 0, "epsilon", "must be > 0");
  r.number("gamma", c.gamma);
  r.check(c.gamma >= 0, "gamma", "must be >= 0");
  r.number("delta_t", c.keypoint.delta_t);
  r.check(c.keypoint.delta_t > 0, "delta_t", "must be > 0");
  r.number("perpendicular_band", c.keypoint.perpendicular_band);
  r.check(c.keypoint.perpendicular_band > 0 && c.keypoint.perpendicular_band <= 1, "perpendicular_band",
          "must be in (0, 1]");
  r.number("relaxed_band", c.keypoint.relaxed_band);
  r.check(c.keypoint.relaxed_band >= c.keypoint.perpendicular_band && c.keypoint.relaxed_band <= 1, "relaxed_band",
          "must be in [perpendicular_band, 1]");
  r.number("squish_mu", c.squish_mu);
  r.check(c.squish_mu > 0, "squish_mu", "must be > 0");
  r.reject_unknown();
}

}  // namespace

GroundConfig ground_config_from_json(const Json& j) {
  GroundConfig c;
  std::vector<FieldIssue> issues;
  read_ground_config(j, "", c, issues);
  throw_if_issues(std::move(issues));
  return c;
}

void LearnConfig::validate() const {
  if (task.empty()) fail(ErrorKind::invalid_argument, "learn: empty task description");
  if (demos.empty()) fail(ErrorKind::invalid_argument, "learn: no demonstrations");
  ground.validate();
  if (!(grasp_pos_eps > 0) || !(grasp_ang_eps > 0)) fail(ErrorKind::invalid_argument, "learn: grasp eps must be > 0");
}

LearnConfig learn_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  LearnConfig c;
  c.base_dir = base_dir;
  std::vector<FieldIssue> issues;
  FieldReader r(j, "", issues);
  r.known("schema_version");
  if (r.has("schema_version") && r.at("schema_version") != 1) r.issue("schema_version", "unsupported version");
  r.string("task", c.task);
  r.check(!c.task.empty(), "task", "required, non-empty");
  r.known("demos");
  if (!r.has("demos") || !r.at("demos").is_array() || r.at("demos").empty()) {
    r.issue("demos", "expected a non-empty array of {id, trajectories}");
  } else {
    const Json& a = r.at("demos");
    for (std::size_t i = 0; i < a.size(); ++i) {
      FieldReader d(a[i], r.path("demos[" + std::to_string(i) + "]"), issues);
      LearnDemo demo;
      std::string traj;
      d.string("id", demo.id);
      d.check(!demo.id.empty(), "id", "required, non-empty");
      d.string("trajectories", traj);
      d.check(!traj.empty(), "trajectories", "required, non-empty");
      d.reject_unknown();
      demo.trajectories = traj;
      c.demos.push_back(demo);
    }
  }
  r.known("subtasks");
  if (r.has("subtasks")) {
    if (r.at("subtasks").is_array() &&
        std::all_of(r.at("subtasks").begin(), r.at("subtasks").end(), [](const Json& v) { return v.is_string(); })) {
      c.subtasks = r.at("subtasks").get<std::vector<std::string>>();
    } else {
      r.issue("subtasks", "expected an array of strings");
    }
  }
  r.known("labels");
  if (r.has("labels")) {
    if (r.at("labels").is_array() &&
        std::all_of(r.at("labels").begin(), r.at("labels").end(), [](const Json& v) { return v.is_string(); })) {
      c.labels = r.at("labels").get<std::vector<std::string>>();
    } else {
      r.issue("labels", "expected an array of strings");
    }
  }
  r.known("meshes");
  if (r.has("meshes")) {
    const Json& m = r.at("meshes");
    if (!m.is_object()) {
      r.issue("meshes", "expected an object of id -> path");
    } else {
      for (const auto& [k, v] : m.items()) {
        if (v.is_string()) {
          c.meshes[k] = v.get<std::string>();
        } else {
          r.issue("meshes." + k, "expected a path string");
        }
      }
    }
  }
  r.known("ground");
  if (r.has("ground")) read_ground_config(r.at("ground"), "ground", c.ground, issues);
  r.number("grasp_pos_eps", c.grasp_pos_eps);
  r.check(c.grasp_pos_eps > 0, "grasp_pos_eps", "must be > 0");
  r.number("grasp_ang_eps", c.grasp_ang_eps);
  r.check(c.grasp_ang_eps > 0, "grasp_ang_eps", "must be > 0");
  r.reject_unknown();
  throw_if_issues(std::move(issues));
  return c;
}

Json learn_config_to_json(const LearnConfig& c) {
  Json demos = Json::array();
  for (const auto& d : c.demos) demos.push_back({{"id", d.id}, {"trajectories", d.trajectories.string()}});
  return Json{{"schema_version", 1},          {"task", c.task},
              {"demos", demos},               {"subtasks", c.subtasks},
              {"meshes", c.meshes},           {"labels", c.labels},
              {"ground", ground_config_to_json(c.ground)}, {"grasp_pos_eps", c.grasp_pos_eps},
              {"grasp_ang_eps", c.grasp_ang_eps}};
}

LearnResult learn_skills(const LearnConfig& cfg) {
  cfg.validate();
  auto resolve = [&](const std::filesystem::path& p) { return p.is_relative() ? cfg.base_dir / p : p; };
  KeypointRegistry registry;
  std::vector<GroundResult> grounded;
  std::vector<std::vector<TrackedEntity>> demos;
  for (const auto& d : cfg.demos) {
    demos.push_back(read_trajectories(resolve(d.trajectories)));
    grounded.push_back(ground_demonstration(demos.back(), cfg.ground, &registry));
  }
  const GroundResult& first = grounded.front();
  if (first.subtasks.empty()) fail(ErrorKind::pipeline, "learn: the first demonstration has no segments");

  std::map<std::string, MeshReference> mesh_refs;
  for (const auto& [id, path] : cfg.meshes) mesh_refs[id] = {id, path, file_sha256(resolve(path))};

  LearnResult out;
  out.plan.task = cfg.task;
  for (std::size_t k = 0; k < first.subtasks.size(); ++k) {
    const SubtaskKeypoints& st = first.subtasks[k];
    const Segment& seg = st.segment;
    SkillRecord rec;
    rec.subtask = k < cfg.subtasks.size() ? cfg.subtasks[k]
                  : seg.phase == Phase::grasping ? "grasp the " + seg.master_id
                                                 : "move the " + seg.slave_id + " to the " + seg.master_id;
    rec.phase = seg.phase;
    rec.master_id = seg.master_id;
    rec.slave_id = seg.slave_id;
    rec.master_keypoint = st.master_kf;
    rec.slave_keypoint = st.slave_kf;
    rec.waypoints = st.waypoints;
    rec.labels = cfg.labels;
    rec.provenance = {cfg.demos.front().id, cfg.demos.front().trajectories.string(),
                      first.timestamps[seg.t_b], first.timestamps[seg.t_e], seg.t_b, seg.t_e};
    for (const auto& id : {seg.master_id, seg.slave_id})
      if (auto it = mesh_refs.find(id); it != mesh_refs.end()) rec.meshes.push_back(it->second);

    if (seg.phase == Phase::grasping) {
      std::vector<KeypointFrame> frames;
      for (const auto& g : grounded)
        for (const auto& s : g.subtasks)
          if (subtask_key(s.segment) == subtask_key(seg)) frames.push_back(s.observed_master_kf);
      Obb anchor;
      if (auto it = cfg.meshes.find(seg.master_id); it != cfg.meshes.end()) {
        anchor = object_aabb(read_mesh(resolve(it->second)));
      } else {
        const TrackedEntity& m = entity(demos.front(), seg.master_id);
        anchor = points_box(m.clouds.front().transformed(m.poses.front().inverse()).points);
      }
      const auto groups = group_grasps_fallback(frames, cfg.grasp_pos_eps, cfg.grasp_ang_eps);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<KeypointFrame> members;
        for (auto i : groups[g]) members.push_back(frames[i]);
        const std::string label = "grasp_group_" + std::to_string(g);
        rec.grasp_regions.push_back(build_grasp_region(members, anchor, label));
        rec.constraints.push_back({label, "fallback grouping of " + std::to_string(members.size()) + " grasp keypoints",
                                   ConstraintSource::fallback_grouping});
      }
    } else {
      const Vec3 p0 = st.waypoints.waypoints.front().translation();
      const Vec3 p1 = st.waypoints.waypoints.back().translation();
      TrajectorySpec spec;
      spec.generator_id = "line";
      const char* axes = "xyz";
      for (int i = 0; i < 3; ++i) {
        spec.bindings[std::string("start_") + axes[i]] = Expression::literal(p0[i]);
        spec.bindings[std::string("end_") + axes[i]] = Expression::literal(p1[i]);
      }
      spec.bindings["duration"] = Expression::literal(rec.provenance.t_end - rec.provenance.t_begin);
      spec.resolution = static_cast<int>(std::max<std::size_t>(2, st.waypoints.size()));
      rec.trajectory = spec;
    }
    rec.validate();
    out.plan.subtasks.push_back(rec.subtask);
    out.skills.push_back(std::move(rec));
  }
  return out;
}

TransferResult transfer_record_keypoint(const SkillRecord& record, KeypointRole role, const PointCloud& reference,
                                        const PointCloud& target, const std::string& target_owner,
                                        const TransferConfig& cfg) {
  const KeypointFrame& kf = role == KeypointRole::master ? record.master_keypoint : record.slave_keypoint;
  TransferResult r = transfer_keypoint(reference, kf, target, target_owner, cfg);
  r.keypoint.role = role;
  return r;
}

void RefineRequest::validate() const {
  shapes.validate();
  if (!(noise.sigma_t >= 0) || !(noise.sigma_r >= 0)) fail(ErrorKind::invalid_argument, "refine: noise must be >= 0");
  refinement.validate();
}

RefineRequest refine_request_from_json(const Json& j) {
  RefineRequest req;
  std::vector<FieldIssue> issues;
  FieldReader r(j, "", issues);
  r.known("schema_version");
  if (r.has("schema_version") && r.at("schema_version") != 1) r.issue("schema_version", "unsupported version");
  r.known("scene");
  if (r.has("scene")) {
    FieldReader s(r.at("scene"), "scene", issues);
    std::string profile = to_string(req.shapes.profile);
    s.string("profile", profile);
    try {
      req.shapes.profile = profile_from_string(profile);
    } catch (const Error&) {
      s.issue("profile", "unsupported profile '" + profile + "'");
    }
    s.number("clearance", req.shapes.clearance);
    s.check(req.shapes.clearance >= 0, "clearance", "must be >= 0");
    s.number("depth", req.shapes.depth);
    s.check(req.shapes.depth > 0, "depth", "must be > 0");
    s.number("sdf_cell", req.shapes.sdf_cell);
    s.check(req.shapes.sdf_cell > 0, "sdf_cell", "must be > 0");
    std::uint64_t n = req.shapes.surface_samples;
    s.unsigned_integer("surface_samples", n);
    req.shapes.surface_samples = n;
    s.number("sigma_t", req.noise.sigma_t);
    s.check(req.noise.sigma_t >= 0, "sigma_t", "must be >= 0");
    s.number("sigma_r", req.noise.sigma_r);
    s.check(req.noise.sigma_r >= 0, "sigma_r", "must be >= 0");
    s.unsigned_integer("seed", req.scene_seed);
    s.reject_unknown();
  }
  r.known("refinement");
  if (r.has("refinement")) read_refinement_config(r.at("refinement"), "refinement", req.refinement, issues);
  r.reject_unknown();
  throw_if_issues(std::move(issues));
  return req;
}

Json refine_request_to_json(const RefineRequest& r) {
  return Json{{"schema_version", 1},
              {"scene",
               {{"profile", to_string(r.shapes.profile)},
                {"clearance", r.shapes.clearance},
                {"depth", r.shapes.depth},
                {"sdf_cell", r.shapes.sdf_cell},
                {"surface_samples", r.shapes.surface_samples},
                {"sigma_t", r.noise.sigma_t},
                {"sigma_r", r.noise.sigma_r},
                {"seed", r.scene_seed}}},
              {"refinement", refinement_config_to_json(r.refinement)}};
}

RefineReport run_refine(const RefineRequest& request, const SkillRecord* record) {
  request.validate();
  PegHoleShapes shapes = make_peg_hole_shapes(request.shapes);
  if (record) {
    if (record->phase != Phase::manipulation) fail(ErrorKind::invalid_argument, "refine: record is not a manipulation skill");
    shapes.waypoint = record->master_keypoint.pose() * record->waypoints.waypoints.back() *
                      record->slave_keypoint.pose().inverse() * shapes.slave_kf;
  }
  const auto shared = std::make_shared<const PegHoleShapes>(std::move(shapes));
  const Scene scene = make_peg_hole_scene(shared, request.noise, request.scene_seed);
  const RefinementConfig& cfg = request.refinement;
  SimContactOracle oracle(scene, cfg.contact_model, cfg.probe, cfg.noise.contact_sigma, cfg.seed);
  RefineReport rep;
  rep.result = run_refinement(scene.problem(cfg.contact_model), scene.perceived_master_pose, scene.perceived_in_hand,
                              shared->waypoint, oracle, cfg);
  rep.vision = evaluate_insertion(scene, scene.perceived_in_hand);
  rep.refined = evaluate_insertion(scene, rep.result.estimate);
  rep.waypoint = shared->waypoint;
  rep.true_in_hand = scene.in_hand;
  return rep;
}

Json refine_report_to_json(const RefineReport& r) {
  auto outcome = [](const InsertionOutcome& o) {
    return Json{{"translation_error", o.translation_error},
                {"rotation_error", o.rotation_error},
                {"penetration", o.penetration},
                {"success", o.success}};
  };
  return Json{{"schema_version", 1},
              {"result", refinement_result_to_json(r.result)},
              {"vision", outcome(r.vision)},
              {"refined", outcome(r.refined)},
              {"waypoint", pose_to_json(r.waypoint)},
              {"true_in_hand", pose_to_json(r.true_in_hand)}};
}

}  // namespace keycontact
