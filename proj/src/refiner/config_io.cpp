#include "keycontact/refiner/config_io.hpp"

namespace keycontact {

Json noise_config_to_json(const NoiseConfig& c) {
  return Json{{"process_sigma_t", c.process_sigma_t}, {"process_sigma_r", c.process_sigma_r},
              {"prior_sigma_t", c.prior_sigma_t},     {"prior_sigma_r", c.prior_sigma_r},
              {"d_th", c.d_th},                       {"contact_sigma", c.contact_sigma}};
}

Json refinement_config_to_json(const RefinementConfig& c) {
  return Json{{"schema_version", 1},
              {"noise", noise_config_to_json(c.noise)},
              {"particles", c.particles},
              {"contacts", c.contacts},
              {"positions", c.positions},
              {"orientations", c.orientations},
              {"scenarios", c.scenarios},
              {"downsample", c.downsample},
              {"selection", to_string(c.selection)},
              {"contact_model", to_string(c.contact_model)},
              {"probe",
               {{"standoff", c.probe.standoff},
                {"step", c.probe.step},
                {"max_travel", c.probe.max_travel},
                {"tolerance", c.probe.tolerance}}},
              {"max_divergences", c.max_divergences},
              {"max_attempts", c.max_attempts},
              {"seed", c.seed}};
}

void read_refinement_config(const Json& j, const std::string& prefix, RefinementConfig& c,
                            std::vector<FieldIssue>& issues) {
  FieldReader r(j, prefix, issues);
  r.known("schema_version");
  if (r.has("schema_version") && r.at("schema_version") != 1) r.issue("schema_version", "unsupported version");
  r.known("noise");
  if (r.has("noise")) {
    FieldReader q(r.at("noise"), r.path("noise"), issues);
    NoiseConfig& n = c.noise;
    q.number("process_sigma_t", n.process_sigma_t);
    q.check(n.process_sigma_t >= 0, "process_sigma_t", "must be >= 0");
    q.number("process_sigma_r", n.process_sigma_r);
    q.check(n.process_sigma_r >= 0, "process_sigma_r", "must be >= 0");
    q.number("prior_sigma_t", n.prior_sigma_t);
    q.check(n.prior_sigma_t >= 0, "prior_sigma_t", "must be >= 0");
    q.number("prior_sigma_r", n.prior_sigma_r);
    q.check(n.prior_sigma_r >= 0, "prior_sigma_r", "must be >= 0");
    q.number("d_th", n.d_th);
    q.check(n.d_th > 0, "d_th", "must be > 0");
    q.number("contact_sigma", n.contact_sigma);
    q.check(n.contact_sigma >= 0, "contact_sigma", "must be >= 0");
    q.reject_unknown();
  }
  std::uint64_t particles = c.particles;
  r.unsigned_integer("particles", particles);
  r.check(particles >= 2, "particles", "must be >= 2");
  c.particles = particles;
  r.integer("contacts", c.contacts);
  r.check(c.contacts >= 0, "contacts", "must be >= 0");
  r.integer("positions", c.positions);
  r.check(c.positions >= 1, "positions", "must be >= 1");
  r.integer("orientations", c.orientations);
  r.check(c.orientations >= 1, "orientations", "must be >= 1");
  r.integer("scenarios", c.scenarios);
  r.check(c.scenarios >= 1, "scenarios", "must be >= 1");
  r.integer("downsample", c.downsample);
  r.check(c.downsample >= 1, "downsample", "must be >= 1");
  std::string sel = to_string(c.selection);
  r.string("selection", sel);
  if (sel == "ig" || sel == "random") {
    c.selection = selection_mode_from_string(sel);
  } else {
    r.issue("selection", "expected 'ig' or 'random'");
  }
  std::string model = to_string(c.contact_model);
  r.string("contact_model", model);
  if (model == "keypoint" || model == "slave_surface") {
    c.contact_model = contact_model_from_string(model);
  } else {
    r.issue("contact_model", "expected 'keypoint' or 'slave_surface'");
  }
  r.known("probe");
  if (r.has("probe")) {
    FieldReader q(r.at("probe"), r.path("probe"), issues);
    q.number("standoff", c.probe.standoff);
    q.check(c.probe.standoff >= 0, "standoff", "must be >= 0");
    q.number("step", c.probe.step);
    q.check(c.probe.step > 0, "step", "must be > 0");
    q.number("max_travel", c.probe.max_travel);
    q.check(c.probe.max_travel > 0, "max_travel", "must be > 0");
    q.number("tolerance", c.probe.tolerance);
    q.check(c.probe.tolerance > 0, "tolerance", "must be > 0");
    q.reject_unknown();
  }
  r.integer("max_divergences", c.max_divergences);
  r.check(c.max_divergences >= 1, "max_divergences", "must be >= 1");
  r.integer("max_attempts", c.max_attempts);
  r.check(c.max_attempts >= 1, "max_attempts", "must be >= 1");
  r.unsigned_integer("seed", c.seed);
  r.reject_unknown();
}

RefinementConfig refinement_config_from_json(const Json& j) {
  RefinementConfig c;
  std::vector<FieldIssue> issues;
  read_refinement_config(j, "", c, issues);
  throw_if_issues(std::move(issues));
  return c;
}

Json collision_search_config_to_json(const CollisionSearchConfig& c) {
  return Json{{"schema_version", 1},       {"radius_t", c.radius_t}, {"radius_r", c.radius_r},
              {"samples", c.samples},      {"rounds", c.rounds},
              {"penetration_tolerance", c.penetration_tolerance}, {"seed", c.seed}};
}

CollisionSearchConfig collision_search_config_from_json(const Json& j) {
  CollisionSearchConfig c;
  std::vector<FieldIssue> issues;
  FieldReader r(j, "", issues);
  r.known("schema_version");
  r.number("radius_t", c.radius_t);
  r.check(c.radius_t > 0, "radius_t", "must be > 0");
  r.number("radius_r", c.radius_r);
  r.check(c.radius_r > 0, "radius_r", "must be > 0");
  r.integer("samples", c.samples);
  r.check(c.samples >= 1, "samples", "must be >= 1");
  r.integer("rounds", c.rounds);
  r.check(c.rounds >= 1, "rounds", "must be >= 1");
  r.number("penetration_tolerance", c.penetration_tolerance);
  r.check(c.penetration_tolerance >= 0, "penetration_tolerance", "must be >= 0");
  r.unsigned_integer("seed", c.seed);
  r.reject_unknown();
  throw_if_issues(std::move(issues));
  return c;
}

Json contact_strategy_to_json(const ContactStrategy& s) {
  return Json{{"point", vec3_to_json(s.point)},
              {"normal", vec3_to_json(s.normal())},
              {"azimuth", s.azimuth},
              {"elevation", s.elevation},
              {"roll", s.roll},
              {"approach", vec3_to_json(s.approach())}};
}

Json step_diagnostics_to_json(const StepDiagnostics& d) {
  Json j{{"step", d.step},
         {"contact", d.contact},
         {"attempts", d.attempts},
         {"expected_ig", d.expected_ig},
         {"diverged", d.diverged},
         {"weight_entropy", d.weight_entropy},
         {"pose_entropy", d.pose_entropy},
         {"ess", d.ess},
         {"resampled", d.resampled},
         {"estimate", pose_to_json(d.estimate)}};
  j["strategy_index"] = d.strategy_index ? Json(*d.strategy_index) : Json(nullptr);
  j["strategy"] = d.strategy ? contact_strategy_to_json(*d.strategy) : Json(nullptr);
  j["translation_error"] = d.translation_error ? Json(*d.translation_error) : Json(nullptr);
  j["rotation_error"] = d.rotation_error ? Json(*d.rotation_error) : Json(nullptr);
  return j;
}

Json refinement_result_to_json(const RefinementResult& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(step_diagnostics_to_json(s));
  return Json{{"schema_version", 1},
              {"initial", pose_to_json(r.initial)},
              {"estimate", pose_to_json(r.estimate)},
              {"end_effector", pose_to_json(r.end_effector)},
              {"initial_pose_entropy", r.initial_pose_entropy},
              {"aborted", r.aborted},
              {"contacts_made", r.contacts_made},
              {"steps", steps}};
}

}  // namespace keycontact
