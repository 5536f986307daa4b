#include "keycontact/constraints/serialization.hpp"

namespace keycontact {

namespace {

std::string string_field(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = require_field(j, key, where);
  if (!v.is_string()) fail(ErrorKind::schema, where + "." + key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace

Json obb_to_json(const Obb& box) {
  return Json{{"center", vec3_to_json(box.center)},
              {"half_extents", vec3_to_json(box.half_extents)},
              {"orientation", quat_to_json(box.orientation)}};
}

Obb obb_from_json(const Json& j, const std::string& where) {
  Obb box;
  box.center = vec3_from_json(require_field(j, "center", where), where + ".center");
  box.half_extents = vec3_from_json(require_field(j, "half_extents", where), where + ".half_extents");
  box.orientation = quat_from_json(require_field(j, "orientation", where), where + ".orientation");
  try {
    box.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return box;
}

Json grasp_region_to_json(const GraspRegion& r) {
  return Json{{"schema_version", kConstraintSchemaVersion},
              {"position_min", vec3_to_json(r.position_min)},
              {"position_max", vec3_to_json(r.position_max)},
              {"mean_rotation", quat_to_json(r.mean_rotation)},
              {"angular_limit", vec3_to_json(r.angular_limit)},
              {"anchor", obb_to_json(r.anchor)},
              {"group_label", r.group_label},
              {"owner", r.owner}};
}

GraspRegion grasp_region_from_json(const Json& j, const std::string& where) {
  check_schema_version(j, kConstraintSchemaVersion, where);
  GraspRegion r;
  r.position_min = vec3_from_json(require_field(j, "position_min", where), where + ".position_min");
  r.position_max = vec3_from_json(require_field(j, "position_max", where), where + ".position_max");
  r.mean_rotation = quat_from_json(require_field(j, "mean_rotation", where), where + ".mean_rotation");
  r.angular_limit = vec3_from_json(require_field(j, "angular_limit", where), where + ".angular_limit");
  r.anchor = obb_from_json(require_field(j, "anchor", where), where + ".anchor");
  r.group_label = string_field(j, "group_label", where);
  r.owner = string_field(j, "owner", where);
  try {
    r.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return r;
}

namespace {

Json spec_body(const TrajectorySpec& spec) {
  Json bindings = Json::object();
  for (const auto& [name, expr] : spec.bindings) {
    if (expr.is_literal()) bindings[name] = expr.evaluate(Obb{});
    else bindings[name] = expr.text();
  }
  Json j{{"generator_id", spec.generator_id}, {"bindings", bindings}, {"resolution", spec.resolution}};
  if (!spec.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : spec.parts) parts.push_back(spec_body(p));
    j["parts"] = parts;
  }
  return j;
}

TrajectorySpec spec_from_body(const Json& j, const std::string& where) {
  TrajectorySpec spec;
  spec.generator_id = string_field(j, "generator_id", where);
  const Json& res = require_field(j, "resolution", where);
  if (!res.is_number_integer()) fail(ErrorKind::schema, where + ".resolution: expected an integer");
  spec.resolution = res.get<int>();
  const Json& b = require_field(j, "bindings", where);
  if (!b.is_object()) fail(ErrorKind::schema, where + ".bindings: expected an object");
  for (auto it = b.begin(); it != b.end(); ++it) {
    if (it->is_number()) spec.bindings.emplace(it.key(), Expression::literal(it->get<double>()));
    else if (it->is_string()) spec.bindings.emplace(it.key(), Expression::parse(it->get<std::string>()));
    else fail(ErrorKind::schema, where + ".bindings." + it.key() + ": expected a number or expression string");
  }
  if (j.contains("parts")) {
    const Json& parts = j["parts"];
    if (!parts.is_array()) fail(ErrorKind::schema, where + ".parts: expected an array");
    for (std::size_t i = 0; i < parts.size(); ++i)
      spec.parts.push_back(spec_from_body(parts[i], where + ".parts[" + std::to_string(i) + "]"));
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return spec;
}

}  // namespace

Json trajectory_spec_to_json(const TrajectorySpec& spec) {
  Json j = spec_body(spec);
  j["schema_version"] = kConstraintSchemaVersion;
  return j;
}

TrajectorySpec trajectory_spec_from_json(const Json& j, const std::string& where) {
  check_schema_version(j, kConstraintSchemaVersion, where);
  return spec_from_body(j, where);
}

Json semantic_constraint_to_json(const SemanticConstraint& c) {
  return Json{{"schema_version", kConstraintSchemaVersion},
              {"label", c.label},
              {"rationale", c.rationale},
              {"source", to_string(c.source)}};
}

SemanticConstraint semantic_constraint_from_json(const Json& j, const std::string& where) {
  check_schema_version(j, kConstraintSchemaVersion, where);
  SemanticConstraint c;
  c.label = string_field(j, "label", where);
  c.rationale = string_field(j, "rationale", where);
  c.source = constraint_source_from_string(string_field(j, "source", where));
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return c;
}

}  // namespace keycontact
