#include "keycontact/bank/records.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>

#include "keycontact/constraints/serialization.hpp"
#include "keycontact/keypoints/serialization.hpp"

namespace keycontact {

namespace {

void check_version(const Json& j, const std::string& where) {
  const Json& v = require_field(j, "schema_version", where);
  if (!v.is_number_integer() || v.get<int>() != kBankSchemaVersion) {
    fail(ErrorKind::schema, where + ": unsupported schema_version " + v.dump());
  }
}

std::string string_field(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = require_field(j, key, where);
  if (!v.is_string()) fail(ErrorKind::schema, where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<std::string> strings_field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) return {};
  const Json& v = j.at(key);
  if (!v.is_array()) fail(ErrorKind::schema, where + "." + key + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) fail(ErrorKind::schema, where + "." + key + ": expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

bool is_hex_digest(const std::string& s) {
  return s.size() == 64 && s.find_first_not_of("0123456789abcdef") == std::string::npos;
}

}  // namespace

void SkillRecord::validate() const {
  if (subtask.empty()) fail(ErrorKind::invalid_argument, "skill record: empty subtask description");
  if (master_id.empty() || slave_id.empty()) fail(ErrorKind::invalid_argument, "skill record: empty object id");
  master_keypoint.validate();
  slave_keypoint.validate();
  waypoints.validate();
  for (const auto& g : grasp_regions) g.validate();
  if (trajectory) trajectory->validate();
  for (const auto& c : constraints) c.validate();
  for (const auto& m : meshes) {
    if (m.path.empty()) fail(ErrorKind::invalid_argument, "skill record: mesh reference without a path");
    if (!is_hex_digest(m.sha256)) fail(ErrorKind::invalid_argument, "skill record: mesh hash must be 64 hex digits");
  }
  if (provenance.t_end < provenance.t_begin) fail(ErrorKind::invalid_argument, "skill record: t_end < t_begin");
}

void PlanRecord::validate() const {
  if (task.empty()) fail(ErrorKind::invalid_argument, "plan record: empty task description");
  if (subtasks.empty()) fail(ErrorKind::invalid_argument, "plan record: needs at least one subtask");
}

Json skill_record_to_json(const SkillRecord& r) {
  Json regions = Json::array(), constraints = Json::array(), meshes = Json::array();
  for (const auto& g : r.grasp_regions) regions.push_back(grasp_region_to_json(g));
  for (const auto& c : r.constraints) constraints.push_back(semantic_constraint_to_json(c));
  for (const auto& m : r.meshes) meshes.push_back({{"object_id", m.object_id}, {"path", m.path}, {"sha256", m.sha256}});
  const auto& p = r.provenance;
  Json j{{"schema_version", kBankSchemaVersion},
         {"kind", "skill"},
         {"subtask", r.subtask},
         {"phase", to_string(r.phase)},
         {"master_id", r.master_id},
         {"slave_id", r.slave_id},
         {"master_keypoint", keypoint_frame_to_json(r.master_keypoint)},
         {"slave_keypoint", keypoint_frame_to_json(r.slave_keypoint)},
         {"waypoints", waypoint_path_to_json(r.waypoints)},
         {"grasp_regions", regions},
         {"semantic_constraints", constraints},
         {"meshes", meshes},
         {"labels", r.labels},
         {"provenance",
          {{"demo_id", p.demo_id},
           {"source", p.source},
           {"t_begin", p.t_begin},
           {"t_end", p.t_end},
           {"frame_begin", p.frame_begin},
           {"frame_end", p.frame_end}}}};
  if (r.trajectory) j["trajectory_spec"] = trajectory_spec_to_json(*r.trajectory);
  return j;
}

SkillRecord skill_record_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::schema, where + ": expected an object");
  check_version(j, where);
  if (string_field(j, "kind", where) != "skill") fail(ErrorKind::schema, where + ": kind is not 'skill'");
  SkillRecord r;
  r.subtask = string_field(j, "subtask", where);
  try {
    r.phase = phase_from_string(string_field(j, "phase", where));
  } catch (const Error&) {
    fail(ErrorKind::schema, where + ".phase: expected 'grasping' or 'manipulation'");
  }
  r.master_id = string_field(j, "master_id", where);
  r.slave_id = string_field(j, "slave_id", where);
  r.master_keypoint = keypoint_frame_from_json(require_field(j, "master_keypoint", where), where + ".master_keypoint");
  r.slave_keypoint = keypoint_frame_from_json(require_field(j, "slave_keypoint", where), where + ".slave_keypoint");
  r.waypoints = waypoint_path_from_json(require_field(j, "waypoints", where), where + ".waypoints");
  auto array_field = [&](const std::string& key) -> const Json& {
    const Json& v = require_field(j, key, where);
    if (!v.is_array()) fail(ErrorKind::schema, where + "." + key + ": expected an array");
    return v;
  };
  const Json& regions = array_field("grasp_regions");
  for (std::size_t i = 0; i < regions.size(); ++i)
    r.grasp_regions.push_back(grasp_region_from_json(regions[i], where + ".grasp_regions[" + std::to_string(i) + "]"));
  const Json& cons = array_field("semantic_constraints");
  for (std::size_t i = 0; i < cons.size(); ++i)
    r.constraints.push_back(
        semantic_constraint_from_json(cons[i], where + ".semantic_constraints[" + std::to_string(i) + "]"));
  const Json& meshes = array_field("meshes");
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const std::string w = where + ".meshes[" + std::to_string(i) + "]";
    r.meshes.push_back({string_field(meshes[i], "object_id", w), string_field(meshes[i], "path", w),
                        string_field(meshes[i], "sha256", w)});
  }
  r.labels = strings_field(j, "labels", where);
  if (j.contains("trajectory_spec"))
    r.trajectory = trajectory_spec_from_json(j.at("trajectory_spec"), where + ".trajectory_spec");
  const Json& p = require_field(j, "provenance", where);
  const std::string pw = where + ".provenance";
  r.provenance.demo_id = string_field(p, "demo_id", pw);
  r.provenance.source = string_field(p, "source", pw);
  r.provenance.t_begin = number_from_json(require_field(p, "t_begin", pw), pw + ".t_begin");
  r.provenance.t_end = number_from_json(require_field(p, "t_end", pw), pw + ".t_end");
  for (const char* k : {"frame_begin", "frame_end"}) {
    const Json& v = require_field(p, k, pw);
    if (!v.is_number_unsigned()) fail(ErrorKind::schema, pw + "." + k + ": expected a non-negative integer");
  }
  r.provenance.frame_begin = p.at("frame_begin").get<std::size_t>();
  r.provenance.frame_end = p.at("frame_end").get<std::size_t>();
  try {
    r.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return r;
}

Json plan_record_to_json(const PlanRecord& r) {
  return Json{{"schema_version", kBankSchemaVersion}, {"kind", "plan"}, {"task", r.task}, {"subtasks", r.subtasks}};
}

PlanRecord plan_record_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::schema, where + ": expected an object");
  check_version(j, where);
  if (string_field(j, "kind", where) != "plan") fail(ErrorKind::schema, where + ": kind is not 'plan'");
  PlanRecord r;
  r.task = string_field(j, "task", where);
  r.subtasks = strings_field(j, "subtasks", where);
  try {
    r.validate();
  } catch (const Error& e) {
    fail(ErrorKind::schema, where + ": " + e.what());
  }
  return r;
}

std::string canonical_json(const Json& j) { return j.dump(); }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::io, "sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::not_found, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

void check_mesh_references(const SkillRecord& r, const std::filesystem::path& base) {
  for (const auto& m : r.meshes) {
    std::filesystem::path p(m.path);
    if (p.is_relative() && !base.empty()) p = base / p;
    if (!std::filesystem::exists(p)) fail(ErrorKind::not_found, "mesh for '" + m.object_id + "' not found: " + p.string());
    if (file_sha256(p) != m.sha256) fail(ErrorKind::schema, "mesh for '" + m.object_id + "' does not match its hash");
  }
}

}  // namespace keycontact
