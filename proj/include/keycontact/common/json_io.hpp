#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "keycontact/common/error.hpp"
#include "keycontact/geometry/pose.hpp"

namespace keycontact {

using Json = nlohmann::json;

inline Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Json quat_to_json(const Quat& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }

/// {"rotation": [w, x, y, z], "translation": [x, y, z]}
inline Json pose_to_json(const Pose& p) {
  return Json{{"rotation", quat_to_json(p.rotation())}, {"translation", vec3_to_json(p.translation())}};
}

inline const Json& require_field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::schema, where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number_from_json(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(ErrorKind::schema, where + ": expected a number");
  return j.get<double>();
}

inline std::vector<double> numbers_from_json(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) {
    fail(ErrorKind::schema, where + ": expected an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(number_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Vec3 vec3_from_json(const Json& j, const std::string& where) {
  const auto v = numbers_from_json(j, 3, where);
  return {v[0], v[1], v[2]};
}

inline Quat quat_from_json(const Json& j, const std::string& where) {
  const auto v = numbers_from_json(j, 4, where);
  Quat q(v[0], v[1], v[2], v[3]);
  if (!(q.norm() > 1e-12)) fail(ErrorKind::schema, where + ": zero quaternion");
  return q.normalized();
}

inline Pose pose_from_json(const Json& j, const std::string& where) {
  return {quat_from_json(require_field(j, "rotation", where), where + ".rotation"),
          vec3_from_json(require_field(j, "translation", where), where + ".translation")};
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::schema, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j, int indent = 2) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << j.dump(indent) << '\n';
  if (!out) fail(ErrorKind::io, "failed writing " + path.string());
}

/// Checks the mandatory schema_version field.
inline void check_schema_version(const Json& j, int expected, const std::string& where) {
  const Json& v = require_field(j, "schema_version", where);
  if (!v.is_number_integer() || v.get<int>() != expected) {
    fail(ErrorKind::schema, where + ": unsupported schema_version " + v.dump() + " (expected " +
                                std::to_string(expected) + ")");
  }
}

}  // namespace keycontact
