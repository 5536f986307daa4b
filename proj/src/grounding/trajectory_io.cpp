#include "keycontact/grounding/trajectory_io.hpp"

#include <fstream>
#include <map>

#include "keycontact/geometry/mesh_io.hpp"

namespace keycontact {

namespace {

constexpr int kSegmentSchema = 1;

std::vector<Vec3> points_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::schema, where + ": expected an array of points");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec3_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json points_to_json(const std::vector<Vec3>& pts) {
  Json arr = Json::array();
  for (const Vec3& p : pts) arr.push_back(vec3_to_json(p));
  return arr;
}

}  // namespace

HandLandmarks landmarks_from_json(const Json& j, const std::string& where) {
  HandLandmarks h;
  h.thumb_points = points_from_json(require_field(j, "thumb", where), where + ".thumb");
  h.index_points = points_from_json(require_field(j, "index", where), where + ".index");
  return h;
}

Json landmarks_to_json(const HandLandmarks& h) {
  return Json{{"thumb", points_to_json(h.thumb_points)}, {"index", points_to_json(h.index_points)}};
}

std::vector<TrackedEntity> read_trajectories(const std::filesystem::path& jsonl) {
  std::ifstream in(jsonl);
  if (!in) fail(ErrorKind::io, "cannot open " + jsonl.string());
  const auto base = jsonl.parent_path();
  std::vector<TrackedEntity> entities;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = jsonl.filename().string() + ":" + std::to_string(lineno);
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const Json::parse_error& e) {
      fail(ErrorKind::schema, where + ": " + e.what());
    }
    const double t = number_from_json(require_field(rec, "t", where), where + ".t");
    const Json& id_json = require_field(rec, "entity_id", where);
    if (!id_json.is_string()) fail(ErrorKind::schema, where + ".entity_id: expected a string");
    const std::string id = id_json.get<std::string>();
    const Pose pose = pose_from_json(require_field(rec, "pose", where), where + ".pose");
    const Json& ref = require_field(rec, "cloud_ref", where);
    if (!ref.is_string()) fail(ErrorKind::schema, where + ".cloud_ref: expected a string");
    PointCloud cloud = read_ply_cloud(base / ref.get<std::string>());
    const std::string frame = rec.value("cloud_frame", std::string("world"));
    if (frame == "object") {
      cloud = cloud.transformed(pose);
    } else if (frame != "world") {
      fail(ErrorKind::schema, where + ".cloud_frame: expected 'world' or 'object'");
    }

    auto [it, inserted] = index.try_emplace(id, entities.size());
    if (inserted) entities.push_back(TrackedEntity{id, {}, {}, {}, {}});
    TrackedEntity& e = entities[it->second];
    const bool has_landmarks = rec.contains("landmarks");
    if (!e.timestamps.empty() && has_landmarks != !e.landmarks.empty()) {
      fail(ErrorKind::schema, where + ": landmarks must be present on every frame of an entity or none");
    }
    e.timestamps.push_back(t);
    e.poses.push_back(pose);
    e.clouds.push_back(std::move(cloud));
    if (has_landmarks) e.landmarks.push_back(landmarks_from_json(rec["landmarks"], where + ".landmarks"));
  }
  for (const auto& e : entities) e.validate();
  return entities;
}

void write_trajectories(const std::vector<TrackedEntity>& entities, const std::filesystem::path& jsonl) {
  const auto base = jsonl.parent_path();
  std::filesystem::create_directories(base / "clouds");
  std::ofstream out(jsonl);
  if (!out) fail(ErrorKind::io, "cannot write " + jsonl.string());
  std::size_t frames = 0;
  for (const auto& e : entities) frames = std::max(frames, e.size());
  for (std::size_t t = 0; t < frames; ++t) {
    for (const auto& e : entities) {
      if (t >= e.size()) continue;
      const std::string ref = "clouds/" + e.id + "_" + std::to_string(t) + ".ply";
      write_ply_cloud(e.clouds[t], base / ref);
      Json rec{{"t", e.timestamps[t]}, {"entity_id", e.id}, {"pose", pose_to_json(e.poses[t])}, {"cloud_ref", ref}};
      if (!e.landmarks.empty()) rec["landmarks"] = landmarks_to_json(e.landmarks[t]);
      out << rec.dump() << '\n';
    }
  }
  if (!out) fail(ErrorKind::io, "failed writing " + jsonl.string());
}

Json segments_to_json(const std::vector<Segment>& segments, const std::vector<double>& timestamps) {
  Json arr = Json::array();
  for (const Segment& s : segments) {
    Json j{{"t_b", s.t_b},
           {"t_e", s.t_e},
           {"master_id", s.master_id},
           {"slave_id", s.slave_id},
           {"phase", to_string(s.phase)}};
    if (s.t_e < timestamps.size()) {
      j["t_b_time"] = timestamps[s.t_b];
      j["t_e_time"] = timestamps[s.t_e];
    }
    arr.push_back(std::move(j));
  }
  return Json{{"schema_version", kSegmentSchema}, {"segments", std::move(arr)}};
}

std::vector<Segment> segments_from_json(const Json& j) {
  check_schema_version(j, kSegmentSchema, "segments");
  const Json& arr = require_field(j, "segments", "segments");
  if (!arr.is_array()) fail(ErrorKind::schema, "segments.segments: expected an array");
  std::vector<Segment> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "segments[" + std::to_string(i) + "]";
    const Json& s = arr[i];
    Segment seg;
    seg.t_b = static_cast<std::size_t>(number_from_json(require_field(s, "t_b", where), where + ".t_b"));
    seg.t_e = static_cast<std::size_t>(number_from_json(require_field(s, "t_e", where), where + ".t_e"));
    seg.master_id = require_field(s, "master_id", where).get<std::string>();
    seg.slave_id = require_field(s, "slave_id", where).get<std::string>();
    seg.phase = phase_from_string(require_field(s, "phase", where).get<std::string>());
    if (seg.t_b >= seg.t_e) fail(ErrorKind::schema, where + ": t_b must be before t_e");
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace keycontact
