#include "keycontact/grounding/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

const char* to_string(Phase phase) { return phase == Phase::grasping ? "grasping" : "manipulation"; }

Phase phase_from_string(const std::string& s) {
  if (s == "grasping") return Phase::grasping;
  if (s == "manipulation") return Phase::manipulation;
  fail(ErrorKind::schema, "unknown phase '" + s + "'");
}

namespace {

void check_aligned(const TrackedEntity& a, const TrackedEntity& b) {
  a.validate();
  b.validate();
  if (a.size() != b.size()) fail(ErrorKind::invalid_argument, "entities '" + a.id + "' and '" + b.id + "' differ in length");
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (std::abs(a.timestamps[t] - b.timestamps[t]) > 1e-9) {
      fail(ErrorKind::invalid_argument, "entities '" + a.id + "' and '" + b.id + "' are on different time bases");
    }
  }
}

}  // namespace

std::vector<double> distance_series(const TrackedEntity& a, const TrackedEntity& b) {
  check_aligned(a, b);
  std::vector<double> d(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) d[t] = cloud_min_distance(a.clouds[t], b.clouds[t]);
  return d;
}

std::vector<ContactInterval> markers_from_distances(std::span<const double> d, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorKind::invalid_argument, "contact threshold must be positive");
  std::vector<ContactInterval> out;
  bool open = false;
  std::size_t start = 0;
  for (std::size_t t = 1; t < d.size(); ++t) {
    if (!open && d[t - 1] > epsilon && d[t] < epsilon) {
      open = true;
      start = t;
    } else if (open && d[t - 1] < epsilon && d[t] > epsilon) {
      out.push_back({start, t});
      open = false;
    }
  }
  if (open && start + 1 < d.size()) out.push_back({start, d.size() - 1});
  return out;
}

std::vector<ContactInterval> contact_markers(const TrackedEntity& a, const TrackedEntity& b, double epsilon) {
  const auto d = distance_series(a, b);
  return markers_from_distances(d, epsilon);
}

double hand_path_length(const TrackedEntity& hand, std::size_t t_b, std::size_t t_e) {
  if (t_e >= hand.clouds.size() || t_b > t_e) fail(ErrorKind::invalid_argument, "segment outside hand trajectory");
  double length = 0.0;
  for (std::size_t t = t_b + 1; t <= t_e; ++t) length += (hand.centroid(t) - hand.centroid(t - 1)).norm();
  return length;
}

std::vector<Segment> filter_segments(const std::vector<Segment>& segments, const TrackedEntity& hand, double gamma) {
  std::vector<Segment> kept;
  for (const Segment& s : segments) {
    if (hand_path_length(hand, s.t_b, s.t_e) >= gamma) kept.push_back(s);
  }
  return kept;
}

std::vector<Segment> segment_demonstration(const std::vector<TrackedEntity>& entities, const std::string& hand_id,
                                           double epsilon, double gamma) {
  const TrackedEntity* hand = nullptr;
  for (const auto& e : entities)
    if (e.id == hand_id) hand = &e;
  if (!hand) fail(ErrorKind::not_found, "hand entity '" + hand_id + "' not found");

  std::vector<Segment> segments;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (std::size_t j = i + 1; j < entities.size(); ++j) {
      const TrackedEntity& a = entities[i];
      const TrackedEntity& b = entities[j];
      for (const ContactInterval& c : contact_markers(a, b, epsilon)) {
        Segment s;
        s.t_b = c.t_b;
        s.t_e = c.t_e;
        if (a.id == hand_id || b.id == hand_id) {
          s.phase = Phase::grasping;
          s.slave_id = hand_id;
          s.master_id = a.id == hand_id ? b.id : a.id;
        } else {
          s.phase = Phase::manipulation;
          const double ta = hand_path_length(a, 0, c.t_e);
          const double tb = hand_path_length(b, 0, c.t_e);
          const bool a_moves = ta > tb || (ta == tb && a.id > b.id);
          s.slave_id = a_moves ? a.id : b.id;
          s.master_id = a_moves ? b.id : a.id;
        }
        segments.push_back(s);
      }
    }
  }
  std::sort(segments.begin(), segments.end(), [](const Segment& x, const Segment& y) {
    return std::tie(x.t_b, x.master_id, x.slave_id) < std::tie(y.t_b, y.master_id, y.slave_id);
  });
  return filter_segments(segments, *hand, gamma);
}

}  // namespace keycontact
