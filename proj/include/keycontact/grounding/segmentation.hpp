#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "keycontact/grounding/tracked_entity.hpp"

namespace keycontact {

enum class Phase { grasping, manipulation };
const char* to_string(Phase phase);
Phase phase_from_string(const std::string& s);

struct ContactInterval {
  std::size_t t_b;
  std::size_t t_e;
  bool operator==(const ContactInterval&) const = default;
};

struct Segment {
  std::size_t t_b = 0;
  std::size_t t_e = 0;
  std::string master_id;
  std::string slave_id;
  Phase phase = Phase::manipulation;
  bool operator==(const Segment&) const = default;
};

/// Per-frame minimum distance between the two entities' clouds.
std::vector<double> distance_series(const TrackedEntity& a, const TrackedEntity& b);

/// Strict threshold crossings: t_b where d[t-1] > eps and d[t] < eps, t_e
/// where d[t-1] < eps and d[t] > eps. Values equal to eps never cross. A
/// contact still open at the end closes at the last index; a t_b while a
/// contact is open and a t_e while none is open are ignored.
std::vector<ContactInterval> markers_from_distances(std::span<const double> distances, double epsilon);

/// Contact intervals between two entities on a shared time base.
std::vector<ContactInterval> contact_markers(const TrackedEntity& a, const TrackedEntity& b, double epsilon = 0.02);

/// Sum of frame-to-frame centroid displacements over [t_b, t_e].
double hand_path_length(const TrackedEntity& hand, std::size_t t_b, std::size_t t_e);

/// Keeps segments whose hand path length is at least gamma, in order.
std::vector<Segment> filter_segments(const std::vector<Segment>& segments, const TrackedEntity& hand,
                                     double gamma = 0.05);

/// Segments every entity pair. A pair involving the hand is a grasping
/// segment with the hand as slave; otherwise the slave is the entity whose
/// centroid travelled further from the first frame to t_e (ties: the lower
/// id is master).
/// Results are sorted by (t_b, master_id, slave_id).
std::vector<Segment> segment_demonstration(const std::vector<TrackedEntity>& entities, const std::string& hand_id,
                                           double epsilon = 0.02, double gamma = 0.05);

}  // namespace keycontact
