#pragma once

#include "keycontact/keypoints/keypoint_frame.hpp"

namespace keycontact {

/// Either an SED error bound mu (m) or a kept fraction lambda in (0, 1].
struct SquishMode {
  enum class Kind { error_bound, ratio } kind = Kind::error_bound;
  double value = 0.001;

  static SquishMode error_bound(double mu) { return {Kind::error_bound, mu}; }
  static SquishMode ratio(double lambda) { return {Kind::ratio, lambda}; }
};

/// Synchronized Euclidean distance of `p` (at time t) from the
/// time-interpolated point between a (ta) and b (tb).
double synchronized_distance(const Vec3& p, double t, const Vec3& a, double ta, const Vec3& b, double tb);

/// SQUISH-E simplification over waypoint positions. Endpoints are kept and
/// the result is a subsequence. In error-bound mode every dropped waypoint
/// lies within mu (SED) of the segment joining its kept neighbours.
WaypointPath compress_squishe(const WaypointPath& path, const SquishMode& mode);

/// Indices of the kept waypoints (ascending).
std::vector<std::size_t> squishe_indices(const WaypointPath& path, const SquishMode& mode);

}  // namespace keycontact
