#include "keycontact/geometry/point_cloud.hpp"

#include <cmath>
#include <limits>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/kd_tree.hpp"

namespace keycontact {

void PointCloud::validate() const {
  if (has_features() && static_cast<std::size_t>(features.rows()) != points.size()) {
    fail(ErrorKind::invalid_argument, "feature rows must match point count");
  }
  for (const auto& p : points) {
    if (!p.allFinite()) fail(ErrorKind::invalid_argument, "point cloud contains non-finite point");
  }
}

Vec3 PointCloud::centroid() const {
  if (points.empty()) fail(ErrorKind::invalid_argument, "centroid of empty cloud");
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p;
  return c / static_cast<double>(points.size());
}

PointCloud PointCloud::transformed(const Pose& pose) const {
  PointCloud out;
  out.points.reserve(points.size());
  for (const auto& p : points) out.points.push_back(pose * p);
  out.features = features;
  return out;
}

double cloud_min_distance(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::invalid_argument, "cloud_min_distance: empty cloud");
  // Query the smaller cloud against a tree over the larger one; the pair set
  // and per-pair arithmetic are the same either way, so the result is
  // symmetric bit-for-bit.
  const PointCloud& tree_cloud = a.size() >= b.size() ? a : b;
  const PointCloud& query_cloud = a.size() >= b.size() ? b : a;
  KdTree3 tree(tree_cloud.points);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : query_cloud.points) {
    best = std::min(best, tree.nearest(q).distance_sq);
    if (best == 0.0) break;
  }
  return std::sqrt(best);
}

}  // namespace keycontact
