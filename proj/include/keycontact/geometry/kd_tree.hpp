#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "keycontact/geometry/pose.hpp"

namespace keycontact {

/// Static 3-D k-d tree over a borrowed point array. Nearest-neighbour ties
/// resolve to the lowest point index so results match an exhaustive scan.
class KdTree3 {
 public:
  explicit KdTree3(std::span<const Vec3> points);

  struct Hit {
    std::size_t index;
    double distance_sq;
  };

  Hit nearest(const Vec3& query) const;
  /// Indices of all points within `radius` (inclusive), ascending.
  std::vector<std::size_t> radius_search(const Vec3& query, double radius) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t begin, end;  // range into order_
    std::int32_t left = -1, right = -1;
    int axis = -1;  // -1 for leaves
    double split = 0.0;
  };

  int build(std::uint32_t begin, std::uint32_t end, int depth);
  void nearest_rec(int node, const Vec3& q, Hit& best) const;
  void radius_rec(int node, const Vec3& q, double r2, std::vector<std::size_t>& out) const;

  std::span<const Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace keycontact
