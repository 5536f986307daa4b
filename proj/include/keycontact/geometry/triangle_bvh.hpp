#pragma once

#include <array>
#include <vector>

#include "keycontact/geometry/mesh.hpp"

namespace keycontact {

/// Closest point on triangle (a, b, c) to p. `feature` encodes the region:
/// 0..2 vertex a/b/c, 3..5 edge ab/bc/ca, 6 interior.
struct TriangleClosest {
  Vec3 point;
  int feature;
};
TriangleClosest closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Bounding-volume hierarchy over a mesh for exact distance queries. The
/// sign of the signed distance uses angle-weighted pseudonormals, which is
/// exact for closed, consistently oriented meshes.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriangleMesh& mesh);

  struct Query {
    double distance;  // unsigned
    Vec3 closest;
    std::size_t face;
    int feature;
  };

  Query closest(const Vec3& p) const;
  double signed_distance(const Vec3& p) const;

 private:
  struct Node {
    Aabb box;
    int left = -1, right = -1;
    std::uint32_t begin = 0, end = 0;
  };

  int build(std::uint32_t begin, std::uint32_t end);
  void closest_rec(int node, const Vec3& p, Query& best) const;
  Vec3 pseudonormal(std::size_t face, int feature) const;

  const TriangleMesh* mesh_;
  std::vector<std::uint32_t> order_;
  std::vector<Aabb> face_boxes_;
  std::vector<Node> nodes_;
  std::vector<Vec3> vertex_normals_;
  std::vector<std::array<Vec3, 3>> edge_normals_;  // per face, edges ab, bc, ca
};

}  // namespace keycontact
