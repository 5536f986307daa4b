#include "keycontact/geometry/triangle_bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "keycontact/common/error.hpp"

namespace keycontact {

TriangleClosest closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection, 5.1.5).
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, 0};
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, 1};
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {a + v * ab, 3};
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, 2};
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {a + w * ac, 5};
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b + w * (c - b), 4};
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return {a + ab * v + ac * w, 6};
}

namespace {

double box_distance_sq(const Aabb& box, const Vec3& p) {
  const Vec3 d = (box.min - p).cwiseMax(p - box.max).cwiseMax(Vec3::Zero());
  return d.squaredNorm();
}

}  // namespace

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) : mesh_(&mesh) {
  mesh.validate();
  const std::size_t nf = mesh.faces.size();
  face_boxes_.resize(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) face_boxes_[f].extend(mesh.vertices[mesh.faces[f][k]]);
  }
  order_.resize(nf);
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * nf);
  build(0, static_cast<std::uint32_t>(nf));

  // Angle-weighted vertex pseudonormals and per-edge pseudonormals.
  vertex_normals_.assign(mesh.vertices.size(), Vec3::Zero());
  std::map<std::pair<int, int>, Vec3> edge_sum;
  for (std::size_t f = 0; f < nf; ++f) {
    const Face& t = mesh.faces[f];
    const Vec3 n = mesh.face_normal(f);
    for (int k = 0; k < 3; ++k) {
      const Vec3& v0 = mesh.vertices[t[k]];
      const Vec3 e1 = (mesh.vertices[t[(k + 1) % 3]] - v0).normalized();
      const Vec3 e2 = (mesh.vertices[t[(k + 2) % 3]] - v0).normalized();
      const double angle = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
      vertex_normals_[t[k]] += angle * n;
      const int a = t[k], b = t[(k + 1) % 3];
      edge_sum.try_emplace({std::min(a, b), std::max(a, b)}, Vec3::Zero()).first->second += n;
    }
  }
  edge_normals_.resize(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const Face& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      edge_normals_[f][k] = edge_sum.at({std::min(a, b), std::max(a, b)});
    }
  }
}

int TriangleBvh::build(std::uint32_t begin, std::uint32_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{});
  Aabb box;
  Aabb centers;
  for (std::uint32_t i = begin; i < end; ++i) {
    box.extend(face_boxes_[order_[i]]);
    centers.extend(face_boxes_[order_[i]].center());
  }
  nodes_[id].box = box;
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= 4) return id;
  int axis = 0;
  centers.extent().maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return face_boxes_[a].center()[axis] < face_boxes_[b].center()[axis];
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

TriangleBvh::Query TriangleBvh::closest(const Vec3& p) const {
  Query best{std::numeric_limits<double>::infinity(), Vec3::Zero(), 0, 6};
  closest_rec(0, p, best);
  best.distance = std::sqrt(best.distance);
  return best;
}

// `best.distance` holds a squared distance during the recursion.
void TriangleBvh::closest_rec(int node_id, const Vec3& p, Query& best) const {
  const Node& node = nodes_[node_id];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t f = order_[i];
      const Face& t = mesh_->faces[f];
      const TriangleClosest c =
          closest_point_on_triangle(p, mesh_->vertices[t[0]], mesh_->vertices[t[1]], mesh_->vertices[t[2]]);
      const double d2 = (c.point - p).squaredNorm();
      if (d2 < best.distance || (d2 == best.distance && f < best.face)) {
        best = {d2, c.point, f, c.feature};
      }
    }
    return;
  }
  const double dl = box_distance_sq(nodes_[node.left].box, p);
  const double dr = box_distance_sq(nodes_[node.right].box, p);
  const int first = dl <= dr ? node.left : node.right;
  const int second = dl <= dr ? node.right : node.left;
  if (std::min(dl, dr) <= best.distance) closest_rec(first, p, best);
  if (std::max(dl, dr) <= best.distance) closest_rec(second, p, best);
}

Vec3 TriangleBvh::pseudonormal(std::size_t face, int feature) const {
  const Face& t = mesh_->faces[face];
  switch (feature) {
    case 0: case 1: case 2: return vertex_normals_[t[feature]];
    case 3: return edge_normals_[face][0];
    case 4: return edge_normals_[face][1];
    case 5: return edge_normals_[face][2];
    default: return mesh_->face_normal(face);
  }
}

double TriangleBvh::signed_distance(const Vec3& p) const {
  const Query q = closest(p);
  if (q.distance == 0.0) return 0.0;
  const double s = (p - q.closest).dot(pseudonormal(q.face, q.feature));
  return s < 0.0 ? -q.distance : q.distance;
}

}  // namespace keycontact
