#include "keycontact/geometry/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/hash.hpp"

namespace keycontact {

void Obb::validate() const {
  if (!(half_extents.array() > 0.0).all()) {
    fail(ErrorKind::invalid_argument, "Obb half-extents must be positive");
  }
}

Obb Obb::transformed(const Pose& pose) const {
  Obb out = *this;
  out.center = pose * center;
  out.orientation = (pose.rotation() * orientation).normalized();
  return out;
}

void TriangleMesh::validate() const {
  if (vertices.empty() || faces.empty()) fail(ErrorKind::invalid_argument, "mesh is empty");
  const int n = static_cast<int>(vertices.size());
  for (const auto& f : faces) {
    for (int k = 0; k < 3; ++k) {
      if (f[k] < 0 || f[k] >= n) fail(ErrorKind::invalid_argument, "mesh face index out of range");
    }
  }
  for (const auto& v : vertices) {
    if (!v.allFinite()) fail(ErrorKind::invalid_argument, "mesh has non-finite vertex");
  }
}

Aabb TriangleMesh::bounds() const {
  Aabb box;
  for (const auto& v : vertices) box.extend(v);
  return box;
}

Vec3 TriangleMesh::face_normal(std::size_t f) const {
  const Face& t = faces[f];
  const Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

double TriangleMesh::face_area(std::size_t f) const {
  const Face& t = faces[f];
  return 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
}

double TriangleMesh::surface_area() const {
  double a = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) a += face_area(f);
  return a;
}

double TriangleMesh::volume() const {
  double v = 0.0;
  for (const auto& t : faces) {
    v += vertices[t[0]].dot(vertices[t[1]].cross(vertices[t[2]]));
  }
  return v / 6.0;
}

TriangleMesh TriangleMesh::transformed(const Pose& pose) const {
  TriangleMesh out = *this;
  for (auto& v : out.vertices) v = pose * v;
  return out;
}

std::uint64_t TriangleMesh::content_hash() const {
  Fnv1a64 h;
  h.update_value(static_cast<std::uint64_t>(vertices.size()));
  for (const auto& v : vertices) h.update(v.data(), 3 * sizeof(double));
  h.update_value(static_cast<std::uint64_t>(faces.size()));
  for (const auto& f : faces) h.update(f.data(), 3 * sizeof(int));
  return h.digest();
}

bool TriangleMesh::is_watertight() const {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : faces) {
    for (int k = 0; k < 3; ++k) {
      ++directed[{f[k], f[(k + 1) % 3]}];
    }
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto it = directed.find({edge.second, edge.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

TriangleMesh make_box_mesh(const Vec3& lo, const Vec3& hi) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  }
  // Quads listed counter-clockwise seen from outside.
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.faces.emplace_back(q[0], q[1], q[2]);
    m.faces.emplace_back(q[0], q[2], q[3]);
  }
  return m;
}

TriangleMesh make_unit_cube() { return make_box_mesh(Vec3::Constant(-0.5), Vec3::Constant(0.5)); }

TriangleMesh make_uv_sphere(double radius, int slices, int stacks) {
  if (radius <= 0.0 || slices < 3 || stacks < 2) fail(ErrorKind::invalid_argument, "bad sphere parameters");
  TriangleMesh m;
  m.vertices.emplace_back(0, 0, radius);
  for (int i = 1; i < stacks; ++i) {
    const double theta = M_PI * i / stacks;
    for (int j = 0; j < slices; ++j) {
      const double phi = 2.0 * M_PI * j / slices;
      m.vertices.emplace_back(radius * std::sin(theta) * std::cos(phi), radius * std::sin(theta) * std::sin(phi),
                              radius * std::cos(theta));
    }
  }
  m.vertices.emplace_back(0, 0, -radius);
  const int south = static_cast<int>(m.vertices.size()) - 1;
  auto ring = [&](int i, int j) { return 1 + (i - 1) * slices + (j % slices); };
  for (int j = 0; j < slices; ++j) m.faces.emplace_back(0, ring(1, j), ring(1, j + 1));
  for (int i = 1; i < stacks - 1; ++i) {
    for (int j = 0; j < slices; ++j) {
      m.faces.emplace_back(ring(i, j), ring(i + 1, j), ring(i + 1, j + 1));
      m.faces.emplace_back(ring(i, j), ring(i + 1, j + 1), ring(i, j + 1));
    }
  }
  for (int j = 0; j < slices; ++j) m.faces.emplace_back(south, ring(stacks - 1, j + 1), ring(stacks - 1, j));
  return m;
}

Obb object_aabb(const TriangleMesh& mesh) {
  const Aabb box = mesh.bounds();
  Obb obb;
  obb.center = box.center();
  obb.half_extents = (0.5 * box.extent()).cwiseMax(Vec3::Constant(1e-12));
  return obb;
}

Obb world_obb(const TriangleMesh& mesh, const Pose& pose) { return object_aabb(mesh).transformed(pose); }

std::vector<SurfaceSample> sample_surface_uniform(const TriangleMesh& mesh, std::size_t n, std::mt19937_64& rng) {
  mesh.validate();
  std::vector<double> cdf(mesh.faces.size());
  double acc = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    acc += mesh.face_area(f);
    cdf[f] = acc;
  }
  if (acc <= 0.0) fail(ErrorKind::degenerate, "mesh has zero surface area");
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<SurfaceSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = uni(rng) * acc;
    std::size_t f = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
    f = std::min(f, mesh.faces.size() - 1);
    double u = uni(rng);
    double v = uni(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    const Face& t = mesh.faces[f];
    const Vec3 p = mesh.vertices[t[0]] + u * (mesh.vertices[t[1]] - mesh.vertices[t[0]]) +
                   v * (mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    out.push_back({p, f});
  }
  return out;
}

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};
struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    return static_cast<std::size_t>(k.x * 73856093LL ^ k.y * 19349663LL ^ k.z * 83492791LL);
  }
};

}  // namespace

std::vector<SurfaceSample> sample_surface_blue_noise(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (n == 0) return {};
  std::mt19937_64 rng(seed);
  const std::vector<SurfaceSample> candidates = sample_surface_uniform(mesh, 6 * n, rng);
  // Disk radius for a hexagonal packing of n samples over the surface,
  // shrunk so the greedy pass usually accepts slightly more than n.
  const double radius = 0.7 * std::sqrt(mesh.surface_area() / (2.0 * std::sqrt(3.0) * static_cast<double>(n)));
  const double cell = radius;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> grid;
  auto key_of = [&](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x() / cell)),
                   static_cast<std::int64_t>(std::floor(p.y() / cell)),
                   static_cast<std::int64_t>(std::floor(p.z() / cell))};
  };
  std::vector<SurfaceSample> accepted;
  std::vector<char> used(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size() && accepted.size() < n; ++i) {
    const Vec3& p = candidates[i].point;
    const CellKey k = key_of(p);
    bool ok = true;
    for (std::int64_t dx = -1; dx <= 1 && ok; ++dx) {
      for (std::int64_t dy = -1; dy <= 1 && ok; ++dy) {
        for (std::int64_t dz = -1; dz <= 1 && ok; ++dz) {
          auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
          if (it == grid.end()) continue;
          for (std::size_t j : it->second) {
            if ((accepted[j].point - p).squaredNorm() < radius * radius) {
              ok = false;
              break;
            }
          }
        }
      }
    }
    if (!ok) continue;
    grid[k].push_back(accepted.size());
    accepted.push_back(candidates[i]);
    used[i] = 1;
  }
  for (std::size_t i = 0; i < candidates.size() && accepted.size() < n; ++i) {
    if (!used[i]) accepted.push_back(candidates[i]);
  }
  return accepted;
}

}  // namespace keycontact
