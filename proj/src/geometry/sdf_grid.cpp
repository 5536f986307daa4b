#include "keycontact/geometry/sdf_grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/triangle_bvh.hpp"

namespace keycontact {

namespace {
constexpr char kMagic[8] = {'K', 'C', 'S', 'D', 'F', '\0', '\0', '\0'};
}

SdfGrid SdfGrid::build(const TriangleMesh& mesh, const TriangleBvh& bvh, double cell, double padding) {
  if (!(cell > 0.0)) fail(ErrorKind::invalid_argument, "SDF cell size must be positive");
  const Aabb box = mesh.bounds();
  SdfGrid g;
  g.cell_ = cell;
  g.origin_ = box.min - Vec3::Constant(padding);
  const Vec3 span = box.extent() + Vec3::Constant(2.0 * padding);
  for (int a = 0; a < 3; ++a) g.dims_[a] = static_cast<int>(std::ceil(span[a] / cell)) + 1;
  g.values_.resize(static_cast<std::size_t>(g.dims_.x()) * g.dims_.y() * g.dims_.z());
  std::size_t idx = 0;
  for (int k = 0; k < g.dims_.z(); ++k) {
    for (int j = 0; j < g.dims_.y(); ++j) {
      for (int i = 0; i < g.dims_.x(); ++i) {
        g.values_[idx++] = bvh.signed_distance(g.origin_ + cell * Vec3(i, j, k));
      }
    }
  }
  g.mesh_hash_ = mesh.content_hash();
  return g;
}

Aabb SdfGrid::domain() const {
  Aabb box;
  box.min = origin_;
  box.max = origin_ + cell_ * (dims_ - Eigen::Vector3i::Ones()).cast<double>();
  return box;
}

double SdfGrid::interpolate(const Vec3& p) const {
  const Vec3 u = (p - origin_) / cell_;
  int i0[3];
  double f[3];
  for (int a = 0; a < 3; ++a) {
    const double maxi = dims_[a] - 1;
    const double c = std::clamp(u[a], 0.0, maxi);
    int i = static_cast<int>(std::floor(c));
    if (i >= dims_[a] - 1) i = dims_[a] - 2;
    i0[a] = i;
    f[a] = c - i;
  }
  const int i = i0[0], j = i0[1], k = i0[2];
  const double c00 = node(i, j, k) * (1 - f[0]) + node(i + 1, j, k) * f[0];
  const double c10 = node(i, j + 1, k) * (1 - f[0]) + node(i + 1, j + 1, k) * f[0];
  const double c01 = node(i, j, k + 1) * (1 - f[0]) + node(i + 1, j, k + 1) * f[0];
  const double c11 = node(i, j + 1, k + 1) * (1 - f[0]) + node(i + 1, j + 1, k + 1) * f[0];
  const double c0 = c00 * (1 - f[1]) + c10 * f[1];
  const double c1 = c01 * (1 - f[1]) + c11 * f[1];
  return c0 * (1 - f[2]) + c1 * f[2];
}

double SdfGrid::value(const Vec3& p) const {
  if (values_.empty()) fail(ErrorKind::invalid_argument, "SDF grid is empty");
  const Aabb dom = domain();
  const Vec3 clamped = p.cwiseMax(dom.min).cwiseMin(dom.max);
  const double inside = interpolate(clamped);
  return inside + (p - clamped).norm();
}

Vec3 SdfGrid::gradient(const Vec3& p) const {
  const double h = 0.5 * cell_;
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    Vec3 d = Vec3::Zero();
    d[a] = h;
    g[a] = (value(p + d) - value(p - d)) / (2.0 * h);
  }
  return g;
}

void SdfGrid::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write SDF cache " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kFileVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&mesh_hash_), sizeof(mesh_hash_));
  out.write(reinterpret_cast<const char*>(&cell_), sizeof(cell_));
  out.write(reinterpret_cast<const char*>(origin_.data()), 3 * sizeof(double));
  out.write(reinterpret_cast<const char*>(dims_.data()), 3 * sizeof(int));
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) fail(ErrorKind::io, "failed writing SDF cache " + path.string());
}

bool SdfGrid::load(const std::filesystem::path& path, std::uint64_t expected_hash, double expected_cell) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t hash = 0;
  double cell = 0.0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&hash), sizeof(hash));
  in.read(reinterpret_cast<char*>(&cell), sizeof(cell));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || version != kFileVersion ||
      hash != expected_hash || cell != expected_cell) {
    return false;
  }
  SdfGrid g;
  g.cell_ = cell;
  g.mesh_hash_ = hash;
  in.read(reinterpret_cast<char*>(g.origin_.data()), 3 * sizeof(double));
  in.read(reinterpret_cast<char*>(g.dims_.data()), 3 * sizeof(int));
  if (!in || (g.dims_.array() < 2).any()) return false;
  g.values_.resize(static_cast<std::size_t>(g.dims_.x()) * g.dims_.y() * g.dims_.z());
  in.read(reinterpret_cast<char*>(g.values_.data()), static_cast<std::streamsize>(g.values_.size() * sizeof(double)));
  if (!in) return false;
  *this = std::move(g);
  return true;
}

}  // namespace keycontact
