#include "keycontact/geometry/shape_model.hpp"

#include <algorithm>
#include <cstdio>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/hash.hpp"
#include "keycontact/geometry/triangle_bvh.hpp"

namespace keycontact {

struct ShapeModel::Impl {
  TriangleMesh mesh;
  std::unique_ptr<TriangleBvh> bvh;
  SdfGrid sdf;
  Aabb bounds;
  ShapeOptions options;
  std::vector<Vec3> samples;
  std::vector<Vec3> normals;
  std::vector<Vec3> contact;
};

ShapeModel ShapeModel::build(TriangleMesh mesh, const ShapeOptions& options) {
  mesh.validate();
  auto impl = std::make_shared<Impl>();
  impl->mesh = std::move(mesh);
  impl->options = options;
  impl->bounds = impl->mesh.bounds();
  impl->bvh = std::make_unique<TriangleBvh>(impl->mesh);

  const double padding = options.padding >= 0.0 ? options.padding : std::max(4.0 * options.cell, 0.005);
  const Vec3 span = impl->bounds.extent() + Vec3::Constant(2.0 * padding);
  double nodes = 1.0;
  for (int a = 0; a < 3; ++a) nodes *= std::ceil(span[a] / options.cell) + 1.0;
  if (nodes > static_cast<double>(options.max_nodes)) {
    fail(ErrorKind::invalid_argument, "SDF grid would need " + std::to_string(static_cast<long long>(nodes)) +
                                          " nodes; increase the cell size");
  }

  std::optional<std::filesystem::path> cache_file;
  if (options.cache_dir) {
    char cell_buf[32];
    std::snprintf(cell_buf, sizeof(cell_buf), "%.6g", options.cell);
    cache_file = *options.cache_dir / (to_hex(impl->mesh.content_hash()) + "_" + cell_buf + ".sdf");
  }
  bool loaded = false;
  if (cache_file) loaded = impl->sdf.load(*cache_file, impl->mesh.content_hash(), options.cell);
  if (!loaded) {
    impl->sdf = SdfGrid::build(impl->mesh, *impl->bvh, options.cell, padding);
    if (cache_file) {
      std::filesystem::create_directories(cache_file->parent_path());
      impl->sdf.save(*cache_file);
    }
  }

  for (const auto& s : sample_surface_blue_noise(impl->mesh, options.surface_samples, options.sample_seed)) {
    impl->samples.push_back(s.point);
    impl->normals.push_back(impl->mesh.face_normal(s.face));
  }
  impl->contact = impl->mesh.vertices;
  impl->contact.insert(impl->contact.end(), impl->samples.begin(), impl->samples.end());

  ShapeModel model;
  model.impl_ = std::move(impl);
  return model;
}

namespace {
[[noreturn]] void invalid_model() { fail(ErrorKind::invalid_argument, "ShapeModel not built"); }
}  // namespace

const TriangleMesh& ShapeModel::mesh() const {
  if (!impl_) invalid_model();
  return impl_->mesh;
}
const SdfGrid& ShapeModel::sdf() const {
  if (!impl_) invalid_model();
  return impl_->sdf;
}
const Aabb& ShapeModel::bounds() const {
  if (!impl_) invalid_model();
  return impl_->bounds;
}
const ShapeOptions& ShapeModel::options() const {
  if (!impl_) invalid_model();
  return impl_->options;
}
const std::vector<Vec3>& ShapeModel::surface_points() const {
  if (!impl_) invalid_model();
  return impl_->samples;
}
const std::vector<Vec3>& ShapeModel::surface_normals() const {
  if (!impl_) invalid_model();
  return impl_->normals;
}
const std::vector<Vec3>& ShapeModel::contact_points() const {
  if (!impl_) invalid_model();
  return impl_->contact;
}

double ShapeModel::exact_signed_distance(const Vec3& p) const {
  if (!impl_) invalid_model();
  return impl_->bvh->signed_distance(p);
}

std::pair<Vec3, Vec3> ShapeModel::closest_surface_point(const Vec3& p) const {
  if (!impl_) invalid_model();
  const auto q = impl_->bvh->closest(p);
  return {q.closest, impl_->mesh.face_normal(q.face)};
}

double sdf_query(const ShapeModel& shape, const Pose& pose, const Vec3& point) {
  if (!point.allFinite()) fail(ErrorKind::invalid_argument, "sdf_query: non-finite point");
  return shape.local_sdf(pose.inverse() * point);
}

namespace {

template <typename Distance>
double one_sided_penetration(const std::vector<Vec3>& samples, const Pose& sampled_pose, const ShapeModel& other,
                             const Pose& other_pose, Distance&& distance) {
  // Map samples straight into the other shape's frame.
  const Pose rel = other_pose.inverse() * sampled_pose;
  double worst = 0.0;
  for (const Vec3& p : samples) {
    worst = std::max(worst, -distance(other, rel * p));
  }
  return worst;
}

}  // namespace

double penetration_depth(const ShapeModel& a, const Pose& pose_a, const ShapeModel& b, const Pose& pose_b) {
  auto grid = [](const ShapeModel& s, const Vec3& p) { return s.local_sdf(p); };
  return std::max(one_sided_penetration(a.surface_points(), pose_a, b, pose_b, grid),
                  one_sided_penetration(b.surface_points(), pose_b, a, pose_a, grid));
}

double exact_penetration_depth(const ShapeModel& a, const Pose& pose_a, const ShapeModel& b, const Pose& pose_b) {
  auto exact = [](const ShapeModel& s, const Vec3& p) { return s.exact_signed_distance(p); };
  return std::max(one_sided_penetration(a.contact_points(), pose_a, b, pose_b, exact),
                  one_sided_penetration(b.contact_points(), pose_b, a, pose_a, exact));
}

Aabb posed_bounds(const TriangleMesh& mesh, const Pose& pose) {
  Aabb box;
  for (const auto& v : mesh.vertices) box.extend(pose * v);
  return box;
}

double union_aabb_volume(const ShapeModel& a, const Pose& pose_a, const ShapeModel& b, const Pose& pose_b) {
  Aabb box = posed_bounds(a.mesh(), pose_a);
  box.extend(posed_bounds(b.mesh(), pose_b));
  return box.volume();
}

}  // namespace keycontact
