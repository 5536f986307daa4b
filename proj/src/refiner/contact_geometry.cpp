#include "keycontact/refiner/contact_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/kd_tree.hpp"

namespace keycontact {

namespace {

// Trilinear interpolation of a 1-Lipschitz field is at most sqrt(3)-Lipschitz.
constexpr double kLipschitz = 1.7320508075688772;

struct Cluster {
  Vec3 center;
  double radius;
  std::size_t begin, end;
};

/// Points regrouped by voxel so whole groups can be bounded at once.
struct ClusteredPoints {
  std::vector<Vec3> points;
  std::vector<Cluster> clusters;
  KdTree3* tree = nullptr;

  ClusteredPoints(const std::vector<Vec3>& src, double voxel) {
    std::map<std::array<long, 3>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Vec3 q = src[i] / voxel;
      groups[{static_cast<long>(std::floor(q.x())), static_cast<long>(std::floor(q.y())),
              static_cast<long>(std::floor(q.z()))}]
          .push_back(i);
    }
    for (const auto& [key, idx] : groups) {
      Cluster c{Vec3::Zero(), 0.0, points.size(), points.size() + idx.size()};
      for (auto i : idx) {
        points.push_back(src[i]);
        c.center += src[i];
      }
      c.center /= static_cast<double>(idx.size());
      for (auto i : idx) c.radius = std::max(c.radius, (src[i] - c.center).norm());
      clusters.push_back(c);
    }
  }
};

}  // namespace

struct ContactGeometry::Impl {
  ShapeModel master;
  ShapeModel slave;
  std::unique_ptr<ClusteredPoints> slave_pts;
  std::unique_ptr<ClusteredPoints> master_pts;
  std::unique_ptr<KdTree3> master_centers;
  std::vector<Vec3> master_center_list;
  double master_cluster_radius = 0.0;
  Vec3 slave_center = Vec3::Zero();
  double slave_radius = 0.0;
  double band = 0.0;
  double grid_error = 0.0;
};

ContactGeometry::ContactGeometry(ShapeModel master, ShapeModel slave) {
  if (!master.valid() || !slave.valid()) fail(ErrorKind::invalid_argument, "ContactGeometry: shapes not built");
  auto impl = std::make_shared<Impl>();
  impl->master = std::move(master);
  impl->slave = std::move(slave);
  const double cell = std::max(impl->master.sdf().cell(), impl->slave.sdf().cell());
  impl->grid_error = cell;
  impl->band = 3.0 * cell;
  const double voxel = std::max(4.0 * cell, 1e-9);
  impl->slave_pts = std::make_unique<ClusteredPoints>(impl->slave.contact_points(), voxel);
  impl->master_pts = std::make_unique<ClusteredPoints>(impl->master.contact_points(), voxel);
  for (const auto& c : impl->master_pts->clusters) {
    impl->master_center_list.push_back(c.center);
    impl->master_cluster_radius = std::max(impl->master_cluster_radius, c.radius);
  }
  impl->master_centers = std::make_unique<KdTree3>(impl->master_center_list);
  impl->slave_center = impl->slave.bounds().center();
  for (const Vec3& p : impl->slave.contact_points()) {
    impl->slave_radius = std::max(impl->slave_radius, (p - impl->slave_center).norm());
  }
  impl_ = std::move(impl);
}

const ShapeModel& ContactGeometry::master() const {
  if (!impl_) fail(ErrorKind::invalid_argument, "ContactGeometry not initialised");
  return impl_->master;
}
const ShapeModel& ContactGeometry::slave() const {
  if (!impl_) fail(ErrorKind::invalid_argument, "ContactGeometry not initialised");
  return impl_->slave;
}
double ContactGeometry::band() const { return impl_ ? impl_->band : 0.0; }
double ContactGeometry::grid_error() const { return impl_ ? impl_->grid_error : 0.0; }

double ContactGeometry::master_distance(const Vec3& p) const {
  const ShapeModel& m = master();
  const double g = m.local_sdf(p);
  if (std::abs(g) > impl_->band) return g;
  return m.exact_signed_distance(p);
}

namespace {

/// Minimum over the selected clusters of `field(R p + t)`, pruning clusters
/// whose bound cannot come within `slack` of the running minimum. Points
/// whose grid value lies within `slack` of the minimum are collected.
template <typename Field>
double bounded_min(const ClusteredPoints& cp, const std::vector<std::size_t>& which, const Mat3& R, const Vec3& t,
                   const Field& field, double slack, std::vector<Vec3>& near) {
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(which.size());
  for (auto ci : which) {
    const Cluster& c = cp.clusters[ci];
    order.emplace_back(field(R * c.center + t) - kLipschitz * c.radius, ci);
  }
  std::sort(order.begin(), order.end());
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Vec3>> seen;
  for (const auto& [lb, ci] : order) {
    if (lb > best + slack) break;
    const Cluster& c = cp.clusters[ci];
    for (std::size_t i = c.begin; i < c.end; ++i) {
      const Vec3 q = R * cp.points[i] + t;
      const double v = field(q);
      best = std::min(best, v);
      seen.emplace_back(v, q);
    }
  }
  for (const auto& [v, q] : seen)
    if (v <= best + slack) near.push_back(q);
  return best;
}

}  // namespace

double ContactGeometry::gap(const Pose& slave_in_master) const {
  if (!impl_) fail(ErrorKind::invalid_argument, "ContactGeometry not initialised");
  const Impl& s = *impl_;
  const double slack = s.grid_error;

  // Slave points against the master grid.
  const Mat3 R = slave_in_master.rotation_matrix();
  const Vec3& t = slave_in_master.translation();
  std::vector<std::size_t> all(s.slave_pts->clusters.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<Vec3> near;
  const SdfGrid& mgrid = s.master.sdf();
  const double gmin = bounded_min(*s.slave_pts, all, R, t, [&](const Vec3& q) { return mgrid.value(q); }, slack, near);
  if (gmin > s.band) return gmin;

  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& q : near) best = std::min(best, s.master.exact_signed_distance(q));

  // Master points near the slave against the slave.
  const Pose to_slave = slave_in_master.inverse();
  const Mat3 Ri = to_slave.rotation_matrix();
  const Vec3& ti = to_slave.translation();
  const auto sel = s.master_centers->radius_search(slave_in_master * s.slave_center,
                                                   s.slave_radius + s.band + s.master_cluster_radius);
  if (!sel.empty()) {
    std::vector<Vec3> rnear;
    const SdfGrid& sgrid = s.slave.sdf();
    const double rmin =
        bounded_min(*s.master_pts, sel, Ri, ti, [&](const Vec3& q) { return sgrid.value(q); }, slack, rnear);
    if (rmin <= s.band) {
      for (const Vec3& q : rnear) best = std::min(best, s.slave.exact_signed_distance(q));
    }
  }
  return best;
}

}  // namespace keycontact
