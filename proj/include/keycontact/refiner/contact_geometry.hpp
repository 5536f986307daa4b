#pragma once

#include <memory>

#include "keycontact/geometry/shape_model.hpp"

namespace keycontact {

/// Signed gap between a master and a slave shape, accurate near contact.
/// Far from contact the grid SDF is used; within `band` of the closest
/// sample the exact mesh distance replaces it, and master contact points
/// near the slave are tested against the slave's SDF as well so that master
/// edges between slave samples are not missed.
class ContactGeometry {
 public:
  ContactGeometry() = default;
  ContactGeometry(ShapeModel master, ShapeModel slave);

  const ShapeModel& master() const;
  const ShapeModel& slave() const;

  /// Gap with the slave at `slave_in_master` (slave object pose in the master
  /// frame). Negative when the shapes interpenetrate.
  double gap(const Pose& slave_in_master) const;
  /// Signed distance of a master-frame point to the master surface, exact
  /// near the surface.
  double master_distance(const Vec3& p) const;

  /// Distance beyond which the grid value is returned unrefined.
  double band() const;
  /// Bound on the grid interpolation error.
  double grid_error() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace keycontact
