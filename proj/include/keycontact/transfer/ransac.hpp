#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "keycontact/transfer/correspondence.hpp"

namespace keycontact {

/// Weighted least-squares rigid transform mapping `from` onto `to` (Kabsch,
/// det +1). Empty weights mean uniform. Throws degenerate on fewer than three
/// points or a collinear `from` set.
Pose fit_rigid(std::span<const Vec3> from, std::span<const Vec3> to, std::span<const double> weights = {});

struct RigidAlignment {
  Pose target_to_reference;
  std::vector<bool> inliers;  // residual <= inlier_eps under the final transform
  std::size_t inlier_count = 0;
  double rms_residual = 0.0;  // over inliers
  double fit_threshold = 0.0;  // threshold of the set used for the final fit
};

struct RansacOptions {
  int iterations = 2000;
  double inlier_eps = 0.005;
  std::uint64_t seed = 0;
};

RigidAlignment ransac_rigid_align(const CorrespondenceSet& c, const RansacOptions& options = {});

}  // namespace keycontact
