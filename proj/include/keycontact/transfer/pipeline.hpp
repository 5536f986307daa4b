#pragma once

#include <cstdint>
#include <string>

#include "keycontact/common/json_io.hpp"
#include "keycontact/keypoints/keypoint_frame.hpp"
#include "keycontact/transfer/cpd.hpp"
#include "keycontact/transfer/feature_grid.hpp"

namespace keycontact {

struct TransferConfig {
  double cell_size = 0.005;
  double d_t = -1.0;  // <0: d_t_factor * median NN feature distance of the reference region
  double d_t_factor = 0.5;
  int ransac_iterations = 2000;
  double inlier_eps = 0.005;
  CpdConfig cpd;
  double solve_bandwidth = 0.0075;  // Gaussian weight radius around the reference keypoint
  std::uint64_t seed = 0;
};

struct TransferDiagnostics {
  std::size_t reference_voxels = 0, target_voxels = 0;
  std::size_t reference_region = 0, target_region = 0;
  double region_size_ratio = 0.0;  // target / reference
  double reference_threshold = 0.0, target_threshold = 0.0;
  double d_t = 0.0;
  std::size_t correspondences = 0, inliers = 0;
  double ransac_rms = 0.0;
  Pose target_to_reference;
  double registration_objective = 0.0;
  double registration_residual = 0.0;  // mean distance from deformed reference to nearest target voxel
  int registration_iterations = 0;
  bool registration_converged = false;
  double solve_residual = 0.0;  // RMS of the weighted frame fit
};

Json transfer_diagnostics_to_json(const TransferDiagnostics& d);

struct TransferResult {
  KeypointFrame keypoint;  // in the target cloud's frame
  TransferDiagnostics diagnostics;
};

/// Both clouds must carry per-point features of the same dimension. The
/// reference keypoint is expressed in the reference cloud's frame.
TransferResult transfer_keypoint(const PointCloud& reference, const KeypointFrame& reference_kf,
                                 const PointCloud& target, const std::string& target_owner,
                                 const TransferConfig& config = {});

Json transfer_config_to_json(const TransferConfig& c);
/// Collects every invalid field before throwing.
TransferConfig transfer_config_from_json(const Json& j);

}  // namespace keycontact
