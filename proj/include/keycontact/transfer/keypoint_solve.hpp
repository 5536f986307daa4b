#pragma once

#include <span>

#include "keycontact/keypoints/keypoint_frame.hpp"

namespace keycontact {

/// Weighted objective sum_i w_i |F^-1(deformed_i) - ref_kf^-1(ref_i)|^2.
double keypoint_frame_objective(const Pose& frame, const Pose& ref_kf, std::span<const Vec3> ref_points,
                                std::span<const Vec3> deformed, std::span<const double> weights = {});

/// Rigid frame whose local coordinates of the deformed points best match the
/// reference frame's local coordinates of the originals.
KeypointFrame solve_keypoint_frame(const KeypointFrame& ref_kf, std::span<const Vec3> ref_points,
                                   std::span<const Vec3> deformed, std::span<const double> weights = {});

}  // namespace keycontact
