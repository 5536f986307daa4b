#pragma once

#include <span>

#include "keycontact/geometry/pose.hpp"

namespace keycontact {

/// Weighted rotation mean: the dominant eigenvector of sum_i w_i q_i q_i^T,
/// with the sign fixed so that w >= 0. Weights must be non-negative and not
/// all zero; an empty weight span means uniform weights.
Quat average_quaternions(std::span<const Quat> rotations, std::span<const double> weights = {});

}  // namespace keycontact
