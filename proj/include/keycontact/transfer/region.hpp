#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

#include "keycontact/transfer/feature_grid.hpp"

namespace keycontact {

/// Cosine similarity of every voxel feature against `query`. Zero-norm
/// vectors (either side) give similarity 0.
std::vector<double> region_similarity(const FeatureGrid& grid, const Eigen::VectorXd& query);

struct OtsuResult {
  std::vector<std::size_t> selected;  // indices with value > threshold, ascending
  double threshold = 0.0;
};

/// Otsu split over a 256-bin histogram spanning [min, max]. When several
/// splits tie for the maximum between-class variance the threshold is the
/// midpoint of the tied range.
OtsuResult otsu_region(std::span<const double> values);

}  // namespace keycontact
