#pragma once

#include <cstddef>
#include <vector>

#include "keycontact/transfer/feature_grid.hpp"

namespace keycontact {

struct Correspondence {
  Vec3 reference;
  Vec3 target;
  std::size_t reference_index = 0;
  std::size_t target_index = 0;
};

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;
  std::vector<bool> inliers;  // empty until alignment

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  std::size_t inlier_count() const;
};

/// Pairs (i, j) where tgt_j lies within d_t (feature space) of ref_i's nearest
/// target neighbour and ref_i within d_t of tgt_j's nearest reference
/// neighbour. d_t = 0 gives mutual nearest neighbours. Ordered by (i, j).
CorrespondenceSet relaxed_best_buddies(const FeatureGrid& ref, const FeatureGrid& tgt, double d_t);

/// Median over voxels of the feature distance to the nearest other voxel.
double median_nn_feature_distance(const FeatureGrid& grid);

}  // namespace keycontact
