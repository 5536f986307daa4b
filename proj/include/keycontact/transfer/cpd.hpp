#pragma once

#include <Eigen/Core>

#include <vector>

#include "keycontact/geometry/pose.hpp"

namespace keycontact {

struct CpdConfig {
  double beta = 2.0;     // kernel width, in units of the normalized cloud
  double lambda = 3.0;   // smoothness weight
  double w = 0.1;        // uniform outlier weight
  double tolerance = 1e-8;
  int max_iterations = 150;
  int max_points = 400;  // farthest-point subsample above this size
};

/// phi(p) = p + nu(p), nu(p) = sum_k exp(-|p - c_k|^2 / (2 b^2)) W_k.
struct DeformationMap {
  std::vector<Vec3> control_points;
  std::vector<Vec3> coefficients;   // W_k
  std::vector<Vec3> displacements;  // nu at the control points
  double bandwidth = 0.0;           // b, meters

  Vec3 displacement(const Vec3& p) const;
  Vec3 apply(const Vec3& p) const { return p + displacement(p); }
  double max_displacement() const;
};

struct CpdResult {
  DeformationMap map;
  double objective = 0.0;
  double sigma2 = 0.0;  // final variance, meters^2
  int iterations = 0;
  bool converged = false;
};

/// Coherent point drift: moves `reference` toward `target`.
CpdResult nonrigid_register(const std::vector<Vec3>& reference, const std::vector<Vec3>& target, const CpdConfig& config = {});

/// Deterministic farthest-point subsample starting from index 0. Returns
/// indices in selection order; returns all indices when n >= size.
std::vector<std::size_t> farthest_point_indices(const std::vector<Vec3>& points, std::size_t n);

}  // namespace keycontact
