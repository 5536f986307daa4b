#include "keycontact/transfer/feature_grid.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <set>

#include "keycontact/common/error.hpp"

namespace keycontact {

void FeatureGrid::validate() const {
  if (static_cast<std::size_t>(features.rows()) != centers.size())
    fail(ErrorKind::invalid_argument, "feature grid: feature rows do not match voxel count");
  if (!keys.empty()) {
    if (keys.size() != centers.size()) fail(ErrorKind::invalid_argument, "feature grid: key count mismatch");
    std::set<std::array<int, 3>> seen(keys.begin(), keys.end());
    if (seen.size() != keys.size()) fail(ErrorKind::invalid_argument, "feature grid: duplicate voxel coordinates");
  }
  for (const auto& c : centers)
    if (!c.allFinite()) fail(ErrorKind::invalid_argument, "feature grid: non-finite voxel center");
}

FeatureGrid FeatureGrid::subset(const std::vector<std::size_t>& indices) const {
  FeatureGrid g;
  g.cell_size = cell_size;
  g.owner = owner;
  g.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices.at(k);
    g.centers.push_back(centers.at(i));
    g.features.row(static_cast<Eigen::Index>(k)) = features.row(static_cast<Eigen::Index>(i));
    if (!keys.empty()) g.keys.push_back(keys[i]);
    if (!counts.empty()) g.counts.push_back(counts[i]);
  }
  return g;
}

std::size_t FeatureGrid::nearest_voxel(const Vec3& p) const {
  if (centers.empty()) fail(ErrorKind::invalid_argument, "feature grid is empty");
  std::size_t best = 0;
  double best_d = (centers[0] - p).squaredNorm();
  for (std::size_t i = 1; i < centers.size(); ++i) {
    const double d = (centers[i] - p).squaredNorm();
    if (d < best_d) best_d = d, best = i;
  }
  return best;
}

Pose canonical_frame(const std::vector<Vec3>& points) {
  if (points.size() < 3) fail(ErrorKind::degenerate, "canonical frame needs at least 3 points");
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p;
  c /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) cov += (p - c) * (p - c).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
  Vec3 axes[3] = {es.eigenvectors().col(2), es.eigenvectors().col(1), es.eigenvectors().col(0)};
  for (int a = 0; a < 2; ++a) {
    double m3 = 0;
    for (const auto& p : points) m3 += std::pow(axes[a].dot(p - c), 3);
    if (m3 < 0) axes[a] = -axes[a];
  }
  axes[1] = (axes[1] - axes[1].dot(axes[0]) * axes[0]).normalized();
  axes[2] = axes[0].cross(axes[1]);
  return Pose::from_axes(axes[0], axes[1], axes[2], c);
}

FeatureGrid build_feature_grid(const PointCloud& cloud, double cell_size, const std::string& owner) {
  cloud.validate();
  if (!cloud.has_features()) fail(ErrorKind::invalid_argument, "feature grid: cloud has no per-point features");
  if (!(cell_size > 0)) fail(ErrorKind::invalid_argument, "feature grid: cell size must be positive");
  const Pose inv = canonical_frame(cloud.points).inverse();
  // Odd offset keeps symmetric faces off cell boundaries.
  const double offset = 0.4142135623730951;

  struct Acc {
    Vec3 sum = Vec3::Zero();
    Eigen::VectorXd feat;
    int n = 0;
  };
  std::map<std::array<int, 3>, Acc> cells;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3 q = inv * cloud.points[i];
    std::array<int, 3> key;
    for (int a = 0; a < 3; ++a) key[a] = static_cast<int>(std::floor(q[a] / cell_size + offset));
    auto [it, fresh] = cells.try_emplace(key);
    if (fresh) it->second.feat = Eigen::VectorXd::Zero(cloud.features.cols());
    it->second.sum += cloud.points[i];
    it->second.feat += cloud.features.row(static_cast<Eigen::Index>(i)).transpose();
    ++it->second.n;
  }

  FeatureGrid g;
  g.cell_size = cell_size;
  g.owner = owner;
  g.features.resize(static_cast<Eigen::Index>(cells.size()), cloud.features.cols());
  Eigen::Index r = 0;
  for (const auto& [key, acc] : cells) {
    g.keys.push_back(key);
    g.counts.push_back(acc.n);
    g.centers.push_back(acc.sum / acc.n);
    g.features.row(r++) = (acc.feat / acc.n).transpose();
  }
  return g;
}

}  // namespace keycontact
