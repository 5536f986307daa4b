#include "keycontact/transfer/correspondence.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "keycontact/common/error.hpp"

namespace keycontact {

namespace {

double fdist(const Eigen::MatrixXd& a, std::size_t i, const Eigen::MatrixXd& b, std::size_t j) {
  return (a.row(static_cast<Eigen::Index>(i)) - b.row(static_cast<Eigen::Index>(j))).norm();
}

std::vector<std::size_t> nearest_rows(const Eigen::MatrixXd& from, const Eigen::MatrixXd& to) {
  std::vector<std::size_t> nn(static_cast<std::size_t>(from.rows()));
  for (Eigen::Index i = 0; i < from.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < to.rows(); ++j) {
      const double d = (from.row(i) - to.row(j)).squaredNorm();
      if (d < best) best = d, nn[static_cast<std::size_t>(i)] = static_cast<std::size_t>(j);
    }
  }
  return nn;
}

}  // namespace

std::size_t CorrespondenceSet::inlier_count() const {
  return static_cast<std::size_t>(std::count(inliers.begin(), inliers.end(), true));
}

CorrespondenceSet relaxed_best_buddies(const FeatureGrid& ref, const FeatureGrid& tgt, double d_t) {
  if (ref.size() == 0 || tgt.size() == 0) fail(ErrorKind::invalid_argument, "relaxed_best_buddies: empty region");
  if (ref.dim() != tgt.dim()) fail(ErrorKind::invalid_argument, "relaxed_best_buddies: feature dimensions differ");
  if (!(d_t >= 0)) fail(ErrorKind::invalid_argument, "relaxed_best_buddies: d_t must be non-negative");
  const auto nn_t = nearest_rows(ref.features, tgt.features);
  const auto nn_r = nearest_rows(tgt.features, ref.features);

  std::map<std::size_t, std::vector<std::size_t>> near_t;  // target anchor -> targets within d_t
  CorrespondenceSet out;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const std::size_t a = nn_t[i];
    auto it = near_t.find(a);
    if (it == near_t.end()) {
      std::vector<std::size_t> list;
      for (std::size_t j = 0; j < tgt.size(); ++j)
        if (fdist(tgt.features, a, tgt.features, j) <= d_t) list.push_back(j);
      it = near_t.emplace(a, std::move(list)).first;
    }
    for (std::size_t j : it->second) {
      if (fdist(ref.features, nn_r[j], ref.features, i) <= d_t)
        out.pairs.push_back({ref.centers[i], tgt.centers[j], i, j});
    }
  }
  return out;
}

double median_nn_feature_distance(const FeatureGrid& grid) {
  if (grid.size() < 2) return 0.0;
  std::vector<double> d(grid.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (i != j) d[i] = std::min(d[i], fdist(grid.features, i, grid.features, j));
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  if (d.size() % 2 == 1) return d[mid];
  const double upper = d[mid];
  return 0.5 * (upper + *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid)));
}

}  // namespace keycontact
