#include "keycontact/transfer/ransac.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <random>

#include "keycontact/common/error.hpp"

namespace keycontact {

namespace {

bool collinear(std::span<const Vec3> pts, std::span<const double> w) {
  Vec3 c = Vec3::Zero();
  double ws = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    c += wi * pts[i];
    ws += wi;
  }
  c /= ws;
  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) cov += (w.empty() ? 1.0 : w[i]) * (pts[i] - c) * (pts[i] - c).transpose();
  Eigen::JacobiSVD<Mat3> svd(cov);
  const Vec3 s = svd.singularValues();
  return !(s[0] > 0 && s[1] > 1e-12 * s[0]);
}

std::vector<bool> within(const CorrespondenceSet& c, const Pose& t, double thr, std::size_t& count, double& sq) {
  std::vector<bool> in(c.size(), false);
  count = 0;
  sq = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double r = (t * c.pairs[i].target - c.pairs[i].reference).norm();
    if (r <= thr) {
      in[i] = true;
      ++count;
      sq += r * r;
    }
  }
  return in;
}

Pose fit_subset(const CorrespondenceSet& c, const std::vector<bool>& in) {
  std::vector<Vec3> from, to;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (in[i]) from.push_back(c.pairs[i].target), to.push_back(c.pairs[i].reference);
  return fit_rigid(from, to);
}

}  // namespace

Pose fit_rigid(std::span<const Vec3> from, std::span<const Vec3> to, std::span<const double> weights) {
  if (from.size() != to.size()) fail(ErrorKind::invalid_argument, "fit_rigid: point count mismatch");
  if (!weights.empty() && weights.size() != from.size()) fail(ErrorKind::invalid_argument, "fit_rigid: weight count mismatch");
  if (from.size() < 3) fail(ErrorKind::degenerate, "fit_rigid: need at least 3 points");
  double ws = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) fail(ErrorKind::invalid_argument, "fit_rigid: weights must be finite and non-negative");
    ws += w;
  }
  if (!weights.empty() && !(ws > 0)) fail(ErrorKind::degenerate, "fit_rigid: all weights are zero");
  if (collinear(from, weights) || collinear(to, weights)) fail(ErrorKind::degenerate, "fit_rigid: points are collinear");

  Vec3 cf = Vec3::Zero(), ct = Vec3::Zero();
  double total = 0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    cf += w * from[i];
    ct += w * to[i];
    total += w;
  }
  cf /= total;
  ct /= total;
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i)
    h += (weights.empty() ? 1.0 : weights[i]) * (from[i] - cf) * (to[i] - ct).transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0 ? -1.0 : 1.0;
  const Mat3 r = svd.matrixV() * d * svd.matrixU().transpose();
  return Pose(r, ct - r * cf);
}

RigidAlignment ransac_rigid_align(const CorrespondenceSet& c, const RansacOptions& options) {
  if (c.size() < 3) fail(ErrorKind::degenerate, "ransac_rigid_align: need at least 3 correspondences");
  if (options.iterations < 1) fail(ErrorKind::invalid_argument, "ransac_rigid_align: iterations must be >= 1");
  if (!(options.inlier_eps > 0)) fail(ErrorKind::invalid_argument, "ransac_rigid_align: inlier_eps must be positive");
  {
    std::vector<Vec3> t;
    for (const auto& p : c.pairs) t.push_back(p.target);
    if (collinear(t, {})) fail(ErrorKind::degenerate, "ransac_rigid_align: correspondences are collinear");
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  bool found = false;
  Pose best;
  std::size_t best_count = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.iterations; ++it) {
    std::size_t a = pick(rng), b = pick(rng), d = pick(rng);
    if (a == b || a == d || b == d) continue;
    const Vec3 from[3] = {c.pairs[a].target, c.pairs[b].target, c.pairs[d].target};
    const Vec3 to[3] = {c.pairs[a].reference, c.pairs[b].reference, c.pairs[d].reference};
    Pose t;
    try {
      t = fit_rigid(from, to);
    } catch (const Error&) {
      continue;
    }
    std::size_t count;
    double sq;
    within(c, t, options.inlier_eps, count, sq);
    if (count > best_count || (count == best_count && sq < best_sq)) {
      best = t, best_count = count, best_sq = sq, found = true;
    }
  }
  if (!found || best_count < 3) fail(ErrorKind::degenerate, "ransac_rigid_align: no non-degenerate consensus");

  // Local optimisation: refit to a fixed point, then keep halving the
  // threshold while at least half of the set survives.
  auto settle = [&](Pose t, double thr, std::vector<bool>& in, std::size_t& count) {
    double sq;
    in = within(c, t, thr, count, sq);
    for (int k = 0; k < 20 && count >= 3; ++k) {
      Pose next;
      try {
        next = fit_subset(c, in);
      } catch (const Error&) {
        break;
      }
      std::size_t n2;
      auto in2 = within(c, next, thr, n2, sq);
      t = next;
      if (in2 == in) break;
      in = std::move(in2);
      count = n2;
    }
    return t;
  };
  double thr = options.inlier_eps;
  std::vector<bool> in;
  std::size_t count = 0;
  Pose t = settle(best, thr, in, count);
  while (thr > options.inlier_eps * 1e-6) {
    std::size_t n2;
    double sq;
    within(c, t, thr / 2, n2, sq);
    if (n2 < 3 || 2 * n2 < count) break;
    std::vector<bool> in2;
    std::size_t c2;
    Pose t2 = settle(t, thr / 2, in2, c2);
    if (c2 < 3) break;
    t = t2, in = std::move(in2), count = c2, thr /= 2;
  }

  RigidAlignment r;
  r.target_to_reference = t;
  r.fit_threshold = thr;
  double sq;
  r.inliers = within(c, t, options.inlier_eps, r.inlier_count, sq);
  r.rms_residual = r.inlier_count ? std::sqrt(sq / r.inlier_count) : 0.0;
  return r;
}

}  // namespace keycontact
