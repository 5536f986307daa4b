#include "keycontact/transfer/cpd.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "keycontact/common/error.hpp"

namespace keycontact {

Vec3 DeformationMap::displacement(const Vec3& p) const {
  Vec3 v = Vec3::Zero();
  if (bandwidth <= 0) return v;
  const double k = -0.5 / (bandwidth * bandwidth);
  for (std::size_t i = 0; i < control_points.size(); ++i)
    v += std::exp(k * (p - control_points[i]).squaredNorm()) * coefficients[i];
  return v;
}

double DeformationMap::max_displacement() const {
  double m = 0;
  for (const auto& d : displacements) m = std::max(m, d.norm());
  return m;
}

std::vector<std::size_t> farthest_point_indices(const std::vector<Vec3>& points, std::size_t n) {
  std::vector<std::size_t> out;
  if (n >= points.size()) {
    for (std::size_t i = 0; i < points.size(); ++i) out.push_back(i);
    return out;
  }
  if (n == 0) return out;
  std::vector<double> d(points.size(), std::numeric_limits<double>::infinity());
  std::size_t cur = 0;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(cur);
    std::size_t next = 0;
    double far = -1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d[i] = std::min(d[i], (points[i] - points[cur]).squaredNorm());
      if (d[i] > far) far = d[i], next = i;
    }
    cur = next;
  }
  return out;
}

CpdResult nonrigid_register(const std::vector<Vec3>& reference, const std::vector<Vec3>& target, const CpdConfig& cfg) {
  if (reference.size() < 10 || target.size() < 10)
    fail(ErrorKind::invalid_argument, "nonrigid_register: both clouds need at least 10 points");
  if (!(cfg.beta > 0) || !(cfg.lambda > 0) || !(cfg.w >= 0 && cfg.w < 1) || cfg.max_iterations < 1 || cfg.max_points < 10)
    fail(ErrorKind::invalid_argument, "nonrigid_register: invalid configuration");

  const auto yi = farthest_point_indices(reference, static_cast<std::size_t>(cfg.max_points));
  const auto xi = farthest_point_indices(target, static_cast<std::size_t>(cfg.max_points));
  const Eigen::Index M = static_cast<Eigen::Index>(yi.size()), N = static_cast<Eigen::Index>(xi.size());
  constexpr double D = 3.0;

  Vec3 mu = Vec3::Zero();
  for (auto i : yi) mu += reference[i];
  mu /= static_cast<double>(M);
  double scale = 0;
  for (auto i : yi) scale += (reference[i] - mu).squaredNorm();
  scale = std::sqrt(scale / static_cast<double>(M));
  if (!(scale > 0)) fail(ErrorKind::degenerate, "nonrigid_register: reference cloud has zero extent");

  Eigen::MatrixXd Y(M, 3), X(N, 3);
  for (Eigen::Index m = 0; m < M; ++m) Y.row(m) = ((reference[yi[m]] - mu) / scale).transpose();
  for (Eigen::Index n = 0; n < N; ++n) X.row(n) = ((target[xi[n]] - mu) / scale).transpose();

  Eigen::MatrixXd G(M, M);
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = 0; j < M; ++j)
      G(i, j) = std::exp(-(Y.row(i) - Y.row(j)).squaredNorm() / (2 * cfg.beta * cfg.beta));

  double sigma2 = 0;
  for (Eigen::Index n = 0; n < N; ++n)
    for (Eigen::Index m = 0; m < M; ++m) sigma2 += (X.row(n) - Y.row(m)).squaredNorm();
  sigma2 /= D * static_cast<double>(M * N);

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(M, 3);
  Eigen::MatrixXd best_W = W;
  double best_L = std::numeric_limits<double>::infinity();
  double prev_L = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd P(M, N);
  CpdResult res;
  const double w = cfg.w;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    res.iterations = iter;
    const Eigen::MatrixXd T = Y + G * W;
    // E-step in the log domain; the uniform component joins the log-sum-exp.
    const double log_c = std::log(w > 0 ? w / (1 - w) * static_cast<double>(M) / static_cast<double>(N) : 0.0) +
                         0.5 * D * std::log(2 * M_PI * sigma2);
    double L = 0;
    for (Eigen::Index n = 0; n < N; ++n) {
      double amax = w > 0 ? log_c : -std::numeric_limits<double>::infinity();
      for (Eigen::Index m = 0; m < M; ++m) {
        P(m, n) = -(X.row(n) - T.row(m)).squaredNorm() / (2 * sigma2);
        amax = std::max(amax, P(m, n));
      }
      double s = w > 0 ? std::exp(log_c - amax) : 0.0;
      for (Eigen::Index m = 0; m < M; ++m) s += std::exp(P(m, n) - amax);
      const double lse = amax + std::log(s);
      for (Eigen::Index m = 0; m < M; ++m) P(m, n) = std::exp(P(m, n) - lse);
      L -= std::log((1 - w) / static_cast<double>(M)) - 0.5 * D * std::log(2 * M_PI * sigma2) + lse;
    }
    L += 0.5 * cfg.lambda * (W.transpose() * G * W).trace();

    if (L < best_L) best_L = L, best_W = W;
    if (std::isfinite(prev_L) && std::abs(prev_L - L) < cfg.tolerance * std::abs(prev_L)) {
      res.converged = true;
      break;
    }
    prev_L = L;

    const Eigen::VectorXd P1 = P.rowwise().sum();
    const double Np = P1.sum();
    if (!(Np > 0)) break;
    Eigen::MatrixXd A = P1.asDiagonal() * G;
    A.diagonal().array() += cfg.lambda * sigma2;
    W = A.partialPivLu().solve(P * X - P1.asDiagonal() * Y);

    const Eigen::MatrixXd T2 = Y + G * W;
    double num = 0;
    for (Eigen::Index n = 0; n < N; ++n)
      for (Eigen::Index m = 0; m < M; ++m) num += P(m, n) * (X.row(n) - T2.row(m)).squaredNorm();
    sigma2 = num / (Np * D);
    if (!(sigma2 > 1e-16)) {
      sigma2 = 1e-16;
      best_W = W;
      res.converged = true;
      break;
    }
  }

  res.objective = best_L;
  res.sigma2 = sigma2 * scale * scale;
  const Eigen::MatrixXd disp = G * best_W;
  res.map.bandwidth = cfg.beta * scale;
  for (Eigen::Index m = 0; m < M; ++m) {
    res.map.control_points.push_back(reference[yi[m]]);
    res.map.coefficients.push_back(scale * best_W.row(m).transpose());
    res.map.displacements.push_back(scale * disp.row(m).transpose());
  }
  return res;
}

}  // namespace keycontact
