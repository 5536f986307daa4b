#include "keycontact/refiner/particle_filter.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "keycontact/common/error.hpp"
#include "keycontact/geometry/rotation_stats.hpp"

namespace keycontact {

void NoiseConfig::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorKind::invalid_argument, std::string("NoiseConfig: ") + name + " must be >= 0");
  };
  nonneg(process_sigma_t, "process_sigma_t");
  nonneg(process_sigma_r, "process_sigma_r");
  nonneg(prior_sigma_t, "prior_sigma_t");
  nonneg(prior_sigma_r, "prior_sigma_r");
  nonneg(contact_sigma, "contact_sigma");
  if (!(d_th > 0.0) || !std::isfinite(d_th)) fail(ErrorKind::invalid_argument, "NoiseConfig: d_th must be > 0");
}

const char* to_string(ContactModel m) {
  return m == ContactModel::keypoint ? "keypoint" : "slave_surface";
}

ContactModel contact_model_from_string(const std::string& s) {
  if (s == "keypoint") return ContactModel::keypoint;
  if (s == "slave_surface") return ContactModel::slave_surface;
  fail(ErrorKind::invalid_argument, "unknown contact model '" + s + "'");
}

Pose ContactProblem::slave_in_master(const Pose& master_pose, const Pose& end_effector, const Pose& z) const {
  return master_pose.inverse() * end_effector * z * slave_keypoint.inverse();
}

double ContactProblem::distance(const Pose& master_pose, const Pose& end_effector, const Pose& z) const {
  if (model == ContactModel::keypoint) {
    const Pose kf = master_pose.inverse() * end_effector * z;
    return geometry.master_distance(kf.translation());
  }
  return geometry.gap(slave_in_master(master_pose, end_effector, z));
}

void ParticleSet::validate() const {
  if (particles.size() < 1 || particles.size() != weights.size()) {
    fail(ErrorKind::invalid_argument, "ParticleSet: particles and weights must be non-empty and equal in size");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::invalid_argument, "ParticleSet: weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail(ErrorKind::invalid_argument, "ParticleSet: weights must sum to 1");
}

double contact_likelihood(double d, double d_th) {
  if (!(d_th > 0.0)) fail(ErrorKind::invalid_argument, "contact_likelihood: d_th must be > 0");
  const double a = std::abs(d);
  return a <= d_th ? 1.0 - a / d_th : 0.0;
}

ParticleSet filter_init(const Pose& initial, const NoiseConfig& noise, std::size_t m, std::uint64_t seed) {
  noise.validate();
  if (m < 2) fail(ErrorKind::invalid_argument, "filter_init: need at least 2 particles");
  std::mt19937_64 rng(seed);
  ParticleSet ps;
  ps.particles.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    ps.particles.push_back(initial * sample_pose_noise(rng, noise.prior_sigma_t, noise.prior_sigma_r));
  }
  ps.weights.assign(m, 1.0 / static_cast<double>(m));
  return ps;
}

ParticleSet filter_predict(const ParticleSet& ps, const NoiseConfig& noise, std::uint64_t seed) {
  noise.validate();
  std::mt19937_64 rng(seed);
  ParticleSet out = ps;
  for (auto& p : out.particles) p = p * sample_pose_noise(rng, noise.process_sigma_t, noise.process_sigma_r);
  return out;
}

std::vector<double> particle_likelihoods(const std::vector<Pose>& particles, const ContactMeasurement& meas,
                                         const ContactProblem& problem, double d_th) {
  std::vector<double> lik(particles.size());
  for (std::size_t j = 0; j < particles.size(); ++j) {
    lik[j] = contact_likelihood(problem.distance(meas.master, meas.end_effector, particles[j]), d_th);
  }
  return lik;
}

ParticleSet filter_update(const ParticleSet& ps, const ContactMeasurement& meas, const ContactProblem& problem,
                          const NoiseConfig& noise) {
  ps.validate();
  noise.validate();
  if (!meas.confirmed) fail(ErrorKind::invalid_argument, "filter_update: measurement not confirmed");
  const auto lik = particle_likelihoods(ps.particles, meas, problem, noise.d_th);
  ParticleSet out = ps;
  out.step = ps.step + 1;
  double total = 0.0;
  for (std::size_t j = 0; j < lik.size(); ++j) total += ps.weights[j] * lik[j];
  if (!(total > 0.0)) {
    out.diverged = true;
    return out;
  }
  out.diverged = false;
  for (std::size_t j = 0; j < lik.size(); ++j) out.weights[j] = ps.weights[j] * lik[j] / total;
  return out;
}

Pose filter_estimate(const ParticleSet& ps) {
  ps.validate();
  std::size_t nonzero = 0, last = 0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    if (ps.weights[j] > 0.0) {
      ++nonzero;
      last = j;
    }
  }
  if (nonzero == 1) return ps.particles[last];
  Vec3 t = Vec3::Zero();
  std::vector<Quat> rots;
  rots.reserve(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) {
    t += ps.weights[j] * ps.particles[j].translation();
    rots.push_back(ps.particles[j].rotation());
  }
  return Pose(average_quaternions(rots, ps.weights), t);
}

double effective_sample_size(const std::vector<double>& weights) {
  double s2 = 0.0;
  for (double w : weights) s2 += w * w;
  if (!(s2 > 0.0)) fail(ErrorKind::invalid_argument, "effective_sample_size: all weights zero");
  return 1.0 / s2;
}

std::vector<std::size_t> systematic_indices(const std::vector<double>& weights, std::size_t n, double u0) {
  if (weights.empty() || n == 0) fail(ErrorKind::invalid_argument, "systematic_indices: empty input");
  if (!(u0 >= 0.0 && u0 < 1.0)) fail(ErrorKind::invalid_argument, "systematic_indices: u0 must be in [0, 1)");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) fail(ErrorKind::invalid_argument, "systematic_indices: all weights zero");
  std::vector<std::size_t> out;
  out.reserve(n);
  std::size_t j = 0;
  double cum = weights[0] / total;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (u0 + static_cast<double>(i)) / static_cast<double>(n);
    while (u >= cum && j + 1 < weights.size()) cum += weights[++j] / total;
    // Never land on a zero-weight particle because of rounding at the top.
    while (weights[j] == 0.0 && j > 0) --j;
    out.push_back(j);
  }
  return out;
}

ParticleSet resample(const ParticleSet& ps, std::uint64_t seed) {
  ps.validate();
  const double m = static_cast<double>(ps.size());
  if (effective_sample_size(ps.weights) >= 0.5 * m) return ps;
  std::mt19937_64 rng(seed);
  const double u0 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto idx = systematic_indices(ps.weights, ps.size(), u0);
  ParticleSet out = ps;
  for (std::size_t i = 0; i < idx.size(); ++i) out.particles[i] = ps.particles[idx[i]];
  out.weights.assign(ps.size(), 1.0 / m);
  return out;
}

double pose_entropy(const ParticleSet& ps) {
  ps.validate();
  const Pose mean = filter_estimate(ps);
  const Quat qinv = mean.rotation().conjugate();
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  Vec6 mu = Vec6::Zero();
  std::vector<Vec6> v(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) {
    v[j].head<3>() = ps.particles[j].translation() - mean.translation();
    v[j].tail<3>() = rotation_log(qinv * ps.particles[j].rotation());
    mu += ps.weights[j] * v[j];
  }
  Eigen::Matrix<double, 6, 6> cov = Eigen::Matrix<double, 6, 6>::Zero();
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const Vec6 d = v[j] - mu;
    cov += ps.weights[j] * d * d.transpose();
  }
  // Floor keeps collapsed sets finite (1e-7 m / 1e-7 rad standard deviation).
  cov.diagonal().array() += 1e-14;
  const double logdet = cov.ldlt().vectorD().array().log().sum();
  return 0.5 * (6.0 * std::log(2.0 * M_PI * M_E) + logdet);
}

Pose end_effector_target(const Pose& master_pose, const Pose& waypoint, const Pose& z) {
  return master_pose * waypoint * z.inverse();
}

}  // namespace keycontact
