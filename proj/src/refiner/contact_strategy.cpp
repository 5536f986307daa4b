#include "keycontact/refiner/contact_strategy.hpp"

#include <cmath>
#include <random>

#include "keycontact/common/error.hpp"
#include "keycontact/common/seed.hpp"
#include "keycontact/refiner/information_gain.hpp"
#include "keycontact/refiner/probe.hpp"

namespace keycontact {

ContactStrategy make_contact_strategy(const Vec3& point, const Vec3& normal, double azimuth, double elevation,
                                      double roll) {
  if (!point.allFinite() || !normal.allFinite() || normal.norm() < 1e-12) {
    fail(ErrorKind::invalid_argument, "make_contact_strategy: invalid point or normal");
  }
  if (!(elevation > 0.0 && elevation <= M_PI / 2 + 1e-12)) {
    fail(ErrorKind::invalid_argument, "make_contact_strategy: elevation must be in (0, pi/2]");
  }
  ContactStrategy s;
  s.point = point;
  s.azimuth = azimuth;
  s.elevation = elevation;
  s.roll = roll;
  const Vec3 z = normal.normalized();
  const Vec3 x = any_orthogonal(z);
  s.frame = Pose::from_axes(x, z.cross(x), z, point);

  const Vec3 u = std::cos(elevation) * (std::cos(azimuth) * x + std::sin(azimuth) * z.cross(x)) +
                 std::sin(elevation) * z;
  const Vec3 a = -u.normalized();
  Vec3 ref = x - x.dot(a) * a;
  if (ref.norm() < 1e-6) ref = any_orthogonal(a);
  ref.normalize();
  const Vec3 kx = std::cos(roll) * ref + std::sin(roll) * a.cross(ref);
  s.keypoint_orientation = Pose::from_axes(kx, a.cross(kx), a, Vec3::Zero()).rotation();
  return s;
}

std::vector<ContactStrategy> sample_contact_candidates(const ShapeModel& master, int n_p, int n_o,
                                                       std::uint64_t seed) {
  if (n_p < 1 || n_o < 1) fail(ErrorKind::invalid_argument, "sample_contact_candidates: N_p and N_o must be >= 1");
  std::mt19937_64 rng(seed);
  const auto points = sample_surface_uniform(master.mesh(), static_cast<std::size_t>(n_p), rng);
  int rows = 1;
  for (int r = 1; r * r <= n_o; ++r) {
    if (n_o % r == 0) rows = r;
  }
  const int cols = n_o / rows;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ContactStrategy> out;
  out.reserve(static_cast<std::size_t>(n_p * n_o));
  for (const auto& sp : points) {
    const Vec3 n = master.mesh().face_normal(sp.face);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        // Uniform in sin(elevation) is area-uniform over the hemisphere.
        const double su = (r + unit(rng)) / rows;
        const double el = std::asin(std::max(su, 1e-6));
        const double az = 2.0 * M_PI * (c + unit(rng)) / cols;
        const double roll = 2.0 * M_PI * unit(rng);
        out.push_back(make_contact_strategy(sp.point, n, az, el, roll));
      }
    }
  }
  return out;
}

StrategySelection select_contact_strategy(const ParticleSet& ps, const std::vector<ContactStrategy>& candidates,
                                          const ContactProblem& problem, const Pose& master_pose,
                                          const Pose& believed_z, int n_c, int n_d, const NoiseConfig& noise,
                                          const ProbeSettings& probe, std::uint64_t seed) {
  ps.validate();
  noise.validate();
  probe.validate();
  if (candidates.empty()) fail(ErrorKind::invalid_argument, "select_contact_strategy: no candidates");
  if (n_c < 1 || n_d < 1) fail(ErrorKind::invalid_argument, "select_contact_strategy: N_c and N_d must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto sub_idx = systematic_indices(ps.weights, static_cast<std::size_t>(n_d), unit(rng));
  const auto truth_idx = systematic_indices(ps.weights, static_cast<std::size_t>(n_c), unit(rng));
  std::vector<Pose> subset;
  subset.reserve(sub_idx.size());
  for (auto i : sub_idx) subset.push_back(ps.particles[i]);

  StrategySelection sel;
  sel.scores.resize(candidates.size());
  const double log_nd = std::log(static_cast<double>(n_d));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CandidateScore& sc = sel.scores[i];
    double h_sum = 0.0;
    for (auto t : truth_idx) {
      const ProbeOutcome out = simulate_probe(problem, master_pose, candidates[i], believed_z, ps.particles[t], probe);
      if (!out.contact) continue;
      const ContactMeasurement meas{out.end_effector, master_pose, true};
      auto w = particle_likelihoods(subset, meas, problem, noise.d_th);
      double total = 0.0;
      for (double x : w) total += x;
      if (!(total > 0.0)) continue;
      for (double& x : w) x /= total;
      h_sum += weight_entropy(w);
      ++sc.valid_scenarios;
    }
    if (sc.valid_scenarios > 0) {
      sc.mean_entropy = h_sum / sc.valid_scenarios;
      sc.expected_ig = log_nd - sc.mean_entropy;
      sel.ranking.push_back(i);
    }
  }
  std::stable_sort(sel.ranking.begin(), sel.ranking.end(), [&](std::size_t a, std::size_t b) {
    return sel.scores[a].mean_entropy < sel.scores[b].mean_entropy;
  });
  if (!sel.ranking.empty()) {
    sel.best = sel.ranking.front();
    sel.expected_ig = sel.scores[*sel.best].expected_ig;
  }
  return sel;
}

}  // namespace keycontact
