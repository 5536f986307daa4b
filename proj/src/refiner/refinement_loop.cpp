#include "keycontact/refiner/refinement_loop.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "keycontact/common/error.hpp"
#include "keycontact/common/seed.hpp"
#include "keycontact/refiner/information_gain.hpp"

namespace keycontact {

const char* to_string(SelectionMode m) { return m == SelectionMode::random ? "random" : "ig"; }

SelectionMode selection_mode_from_string(const std::string& s) {
  if (s == "ig") return SelectionMode::information_gain;
  if (s == "random") return SelectionMode::random;
  fail(ErrorKind::invalid_argument, "unknown selection mode '" + s + "'");
}

void RefinementConfig::validate() const {
  noise.validate();
  probe.validate();
  if (particles < 2) fail(ErrorKind::invalid_argument, "RefinementConfig: particles must be >= 2");
  if (contacts < 0) fail(ErrorKind::invalid_argument, "RefinementConfig: contacts must be >= 0");
  if (positions < 1 || orientations < 1 || scenarios < 1 || downsample < 1) {
    fail(ErrorKind::invalid_argument, "RefinementConfig: N_p, N_o, N_c and N_d must be >= 1");
  }
  if (max_divergences < 1 || max_attempts < 1) {
    fail(ErrorKind::invalid_argument, "RefinementConfig: max_divergences and max_attempts must be >= 1");
  }
}

namespace {
enum Stream : std::uint64_t { kInit = 1, kPredict, kCandidates, kSelect, kOrder, kResample };
}

RefinementResult run_refinement(const ContactProblem& problem, const Pose& master_pose, const Pose& initial_z,
                                const Pose& waypoint, ContactOracle& oracle, const RefinementConfig& cfg) {
  cfg.validate();
  RefinementResult res;
  res.initial = initial_z;
  res.estimate = initial_z;
  res.end_effector = end_effector_target(master_pose, waypoint, initial_z);
  if (cfg.contacts == 0) return res;

  ParticleSet ps = filter_init(initial_z, cfg.noise, cfg.particles, derive_seed(cfg.seed, {kInit}));
  res.initial_pose_entropy = pose_entropy(ps);
  const auto truth = oracle.ground_truth();
  int divergences = 0;

  for (int n = 1; n <= cfg.contacts; ++n) {
    const auto sn = static_cast<std::uint64_t>(n);
    StepDiagnostics d;
    d.step = n;
    ps = filter_predict(ps, cfg.noise, derive_seed(cfg.seed, {kPredict, sn}));
    const Pose believed = filter_estimate(ps);

    const auto candidates = sample_contact_candidates(problem.geometry.master(), cfg.positions, cfg.orientations,
                                                      derive_seed(cfg.seed, {kCandidates, sn}));
    std::vector<std::size_t> order;
    std::vector<double> ig;
    if (cfg.selection == SelectionMode::information_gain) {
      const auto sel = select_contact_strategy(ps, candidates, problem, master_pose, believed, cfg.scenarios,
                                               cfg.downsample, cfg.noise, cfg.probe,
                                               derive_seed(cfg.seed, {kSelect, sn}));
      order = sel.ranking;
      for (const auto& s : sel.scores) ig.push_back(s.expected_ig);
    } else {
      order.resize(candidates.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::mt19937_64 rng(derive_seed(cfg.seed, {kOrder, sn}));
      std::shuffle(order.begin(), order.end(), rng);
    }

    std::optional<ContactMeasurement> meas;
    for (std::size_t k = 0; k < order.size() && d.attempts < cfg.max_attempts; ++k) {
      ++d.attempts;
      meas = oracle.touch(candidates[order[k]], believed, n, d.attempts);
      if (meas && meas->confirmed) {
        d.strategy_index = order[k];
        d.strategy = candidates[order[k]];
        if (!ig.empty()) d.expected_ig = ig[order[k]];
        break;
      }
      meas.reset();
    }

    if (meas) {
      d.contact = true;
      ++res.contacts_made;
      ps = filter_update(ps, *meas, problem, cfg.noise);
      d.diverged = ps.diverged;
      divergences = ps.diverged ? divergences + 1 : 0;
    }
    d.weight_entropy = weight_entropy(ps.weights);
    d.pose_entropy = pose_entropy(ps);
    d.ess = effective_sample_size(ps.weights);
    d.resampled = d.ess < 0.5 * static_cast<double>(ps.size());
    ps = resample(ps, derive_seed(cfg.seed, {kResample, sn}));
    d.estimate = filter_estimate(ps);
    res.estimate = d.estimate;
    if (truth) {
      d.translation_error = (d.estimate.translation() - truth->translation()).norm();
      d.rotation_error = angular_distance(d.estimate.rotation(), truth->rotation());
    }
    res.steps.push_back(d);
    if (divergences >= cfg.max_divergences) {
      res.aborted = true;
      break;
    }
  }
  res.end_effector = end_effector_target(master_pose, waypoint, res.estimate);
  return res;
}

}  // namespace keycontact
