#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "keycontact/geometry/shape_model.hpp"

namespace keycontact {

struct ProbeSettings;
struct ContactProblem;
struct NoiseConfig;
struct ParticleSet;

/// A touch: a master surface point with a local frame (Z = outward normal,
/// X in the tangent plane) and the slave keypoint orientation used to approach
/// it. The slave keypoint's z axis is the approach direction; its reverse lies
/// in the outward hemisphere at the given azimuth/elevation of the local frame.
struct ContactStrategy {
  Vec3 point = Vec3::Zero();  // master frame
  Pose frame;                 // local frame in the master frame
  double azimuth = 0.0;
  double elevation = M_PI / 2;  // angle above the tangent plane
  double roll = 0.0;
  Quat keypoint_orientation = Quat::Identity();  // slave keypoint in the master frame

  Vec3 normal() const { return frame.z_axis(); }
  Vec3 approach() const { return keypoint_orientation * Vec3::UnitZ(); }
};

ContactStrategy make_contact_strategy(const Vec3& point, const Vec3& normal, double azimuth, double elevation, double roll);

/// n_p area-uniform surface points, n_o stratified approach orientations each.
std::vector<ContactStrategy> sample_contact_candidates(const ShapeModel& master, int n_p, int n_o, std::uint64_t seed);

struct CandidateScore {
  double mean_entropy = 0.0;
  double expected_ig = 0.0;
  int valid_scenarios = 0;
};

struct StrategySelection {
  std::optional<std::size_t> best;  // none when every candidate was excluded
  double expected_ig = 0.0;
  std::vector<CandidateScore> scores;
  std::vector<std::size_t> ranking;  // valid candidates, best first
};

/// Scores each candidate by the mean posterior weight entropy over n_c
/// hypothetical ground truths, using an n_d particle subset with a uniform
/// prior. Scenario probes are noise-free and commanded with `believed_z`.
StrategySelection select_contact_strategy(const ParticleSet& ps, const std::vector<ContactStrategy>& candidates,
                                          const ContactProblem& problem, const Pose& master_pose,
                                          const Pose& believed_z, int n_c, int n_d, const NoiseConfig& noise,
                                          const ProbeSettings& probe, std::uint64_t seed);

}  // namespace keycontact
