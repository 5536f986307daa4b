#pragma once

#include <optional>
#include <string>
#include <vector>

#include "keycontact/refiner/contact_strategy.hpp"
#include "keycontact/refiner/particle_filter.hpp"
#include "keycontact/refiner/probe.hpp"

namespace keycontact {

enum class SelectionMode { information_gain, random };
const char* to_string(SelectionMode m);
SelectionMode selection_mode_from_string(const std::string& s);

struct RefinementConfig {
  NoiseConfig noise;
  std::size_t particles = 500;  // M
  int contacts = 6;             // N_T
  int positions = 4;            // N_p
  int orientations = 12;        // N_o
  int scenarios = 4;            // N_c
  int downsample = 10;          // N_d
  SelectionMode selection = SelectionMode::information_gain;
  ContactModel contact_model = ContactModel::slave_surface;
  ProbeSettings probe;
  int max_divergences = 3;  // consecutive all-zero updates before aborting
  int max_attempts = 8;     // candidates tried per step until one touches
  std::uint64_t seed = 0;
  void validate() const;
};

/// Executes touches. The simulator implements it with ground truth; a robot
/// driver would implement it with force sensing.
class ContactOracle {
 public:
  virtual ~ContactOracle() = default;
  /// Touch with the strategy while commanding with `believed_z`. Returns a
  /// confirmed measurement, or nothing when no contact happened.
  virtual std::optional<ContactMeasurement> touch(const ContactStrategy& strategy, const Pose& believed_z,
                                                  int step, int attempt) = 0;
  /// Ground-truth in-hand pose when known (simulation only).
  virtual std::optional<Pose> ground_truth() const { return std::nullopt; }
};

struct StepDiagnostics {
  int step = 0;
  bool contact = false;
  int attempts = 0;
  std::optional<std::size_t> strategy_index;
  std::optional<ContactStrategy> strategy;
  double expected_ig = 0.0;
  bool diverged = false;
  double weight_entropy = 0.0;  // after the update, before resampling
  double pose_entropy = 0.0;    // after the update, before resampling
  double ess = 0.0;
  bool resampled = false;
  Pose estimate;
  std::optional<double> translation_error;
  std::optional<double> rotation_error;
};

struct RefinementResult {
  Pose initial;
  Pose estimate;
  Pose end_effector;  // target for the waypoint under the final estimate
  double initial_pose_entropy = 0.0;
  std::vector<StepDiagnostics> steps;
  bool aborted = false;
  int contacts_made = 0;
};

/// predict, choose a touch, probe, update, resample, estimate; N_T times.
RefinementResult run_refinement(const ContactProblem& problem, const Pose& master_pose, const Pose& initial_z,
                                const Pose& waypoint, ContactOracle& oracle, const RefinementConfig& cfg);

}  // namespace keycontact
