#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "keycontact/common/config_check.hpp"
#include "keycontact/sim/scene.hpp"

namespace keycontact {

struct CampaignConfig {
  std::vector<Profile> profiles{Profile::round};
  double clearance = 0.002;
  double depth = 0.02;
  double sdf_cell = 0.001;
  std::size_t surface_samples = 2000;
  std::vector<PerceptionNoise> noise_grid{PerceptionNoise{}};
  std::vector<SelectionMode> selections{SelectionMode::information_gain};
  int trials = 10;
  /// Scene seeds; when empty, 0 .. trials-1.
  std::vector<std::uint64_t> seeds;
  RefinementConfig refinement;
  /// Use each cell's perception noise as the filter prior instead of
  /// refinement.noise.prior_sigma_*.
  bool prior_from_perception = true;
  int workers = 1;
  void validate() const;
  std::vector<std::uint64_t> seed_list() const;
};

Json campaign_config_to_json(const CampaignConfig& c);
CampaignConfig campaign_config_from_json(const Json& j);
/// One unsigned integer per non-empty line; '#' starts a comment.
std::vector<std::uint64_t> read_seed_file(const std::filesystem::path& path);

struct TrialRecord {
  Profile profile = Profile::round;
  PerceptionNoise noise;
  SelectionMode selection = SelectionMode::information_gain;
  std::uint64_t seed = 0;
  InsertionOutcome vision;
  InsertionOutcome refined;
  int contacts_made = 0;
  bool aborted = false;
  /// Contacts until the keypoint error first fell within the clearance; 0
  /// when vision already was, -1 when never.
  int contacts_to_threshold = -1;
  std::vector<double> pose_entropy;  // prior, then after each update
  std::vector<double> weight_entropy;
  std::vector<double> translation_error;  // after each step
};

struct CellMetrics {
  Profile profile = Profile::round;
  PerceptionNoise noise;
  SelectionMode selection = SelectionMode::information_gain;
  int trials = 0;
  double vision_success_rate = 0.0;
  double refined_success_rate = 0.0;
  double vision_translation_mean = 0.0;
  double translation_mean = 0.0;
  double translation_p95 = 0.0;
  double rotation_mean = 0.0;
  double rotation_p95 = 0.0;
  double contacts_to_threshold_mean = 0.0;  // over trials that reached it
  int reached_threshold = 0;
  int aborted = 0;
  std::vector<double> pose_entropy_mean;  // per step, index 0 = prior
  std::vector<double> weight_entropy_mean;
  std::vector<double> translation_error_mean;
};

struct CampaignResult {
  std::vector<TrialRecord> trials;
  std::vector<CellMetrics> cells;
  double wall_seconds = 0.0;
};

using CampaignProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Every (profile, noise, selection, seed) combination. Trials are
/// independent; results are stored by index, so worker count never changes
/// the output.
CampaignResult run_campaign(const CampaignConfig& cfg, const CampaignProgress& progress = {});

std::vector<CellMetrics> summarize_trials(const std::vector<TrialRecord>& trials);
std::string trials_csv(const std::vector<TrialRecord>& trials);
/// Metrics only; wall time is kept out so identical runs give identical files.
Json campaign_summary_json(const CampaignResult& r);
/// trials.csv, summary.json and timing.json under `dir`.
void write_campaign_outputs(const CampaignResult& r, const std::filesystem::path& dir);

}  // namespace keycontact
