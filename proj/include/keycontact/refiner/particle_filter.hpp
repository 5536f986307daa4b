#pragma once

#include <cstdint>
#include <vector>

#include "keycontact/refiner/contact_geometry.hpp"

namespace keycontact {

struct NoiseConfig {
  double process_sigma_t = 0.001;  // m
  double process_sigma_r = 0.01;   // rad, axis-angle magnitude
  double prior_sigma_t = 0.005;    // spread of the initial particle cloud
  double prior_sigma_r = 0.0872664625997165;  // 5 degrees
  double d_th = 0.01;              // contact distance threshold, m
  double contact_sigma = 0.0;      // measurement noise on the end-effector translation, m
  void validate() const;
};

/// How a hypothesis is scored against a contact.
enum class ContactModel {
  keypoint,       // master SDF at the hypothesized slave keypoint origin
  slave_surface,  // signed gap between the hypothesized slave shape and the master
};
const char* to_string(ContactModel m);
ContactModel contact_model_from_string(const std::string& s);

/// Fixed geometry of a refinement problem: shapes, the slave keypoint in the
/// slave object frame, and the distance model.
struct ContactProblem {
  ContactGeometry geometry;
  Pose slave_keypoint;  // x_S^kf
  ContactModel model = ContactModel::slave_surface;

  /// Slave object pose in the master frame implied by hypothesis z.
  Pose slave_in_master(const Pose& master_pose, const Pose& end_effector, const Pose& z) const;
  /// d for hypothesis z under the measurement.
  double distance(const Pose& master_pose, const Pose& end_effector, const Pose& z) const;
};

struct ContactMeasurement {
  Pose end_effector;  // x_W^G
  Pose master;        // x_W^M
  bool confirmed = false;
};

struct ParticleSet {
  std::vector<Pose> particles;
  std::vector<double> weights;
  int step = 0;
  bool diverged = false;  // last update had all-zero likelihood

  std::size_t size() const { return particles.size(); }
  void validate() const;
};

/// 1 - |d| / d_th inside the threshold, 0 outside.
double contact_likelihood(double d, double d_th);

ParticleSet filter_init(const Pose& initial, const NoiseConfig& noise, std::size_t m, std::uint64_t seed);
ParticleSet filter_predict(const ParticleSet& ps, const NoiseConfig& noise, std::uint64_t seed);
/// Normalized likelihood weights. When every likelihood is zero the input is
/// returned with `diverged` set and weights untouched.
ParticleSet filter_update(const ParticleSet& ps, const ContactMeasurement& meas, const ContactProblem& problem,
                          const NoiseConfig& noise);
/// Likelihoods before normalization.
std::vector<double> particle_likelihoods(const std::vector<Pose>& particles, const ContactMeasurement& meas,
                                         const ContactProblem& problem, double d_th);
Pose filter_estimate(const ParticleSet& ps);
double effective_sample_size(const std::vector<double>& weights);
/// Systematic resampling when ESS < M/2; otherwise returned unchanged.
ParticleSet resample(const ParticleSet& ps, std::uint64_t seed);
/// Systematic draw of n indices proportional to weights.
std::vector<std::size_t> systematic_indices(const std::vector<double>& weights, std::size_t n, double u0);

/// Gaussian differential entropy (nats) of the weighted particle cloud in
/// (translation, rotation-vector) coordinates about the estimate.
double pose_entropy(const ParticleSet& ps);

/// x_W^G = x_W^M * x_M^P * z^-1.
Pose end_effector_target(const Pose& master_pose, const Pose& waypoint, const Pose& z);

}  // namespace keycontact
