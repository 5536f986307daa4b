#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>

#include "keycontact/refiner/refinement_loop.hpp"
#include "keycontact/sim/profiles.hpp"

namespace keycontact {

struct PegHoleOptions {
  Profile profile = Profile::round;
  double clearance = 0.002;
  double depth = 0.02;          // insertion depth of the waypoint
  double peg_length = 0.04;
  double block_radius = 0.03;
  double sdf_cell = 0.001;
  std::size_t surface_samples = 2000;
  std::optional<std::filesystem::path> cache_dir;
  void validate() const;
};

/// Shapes and frames shared by every trial of one peg/hole configuration.
/// Block frame: top face at z = 0, hole axis along z. Peg frame: bottom face
/// at z = 0, peg along +z.
struct PegHoleShapes {
  PegHoleOptions options;
  std::vector<Vec2> peg_outline;
  std::vector<Vec2> hole_outline;  // before angular subdivision
  ShapeModel master;  // block
  ShapeModel slave;   // peg
  ContactGeometry geometry;
  Pose master_kf;  // hole top centre, z into the hole
  Pose slave_kf;   // peg bottom centre, z out of the bottom
  Pose waypoint;   // slave keypoint at full insertion, master frame
  /// Peg pose in the block frame at full insertion.
  Pose inserted_slave_pose() const { return waypoint * slave_kf.inverse(); }
};

PegHoleShapes make_peg_hole_shapes(const PegHoleOptions& options);

struct PerceptionNoise {
  double sigma_t = 0.005;
  double sigma_r = 0.0872664625997165;  // 5 degrees
};

struct Scene {
  std::shared_ptr<const PegHoleShapes> shapes;
  Pose master_pose;            // true, world
  Pose perceived_master_pose;  // frozen after the first observation
  Pose in_hand;                // true z: slave keypoint in the gripper frame
  Pose perceived_in_hand;
  Pose perception_noise;       // perceived = true * noise
  std::uint64_t seed = 0;

  double clearance() const { return shapes->options.clearance; }
  ContactProblem problem(ContactModel model) const;
};

/// Master at a fixed world pose, perceived exactly; the in-hand pose carries
/// the full perception error.
Scene make_peg_hole_scene(std::shared_ptr<const PegHoleShapes> shapes, const PerceptionNoise& noise, std::uint64_t seed);
/// Builds the shapes too.
Scene make_peg_hole_scene(const PegHoleOptions& options, const PerceptionNoise& noise, std::uint64_t seed);

struct InsertionOutcome {
  double translation_error = 0.0;  // keypoint, m
  double rotation_error = 0.0;     // rad
  double penetration = 0.0;        // exact, at full depth
  bool success = false;
};

/// Commands the waypoint with estimate `z` and checks the true peg against
/// the block. Success: penetration <= 1e-6 m and translation error <=
/// clearance.
InsertionOutcome evaluate_insertion(const Scene& scene, const Pose& z);

/// Touches with the true in-hand pose; reported end-effector poses get
/// isotropic translation noise of `contact_sigma`.
class SimContactOracle : public ContactOracle {
 public:
  SimContactOracle(const Scene& scene, ContactModel model, const ProbeSettings& probe, double contact_sigma,
                   std::uint64_t seed);
  std::optional<ContactMeasurement> touch(const ContactStrategy& strategy, const Pose& believed_z, int step,
                                          int attempt) override;
  std::optional<Pose> ground_truth() const override { return scene_.in_hand; }
  const ProbeOutcome& last_probe() const { return last_; }

 private:
  const Scene& scene_;
  ContactProblem problem_;
  ProbeSettings probe_;
  double contact_sigma_;
  std::uint64_t seed_;
  ProbeOutcome last_;
};

/// Writes block.obj and peg_inserted.obj (peg at the ground-truth insertion,
/// block frame).
void export_scene_obj(const PegHoleShapes& shapes, const std::filesystem::path& dir);

}  // namespace keycontact
