#include "keycontact/sim/scene.hpp"

#include <cmath>
#include <random>

#include "keycontact/common/error.hpp"
#include "keycontact/common/seed.hpp"
#include "keycontact/geometry/mesh_io.hpp"

namespace keycontact {

void PegHoleOptions::validate() const {
  if (!(clearance >= 0.0)) fail(ErrorKind::invalid_argument, "peg/hole: clearance must be >= 0");
  if (!(depth > 0.0)) fail(ErrorKind::invalid_argument, "peg/hole: depth must be > 0");
  if (!(peg_length > depth)) fail(ErrorKind::invalid_argument, "peg/hole: peg_length must exceed depth");
  if (!(sdf_cell > 0.0)) fail(ErrorKind::invalid_argument, "peg/hole: sdf_cell must be > 0");
  if (!(block_radius > 0.0)) fail(ErrorKind::invalid_argument, "peg/hole: block_radius must be > 0");
}

PegHoleShapes make_peg_hole_shapes(const PegHoleOptions& options) {
  options.validate();
  PegHoleShapes s;
  s.options = options;
  s.peg_outline = profile_polygon(options.profile);
  s.hole_outline = options.clearance > 0.0 ? offset_polygon(s.peg_outline, options.clearance) : s.peg_outline;
  const double cavity = options.depth + 0.01;
  TriangleMesh block = make_block_with_hole(subdivide_by_angle(s.hole_outline, 2.0 * M_PI / 64.0 + 1e-9),
                                            options.block_radius, cavity, cavity + 0.01);
  TriangleMesh peg = make_prism(s.peg_outline, options.peg_length);
  ShapeOptions so;
  so.cell = options.sdf_cell;
  so.surface_samples = options.surface_samples;
  so.cache_dir = options.cache_dir;
  s.master = ShapeModel::build(std::move(block), so);
  s.slave = ShapeModel::build(std::move(peg), so);
  s.geometry = ContactGeometry(s.master, s.slave);
  const Quat flip(Eigen::AngleAxisd(M_PI, Vec3::UnitX()));
  s.master_kf = Pose::from_rotation(flip);
  s.slave_kf = Pose::from_rotation(flip);
  s.waypoint = s.master_kf * Pose::from_translation(Vec3(0.0, 0.0, options.depth));
  return s;
}

ContactProblem Scene::problem(ContactModel model) const {
  ContactProblem p;
  p.geometry = shapes->geometry;
  p.slave_keypoint = shapes->slave_kf;
  p.model = model;
  return p;
}

Scene make_peg_hole_scene(std::shared_ptr<const PegHoleShapes> shapes, const PerceptionNoise& noise,
                          std::uint64_t seed) {
  if (!shapes) fail(ErrorKind::invalid_argument, "make_peg_hole_scene: no shapes");
  if (!(noise.sigma_t >= 0.0 && noise.sigma_r >= 0.0)) {
    fail(ErrorKind::invalid_argument, "make_peg_hole_scene: noise must be >= 0");
  }
  Scene s;
  s.shapes = std::move(shapes);
  s.seed = seed;
  s.master_pose = Pose(Quat(Eigen::AngleAxisd(0.4, Vec3::UnitZ())), Vec3(0.45, 0.1, 0.02));
  s.perceived_master_pose = s.master_pose;
  s.in_hand = Pose::from_translation(Vec3(0.0, 0.0, 0.03));
  std::mt19937_64 rng(derive_seed(seed, {0x7065ULL}));
  s.perception_noise = sample_pose_noise(rng, noise.sigma_t, noise.sigma_r);
  s.perceived_in_hand = s.in_hand * s.perception_noise;
  return s;
}

Scene make_peg_hole_scene(const PegHoleOptions& options, const PerceptionNoise& noise, std::uint64_t seed) {
  return make_peg_hole_scene(std::make_shared<const PegHoleShapes>(make_peg_hole_shapes(options)), noise, seed);
}

InsertionOutcome evaluate_insertion(const Scene& scene, const Pose& z) {
  const PegHoleShapes& sh = *scene.shapes;
  InsertionOutcome out;
  out.translation_error = (z.translation() - scene.in_hand.translation()).norm();
  out.rotation_error = angular_distance(z.rotation(), scene.in_hand.rotation());
  const Pose ee = end_effector_target(scene.perceived_master_pose, sh.waypoint, z);
  const Pose peg_in_block = scene.master_pose.inverse() * ee * scene.in_hand * sh.slave_kf.inverse();
  out.penetration = exact_penetration_depth(sh.slave, peg_in_block, sh.master, Pose::identity());
  out.success = out.penetration <= 1e-6 && out.translation_error <= scene.clearance();
  return out;
}

SimContactOracle::SimContactOracle(const Scene& scene, ContactModel model, const ProbeSettings& probe,
                                   double contact_sigma, std::uint64_t seed)
    : scene_(scene), problem_(scene.problem(model)), probe_(probe), contact_sigma_(contact_sigma), seed_(seed) {
  probe_.validate();
  if (!(contact_sigma >= 0.0)) fail(ErrorKind::invalid_argument, "SimContactOracle: contact_sigma must be >= 0");
}

std::optional<ContactMeasurement> SimContactOracle::touch(const ContactStrategy& strategy, const Pose& believed_z,
                                                          int step, int attempt) {
  // Commanded in the perceived master frame, executed against the true one.
  const Pose master_err = scene_.master_pose.inverse() * scene_.perceived_master_pose;
  ContactStrategy actual = strategy;
  actual.point = master_err * strategy.point;
  actual.keypoint_orientation = master_err.rotation() * strategy.keypoint_orientation;
  last_ = simulate_probe(problem_, scene_.master_pose, actual, believed_z, scene_.in_hand, probe_);
  if (!last_.contact) return std::nullopt;
  Pose ee = last_.end_effector;
  if (contact_sigma_ > 0.0) {
    std::mt19937_64 rng(derive_seed(seed_, {static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(attempt)}));
    ee = Pose(ee.rotation(), ee.translation() + sample_pose_noise(rng, contact_sigma_, 0.0).translation());
  }
  return ContactMeasurement{ee, scene_.perceived_master_pose, true};
}

void export_scene_obj(const PegHoleShapes& shapes, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_obj(shapes.master.mesh(), dir / "block.obj");
  write_obj(shapes.slave.mesh().transformed(shapes.inserted_slave_pose()), dir / "peg_inserted.obj");
}

}  // namespace keycontact
