#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "keycontact/common/error.hpp"
#include "keycontact/common/config_check.hpp"
#include "keycontact/geometry/mesh_io.hpp"
#include "keycontact/sim/campaign.hpp"
#include "test_support.hpp"

using namespace keycontact;

namespace {

std::shared_ptr<const PegHoleShapes> shapes_for(Profile p) {
  PegHoleOptions o;
  o.profile = p;
  return std::make_shared<const PegHoleShapes>(make_peg_hole_shapes(o));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Distance from the origin to the supporting line of each edge.
std::vector<double> edge_offsets(const std::vector<Vec2>& poly) {
  std::vector<double> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    const Vec2 e = (b - a).normalized();
    out.push_back(std::abs(e.x() * a.y() - e.y() * a.x()));
  }
  return out;
}

}  // namespace

TEST_CASE("profiles are closed prisms with the hole offset by the clearance") {
  for (Profile p : all_profiles()) {
    CAPTURE(to_string(p));
    CHECK(profile_from_string(to_string(p)) == p);
    const auto poly = profile_polygon(p);
    const auto peg = make_prism(poly, 0.04);
    CHECK(peg.is_watertight());
    CHECK(peg.volume() > 0.0);
    const auto hole = offset_polygon(poly, 0.002);
    // Each hole edge is parallel to its peg edge and 2 mm further out.
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 pe = poly[(i + 1) % poly.size()] - poly[i];
      const Vec2 he = hole[(i + 1) % hole.size()] - hole[i];
      CHECK(std::abs(pe.x() * he.y() - pe.y() * he.x()) <= 1e-12 * pe.norm() * he.norm() + 1e-15);
      const Vec2 n = Vec2(pe.y(), -pe.x()).normalized();
      CHECK(n.dot(hole[i] - poly[i]) == doctest::Approx(0.002).epsilon(1e-9));
    }
    const auto block = make_block_with_hole(subdivide_by_angle(hole, 2 * M_PI / 64), 0.03, 0.03, 0.04);
    CHECK(block.is_watertight());
    CHECK(block.volume() > 0.0);
  }
  CHECK_THROWS_AS(profile_from_string("heart"), Error);

  // round: hole apothem = peg apothem + clearance
  const auto round = profile_polygon(Profile::round);
  const auto peg_off = edge_offsets(round);
  const auto hole_off = edge_offsets(offset_polygon(round, 0.002));
  for (std::size_t i = 0; i < peg_off.size(); ++i) {
    CHECK(peg_off[i] == doctest::Approx(0.01 * std::cos(M_PI / 64)).epsilon(1e-12));
    CHECK(hole_off[i] - peg_off[i] == doctest::Approx(0.002).epsilon(1e-9));
  }
}

TEST_CASE("ground-truth insertion is collision free and lateral offsets beyond the clearance collide") {
  for (Profile p : {Profile::round, Profile::hexagon, Profile::star}) {
    CAPTURE(to_string(p));
    const auto s = shapes_for(p);
    const Pose inserted = s->inserted_slave_pose();
    CHECK(exact_penetration_depth(s->master, Pose(), s->slave, inserted) <= 1e-9);
    for (double ang : {0.0, 1.1, 2.5, 4.0}) {
      const Vec3 dir(std::cos(ang), std::sin(ang), 0.0);
      const Pose shifted(inserted.rotation(), inserted.translation() + 0.004 * dir);
      const double pen = exact_penetration_depth(s->master, Pose(), s->slave, shifted);
      // Oracle: the deepest peg point pushed through the hole wall, from the
      // exact block distance over the peg vertices.
      double oracle = 0.0;
      for (const auto& v : s->slave.mesh().vertices)
        oracle = std::max(oracle, -s->master.exact_signed_distance(shifted * v));
      CHECK(pen > 0.0);
      CHECK(pen >= oracle - 1e-12);
    }
  }
  PegHoleOptions bad;
  bad.clearance = -0.001;
  CHECK_THROWS_AS(make_peg_hole_shapes(bad), Error);
  bad = PegHoleOptions{};
  bad.depth = 0.0;
  CHECK_THROWS_AS(make_peg_hole_shapes(bad), Error);
}

TEST_CASE("probe contacts sit on the surface") {
  const auto s = shapes_for(Profile::round);
  const Scene scene = make_peg_hole_scene(s, PerceptionNoise{}, 3);
  const ContactProblem problem = scene.problem(ContactModel::slave_surface);
  const auto candidates = sample_contact_candidates(s->master, 6, 6, 11);
  const ProbeSettings settings;
  int contacts = 0;
  for (const auto& c : candidates) {
    const auto out = simulate_probe(problem, scene.master_pose, c, scene.in_hand, scene.in_hand, settings);
    if (!out.contact) continue;
    ++contacts;
    const double g = problem.distance(scene.master_pose, out.end_effector, scene.in_hand);
    CHECK(std::abs(g) <= 1e-5);
    CHECK(out.travel <= settings.max_travel);
  }
  CHECK(contacts > static_cast<int>(candidates.size()) / 2);

  // Commands in the perceived frame touch with the true pose.
  SimContactOracle oracle(scene, ContactModel::slave_surface, settings, 0.0, 5);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto m = oracle.touch(candidates[i], scene.perceived_in_hand, 0, static_cast<int>(i));
    if (!m) continue;
    CHECK(std::abs(problem.distance(m->master, m->end_effector, scene.in_hand)) <= 1e-5);
  }
}

TEST_CASE("scene noise is recorded and reproducible") {
  const auto s = shapes_for(Profile::round);
  const Scene a = make_peg_hole_scene(s, PerceptionNoise{}, 42);
  const Scene b = make_peg_hole_scene(s, PerceptionNoise{}, 42);
  CHECK(testing::pose_gap(a.perceived_in_hand, b.perceived_in_hand) == 0.0);
  CHECK(testing::pose_gap(a.perceived_in_hand, a.in_hand * a.perception_noise) <= 1e-15);
  const Scene z = make_peg_hole_scene(s, PerceptionNoise{0.0, 0.0}, 42);
  CHECK(testing::pose_gap(z.perceived_in_hand, z.in_hand) == 0.0);
  const auto exact = evaluate_insertion(z, z.in_hand);
  CHECK(exact.success);
  CHECK(exact.translation_error == 0.0);
  const auto off = evaluate_insertion(z, z.in_hand * Pose(Quat::Identity(), Vec3(0.003, 0, 0)));
  CHECK_FALSE(off.success);
  CHECK(off.penetration > 0.0);
}

TEST_CASE("campaign metrics are deterministic and exact without noise") {
  CampaignConfig cfg;
  cfg.profiles = {Profile::round};
  cfg.noise_grid = {PerceptionNoise{0.0, 0.0}, PerceptionNoise{}};
  cfg.selections = {SelectionMode::information_gain, SelectionMode::random};
  cfg.seeds = {1, 2};
  cfg.refinement.particles = 100;
  cfg.refinement.contacts = 2;
  cfg.refinement.noise.d_th = 0.002;

  const auto r1 = run_campaign(cfg);
  REQUIRE(r1.trials.size() == 8);
  REQUIRE(r1.cells.size() == 4);
  const auto& clean = r1.cells[0];
  CHECK(clean.noise.sigma_t == 0.0);
  CHECK(clean.vision_success_rate == 1.0);
  CHECK(clean.refined_success_rate == 1.0);
  CHECK(clean.vision_translation_mean == 0.0);
  CHECK(clean.translation_mean < 0.002);
  for (const auto& t : r1.trials) CHECK(t.pose_entropy.size() == t.weight_entropy.size() + 1);

  // Indexed accumulation: more workers, same bytes.
  cfg.workers = 3;
  const auto r2 = run_campaign(cfg);
  const auto d1 = testing::temp_dir("campaign_a"), d2 = testing::temp_dir("campaign_b");
  write_campaign_outputs(r1, d1);
  write_campaign_outputs(r2, d2);
  CHECK(slurp(d1 / "trials.csv") == slurp(d2 / "trials.csv"));
  CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));
  CHECK(std::filesystem::exists(d1 / "timing.json"));

  // Zero contacts: refined equals vision for every trial.
  cfg.refinement.contacts = 0;
  cfg.noise_grid = {PerceptionNoise{}};
  cfg.selections = {SelectionMode::information_gain};
  for (const auto& t : run_campaign(cfg).trials) {
    CHECK(t.refined.translation_error == t.vision.translation_error);
    CHECK(t.refined.success == t.vision.success);
  }
}

TEST_CASE("campaign config json") {
  CampaignConfig cfg;
  cfg.profiles = {Profile::hexagon, Profile::star};
  cfg.seeds = {4, 9};
  cfg.noise_grid = {PerceptionNoise{0.003, 0.05}};
  const auto back = campaign_config_from_json(campaign_config_to_json(cfg));
  CHECK(campaign_config_to_json(back) == campaign_config_to_json(cfg));

  Json bad = campaign_config_to_json(cfg);
  bad["profiles"] = {"round", "heart"};
  bad["trials"] = 0;
  bad["noise_grid"][0]["sigma_t"] = -1;
  bad["refinement"]["particles"] = 0;
  bad["colour"] = "red";
  try {
    campaign_config_from_json(bad);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    std::vector<std::string> fields;
    for (const auto& i : e.issues()) fields.push_back(i.field);
    for (const char* f : {"profiles[1]", "trials", "noise_grid[0].sigma_t", "refinement.particles", "colour"}) {
      CAPTURE(f);
      CHECK(std::find(fields.begin(), fields.end(), f) != fields.end());
    }
  }

  const auto dir = testing::temp_dir("seedfile");
  {
    std::ofstream(dir / "s.txt") << "# seeds\n3\n\n17  # seventeen\n";
  }
  CHECK(read_seed_file(dir / "s.txt") == std::vector<std::uint64_t>{3, 17});
  {
    std::ofstream(dir / "bad.txt") << "3\n-4\n";
  }
  CHECK_THROWS_AS(read_seed_file(dir / "bad.txt"), Error);
}

TEST_CASE("scene export writes readable meshes") {
  const auto s = shapes_for(Profile::pentagon);
  const auto dir = testing::temp_dir("export");
  export_scene_obj(*s, dir);
  const auto block = read_obj(dir / "block.obj");
  const auto peg = read_obj(dir / "peg_inserted.obj");
  CHECK(block.faces.size() == s->master.mesh().faces.size());
  CHECK(peg.vertices.size() == s->slave.mesh().vertices.size());
  CHECK(block.is_watertight());
  CHECK(peg.is_watertight());
}
