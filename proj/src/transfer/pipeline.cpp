#include "keycontact/transfer/pipeline.hpp"

#include <cmath>
#include <functional>

#include "keycontact/common/config_check.hpp"
#include "keycontact/common/error.hpp"
#include "keycontact/geometry/kd_tree.hpp"
#include "keycontact/transfer/correspondence.hpp"
#include "keycontact/transfer/keypoint_solve.hpp"
#include "keycontact/transfer/ransac.hpp"
#include "keycontact/transfer/region.hpp"

namespace keycontact {

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    fail(ErrorKind::pipeline, std::string("transfer stage '") + name + "' failed (" + to_string(e.kind()) + "): " + e.what());
  }
}

}  // namespace

TransferResult transfer_keypoint(const PointCloud& reference, const KeypointFrame& reference_kf,
                                 const PointCloud& target, const std::string& target_owner,
                                 const TransferConfig& cfg) {
  if (!reference.has_features() || !target.has_features())
    fail(ErrorKind::invalid_argument, "transfer_keypoint: both clouds need per-point features");
  if (reference.feature_dim() != target.feature_dim())
    fail(ErrorKind::invalid_argument, "transfer_keypoint: feature dimensions differ (" + std::to_string(reference.feature_dim()) +
                                          " vs " + std::to_string(target.feature_dim()) + ")");
  reference_kf.validate();

  TransferResult out;
  auto& diag = out.diagnostics;
  const FeatureGrid ref_grid = stage("feature_grid", [&] { return build_feature_grid(reference, cfg.cell_size, reference_kf.owner); });
  const FeatureGrid tgt_grid = stage("feature_grid", [&] { return build_feature_grid(target, cfg.cell_size, target_owner); });
  diag.reference_voxels = ref_grid.size();
  diag.target_voxels = tgt_grid.size();

  const Eigen::VectorXd query = ref_grid.features.row(static_cast<Eigen::Index>(ref_grid.nearest_voxel(reference_kf.origin))).transpose();
  const OtsuResult ref_otsu = stage("otsu_region", [&] { return otsu_region(region_similarity(ref_grid, query)); });
  const OtsuResult tgt_otsu = stage("otsu_region", [&] { return otsu_region(region_similarity(tgt_grid, query)); });
  const FeatureGrid ref_region = ref_grid.subset(ref_otsu.selected);
  const FeatureGrid tgt_region = tgt_grid.subset(tgt_otsu.selected);
  diag.reference_region = ref_region.size();
  diag.target_region = tgt_region.size();
  diag.region_size_ratio = ref_region.size() ? static_cast<double>(tgt_region.size()) / static_cast<double>(ref_region.size()) : 0.0;
  diag.reference_threshold = ref_otsu.threshold;
  diag.target_threshold = tgt_otsu.threshold;

  diag.d_t = cfg.d_t >= 0 ? cfg.d_t : cfg.d_t_factor * median_nn_feature_distance(ref_region);
  const CorrespondenceSet pairs = stage("relaxed_best_buddies", [&] { return relaxed_best_buddies(ref_region, tgt_region, diag.d_t); });
  diag.correspondences = pairs.size();

  const RigidAlignment align = stage("ransac_rigid_align", [&] {
    return ransac_rigid_align(pairs, {cfg.ransac_iterations, cfg.inlier_eps, cfg.seed});
  });
  diag.inliers = align.inlier_count;
  diag.ransac_rms = align.rms_residual;
  diag.target_to_reference = align.target_to_reference;

  std::vector<Vec3> aligned;
  aligned.reserve(tgt_grid.size());
  for (const auto& p : tgt_grid.centers) aligned.push_back(align.target_to_reference * p);
  const CpdResult reg = stage("nonrigid_register", [&] { return nonrigid_register(ref_grid.centers, aligned, cfg.cpd); });
  diag.registration_objective = reg.objective;
  diag.registration_iterations = reg.iterations;
  diag.registration_converged = reg.converged;
  {
    KdTree3 tree(aligned);
    double s = 0;
    for (const auto& p : ref_grid.centers) s += std::sqrt(tree.nearest(reg.map.apply(p)).distance_sq);
    diag.registration_residual = s / static_cast<double>(ref_grid.size());
  }

  std::vector<Vec3> deformed;
  std::vector<double> weights;
  for (const auto& p : ref_region.centers) {
    deformed.push_back(reg.map.apply(p));
    const double r = (p - reference_kf.origin).norm() / cfg.solve_bandwidth;
    weights.push_back(std::exp(-0.5 * r * r));
  }
  const KeypointFrame solved = stage("solve_keypoint_frame", [&] {
    return solve_keypoint_frame(reference_kf, ref_region.centers, deformed, weights);
  });
  double wsum = 0;
  for (double x : weights) wsum += x;
  diag.solve_residual = std::sqrt(keypoint_frame_objective(solved.pose(), reference_kf.pose(), ref_region.centers, deformed, weights) / wsum);

  out.keypoint = KeypointFrame::from_pose(align.target_to_reference.inverse() * solved.pose(), target_owner, reference_kf.role);
  return out;
}

Json transfer_diagnostics_to_json(const TransferDiagnostics& d) {
  return Json{{"schema_version", 1},
              {"reference_voxels", d.reference_voxels},
              {"target_voxels", d.target_voxels},
              {"reference_region", d.reference_region},
              {"target_region", d.target_region},
              {"region_size_ratio", d.region_size_ratio},
              {"reference_threshold", d.reference_threshold},
              {"target_threshold", d.target_threshold},
              {"d_t", d.d_t},
              {"correspondences", d.correspondences},
              {"inliers", d.inliers},
              {"ransac_rms", d.ransac_rms},
              {"target_to_reference", pose_to_json(d.target_to_reference)},
              {"registration_objective", d.registration_objective},
              {"registration_residual", d.registration_residual},
              {"registration_iterations", d.registration_iterations},
              {"registration_converged", d.registration_converged},
              {"solve_residual", d.solve_residual}};
}

Json transfer_config_to_json(const TransferConfig& c) {
  return Json{{"cell_size", c.cell_size},
              {"d_t", c.d_t},
              {"d_t_factor", c.d_t_factor},
              {"ransac_iterations", c.ransac_iterations},
              {"inlier_eps", c.inlier_eps},
              {"solve_bandwidth", c.solve_bandwidth},
              {"seed", c.seed},
              {"cpd",
               {{"beta", c.cpd.beta},
                {"lambda", c.cpd.lambda},
                {"w", c.cpd.w},
                {"tolerance", c.cpd.tolerance},
                {"max_iterations", c.cpd.max_iterations},
                {"max_points", c.cpd.max_points}}}};
}

TransferConfig transfer_config_from_json(const Json& j) {
  TransferConfig c;
  std::vector<FieldIssue> issues;
  FieldReader r(j, "", issues);
  r.number("cell_size", c.cell_size);
  r.check(c.cell_size > 0, "cell_size", "must be > 0");
  r.number("d_t", c.d_t);
  r.number("d_t_factor", c.d_t_factor);
  r.check(c.d_t_factor > 0, "d_t_factor", "must be > 0");
  r.integer("ransac_iterations", c.ransac_iterations);
  r.check(c.ransac_iterations >= 1, "ransac_iterations", "must be >= 1");
  r.number("inlier_eps", c.inlier_eps);
  r.check(c.inlier_eps > 0, "inlier_eps", "must be > 0");
  r.number("solve_bandwidth", c.solve_bandwidth);
  r.check(c.solve_bandwidth > 0, "solve_bandwidth", "must be > 0");
  r.unsigned_integer("seed", c.seed);
  r.known("cpd");
  if (r.has("cpd")) {
    FieldReader q(r.at("cpd"), "cpd", issues);
    q.number("beta", c.cpd.beta);
    q.check(c.cpd.beta > 0, "beta", "must be > 0");
    q.number("lambda", c.cpd.lambda);
    q.check(c.cpd.lambda > 0, "lambda", "must be > 0");
    q.number("w", c.cpd.w);
    q.check(c.cpd.w >= 0 && c.cpd.w < 1, "w", "must be in [0, 1)");
    q.number("tolerance", c.cpd.tolerance);
    q.check(c.cpd.tolerance > 0, "tolerance", "must be > 0");
    q.integer("max_iterations", c.cpd.max_iterations);
    q.check(c.cpd.max_iterations >= 1, "max_iterations", "must be >= 1");
    q.integer("max_points", c.cpd.max_points);
    q.check(c.cpd.max_points >= 10, "max_points", "must be >= 10");
    q.reject_unknown();
  }
  r.reject_unknown();
  throw_if_issues(std::move(issues));
  return c;
}

}  // namespace keycontact
