#include "keycontact/refiner/probe.hpp"

#include <cmath>

#include "keycontact/common/error.hpp"

namespace keycontact {

void ProbeSettings::validate() const {
  if (!(step > 0.0)) fail(ErrorKind::invalid_argument, "ProbeSettings: step must be > 0");
  if (!(standoff >= 0.0)) fail(ErrorKind::invalid_argument, "ProbeSettings: standoff must be >= 0");
  if (!(max_travel > 0.0)) fail(ErrorKind::invalid_argument, "ProbeSettings: max_travel must be > 0");
  if (!(tolerance > 0.0)) fail(ErrorKind::invalid_argument, "ProbeSettings: tolerance must be > 0");
}

Pose probe_keypoint_pose(const ContactStrategy& strategy, double standoff, double s) {
  return Pose(strategy.keypoint_orientation, strategy.point - (standoff - s) * strategy.approach());
}

ProbeOutcome simulate_probe(const ContactProblem& problem, const Pose& master_pose, const ContactStrategy& strategy,
                            const Pose& believed_z, const Pose& true_z, const ProbeSettings& settings) {
  settings.validate();
  const ContactGeometry& geo = problem.geometry;
  // Slave object pose in the master frame for a commanded keypoint pose K:
  // K * believed^-1 * true * kf^-1.
  const Pose offset = believed_z.inverse() * true_z * problem.slave_keypoint.inverse();
  auto gap_at = [&](double s) { return geo.gap(probe_keypoint_pose(strategy, settings.standoff, s) * offset); };
  auto finish = [&](double s, double g, bool contact) {
    ProbeOutcome out;
    out.contact = contact;
    out.travel = s;
    out.gap = g;
    out.end_effector = master_pose * probe_keypoint_pose(strategy, settings.standoff, s) * believed_z.inverse();
    return out;
  };

  double lo = 0.0;
  double g_lo = gap_at(0.0);
  if (g_lo <= 0.0) {
    ProbeOutcome out = finish(0.0, g_lo, false);
    out.start_in_collision = true;
    return out;
  }
  if (g_lo <= settings.tolerance) return finish(0.0, g_lo, true);

  double hi = -1.0, g_hi = 0.0;
  while (lo < settings.max_travel) {
    const double stride = std::max(settings.step, g_lo - geo.grid_error());
    const double s = std::min(lo + stride, settings.max_travel);
    const double g = gap_at(s);
    if (g > 0.0 && g <= settings.tolerance) return finish(s, g, true);
    if (g <= 0.0) {
      hi = s;
      g_hi = g;
      break;
    }
    lo = s;
    g_lo = g;
  }
  if (hi < 0.0) return finish(lo, g_lo, false);

  // Illinois false position on the bracket [lo, hi].
  double f_lo = g_lo, f_hi = g_hi;
  int side = 0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = lo + (hi - lo) * f_lo / (f_lo - f_hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double g = gap_at(mid);
    if (g > 0.0 && g <= settings.tolerance) return finish(mid, g, true);
    if (g <= 0.0) {
      hi = mid;
      f_hi = g;
      if (side == -1) f_lo *= 0.5;
      side = -1;
    } else {
      lo = mid;
      g_lo = f_lo = g;
      if (side == 1) f_hi *= 0.5;
      side = 1;
    }
  }
  // The gap jumps across the tolerance band (a discontinuity in the distance
  // model); report the last separated pose.
  return finish(lo, g_lo, false);
}

}  // namespace keycontact
