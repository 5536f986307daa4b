#pragma once

#include "keycontact/refiner/contact_strategy.hpp"
#include "keycontact/refiner/particle_filter.hpp"

namespace keycontact {

struct ProbeSettings {
  double standoff = 0.02;     // start this far back along the approach
  double step = 0.0005;       // minimum advance per iteration
  double max_travel = 0.04;
  double tolerance = 1e-5;    // contact when 0 < gap <= tolerance
  void validate() const;
};

struct ProbeOutcome {
  bool contact = false;
  bool start_in_collision = false;
  Pose end_effector;  // commanded end-effector pose at contact (or at the end of travel)
  double travel = 0.0;
  double gap = 0.0;   // true gap at the reported pose
};

/// Drives the slave keypoint along the strategy's approach line. The
/// commanded end-effector path uses the believed in-hand estimate; contact is
/// decided with the true one.
ProbeOutcome simulate_probe(const ContactProblem& problem, const Pose& master_pose, const ContactStrategy& strategy,
                            const Pose& believed_z, const Pose& true_z, const ProbeSettings& settings);

/// Commanded slave keypoint pose (master frame) after travelling s.
Pose probe_keypoint_pose(const ContactStrategy& strategy, double standoff, double s);

}  // namespace keycontact
