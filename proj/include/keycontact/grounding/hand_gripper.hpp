#pragma once

#include "keycontact/geometry/pose.hpp"
#include "keycontact/grounding/tracked_entity.hpp"

namespace keycontact {

/// Parallel-gripper pose from thumb and index landmarks. Origin: midpoint of
/// the two tips. X: normal of the least-squares plane through all landmarks,
/// signed so X . ((thumb_tip - thumb_base) x (index_tip - origin)) >= 0.
/// Y: toward the index tip, projected off X. Z = X x Y.
Pose gripper_from_hand(const HandLandmarks& hand);

}  // namespace keycontact
