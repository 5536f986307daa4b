#pragma once

#include "keycontact/common/json_io.hpp"
#include "keycontact/constraints/grasp_region.hpp"
#include "keycontact/constraints/trajectory_spec.hpp"

namespace keycontact {

inline constexpr int kConstraintSchemaVersion = 1;

Json obb_to_json(const Obb& box);
Obb obb_from_json(const Json& j, const std::string& where);

Json grasp_region_to_json(const GraspRegion& region);
GraspRegion grasp_region_from_json(const Json& j, const std::string& where = "grasp_region");

/// Literal bindings serialize as numbers, the rest as expression strings.
Json trajectory_spec_to_json(const TrajectorySpec& spec);
TrajectorySpec trajectory_spec_from_json(const Json& j, const std::string& where = "trajectory_spec");

Json semantic_constraint_to_json(const SemanticConstraint& c);
SemanticConstraint semantic_constraint_from_json(const Json& j, const std::string& where = "semantic_constraint");

}  // namespace keycontact
