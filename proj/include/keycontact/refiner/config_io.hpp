#pragma once

#include "keycontact/common/config_check.hpp"
#include "keycontact/refiner/collision_search.hpp"
#include "keycontact/refiner/refinement_loop.hpp"

namespace keycontact {

Json noise_config_to_json(const NoiseConfig& c);
Json refinement_config_to_json(const RefinementConfig& c);
/// Missing fields keep their defaults; every invalid or unknown field is
/// reported in one ValidationError.
RefinementConfig refinement_config_from_json(const Json& j);
/// Reads into `c` under `prefix`, appending issues.
void read_refinement_config(const Json& j, const std::string& prefix, RefinementConfig& c,
                            std::vector<FieldIssue>& issues);

Json collision_search_config_to_json(const CollisionSearchConfig& c);
CollisionSearchConfig collision_search_config_from_json(const Json& j);

Json contact_strategy_to_json(const ContactStrategy& s);
/// One JSON Lines record.
Json step_diagnostics_to_json(const StepDiagnostics& d);
Json refinement_result_to_json(const RefinementResult& r);

}  // namespace keycontact
