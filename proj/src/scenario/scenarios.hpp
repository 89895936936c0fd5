// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "denslab/scenario/scenario.hpp"

namespace denslab::scenarios {

// Scenarios that do not evolve in time record one row per test case, with
// the case index in the time column.
ScenarioReport bracket_identities(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport casimir_conservation(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport leaf_casimir(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport ot_oracle(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport sg_rotating_blob(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport sg_stationary(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport euler_taylor_green(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport euler_enstrophy(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport reduction_lemma(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport reduction_theorem(const ScenarioConfig& cfg, Checkpointer& cp);
ScenarioReport conjecture_probe(const ScenarioConfig& cfg, Checkpointer& cp);

}  // namespace denslab::scenarios
