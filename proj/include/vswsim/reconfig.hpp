// Copyright 2026 The vswsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>

#include "vswsim/estimator.hpp"
#include "vswsim/pipeline.hpp"

namespace vswsim {

enum class SlotStatus { kEmpty, kActive, kReconfiguring };

enum class ReconfigMode { kFull, kPartial };

struct ReconfigPolicy {
    ReconfigMode mode = ReconfigMode::kPartial;
    // Per-slot cap in partial mode, an even 26-way fabric split by default.
    ResourceFootprint partial_slot_budget{66462, 132924, 104};
    double partial_rate_penalty = 0.95;
    SimTime full_reconfig_ps = 100 * kPsPerMs;
    SimTime partial_reconfig_ps = 10 * kPsPerMs;
};

ReconfigPolicy default_reconfig_policy(const FabricCapacity& cap = {});

// Validation results carry the reason so callers can surface it.
struct ReconfigCheck {
    bool ok = true;
    std::string reason;
};

// Full reconfiguration precondition: the aggregate footprint of the new
// deployment fits the fabric.
ReconfigCheck check_full_deployment(
    const std::map<int, PipelineSpec>& deployments, const FabricCapacity& cap);

// Partial reconfiguration precondition: partial mode plus per-slot budget.
ReconfigCheck check_partial_deployment(const PipelineSpec& spec,
                                       const ReconfigPolicy& policy);

}  // namespace vswsim
