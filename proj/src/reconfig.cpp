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

#include "vswsim/reconfig.hpp"

#include <cstdio>

namespace vswsim {

ReconfigPolicy default_reconfig_policy(const FabricCapacity& cap) {
    ReconfigPolicy policy;
    policy.partial_slot_budget = ResourceFootprint{
        (cap.luts + kMaxSlots - 1) / kMaxSlots,
        (cap.ffs + kMaxSlots - 1) / kMaxSlots,
        (cap.brams + kMaxSlots - 1) / kMaxSlots,
    };
    return policy;
}

ReconfigCheck check_full_deployment(
    const std::map<int, PipelineSpec>& deployments, const FabricCapacity& cap) {
    ResourceFootprint total;
    for (const auto& [slot, spec] : deployments) {
        if (slot < 0 || slot >= kMaxSlots) {
            return ReconfigCheck{false,
                                 "slot " + std::to_string(slot) + " out of range"};
        }
        total.luts += spec.footprint.luts;
        total.ffs += spec.footprint.ffs;
        total.brams += spec.footprint.brams;
    }
    char reason[128];
    if (total.luts > cap.luts) {
        std::snprintf(reason, sizeof(reason), "LUTs %llu exceed capacity %llu",
                      static_cast<unsigned long long>(total.luts),
                      static_cast<unsigned long long>(cap.luts));
        return ReconfigCheck{false, reason};
    }
    if (total.ffs > cap.ffs) {
        std::snprintf(reason, sizeof(reason), "FFs %llu exceed capacity %llu",
                      static_cast<unsigned long long>(total.ffs),
                      static_cast<unsigned long long>(cap.ffs));
        return ReconfigCheck{false, reason};
    }
    if (total.brams > cap.brams) {
        std::snprintf(reason, sizeof(reason), "BRAMs %u exceed capacity %u",
                      total.brams, cap.brams);
        return ReconfigCheck{false, reason};
    }
    return ReconfigCheck{};
}

ReconfigCheck check_partial_deployment(const PipelineSpec& spec,
                                       const ReconfigPolicy& policy) {
    if (policy.mode != ReconfigMode::kPartial) {
        return ReconfigCheck{false, "partial reconfiguration is not enabled"};
    }
    const ResourceFootprint& budget = policy.partial_slot_budget;
    char reason[128];
    if (spec.footprint.luts > budget.luts) {
        std::snprintf(reason, sizeof(reason),
                      "'%s' needs %llu LUTs, slot budget is %llu",
                      spec.name.c_str(),
                      static_cast<unsigned long long>(spec.footprint.luts),
                      static_cast<unsigned long long>(budget.luts));
        return ReconfigCheck{false, reason};
    }
    if (spec.footprint.ffs > budget.ffs) {
        std::snprintf(reason, sizeof(reason),
                      "'%s' needs %llu FFs, slot budget is %llu",
                      spec.name.c_str(),
                      static_cast<unsigned long long>(spec.footprint.ffs),
                      static_cast<unsigned long long>(budget.ffs));
        return ReconfigCheck{false, reason};
    }
    if (spec.footprint.brams > budget.brams) {
        std::snprintf(reason, sizeof(reason),
                      "'%s' needs %u BRAMs, slot budget is %u",
                      spec.name.c_str(), spec.footprint.brams, budget.brams);
        return ReconfigCheck{false, reason};
    }
    return ReconfigCheck{};
}

}  // namespace vswsim
