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

#include "vswsim/steering.hpp"

#include <algorithm>

namespace vswsim {

bool SteeringTables::ingress_add(IngressKey key, IngressAction action) {
    if (key.rx_lane >= kTotalLanes) return false;
    if (key.vid == 0 || key.vid >= 4095) return false;
    if (!action.drop && action.target.value >= slot_count_) return false;
    if (ingress_.count(key) != 0) return false;
    ingress_.emplace(key, action);
    return true;
}

bool SteeringTables::ingress_del(IngressKey key) {
    return ingress_.erase(key) != 0;
}

const IngressAction* SteeringTables::ingress_find(IngressKey key) const {
    const auto it = ingress_.find(key);
    return it == ingress_.end() ? nullptr : &it->second;
}

bool SteeringTables::egress_add(EgressKey key, EgressAction action) {
    if (key.vid == 0 || key.vid >= 4095) return false;
    if (key.device.value >= slot_count_) return false;
    if (!action.drop) {
        if (action.lanes.empty()) return false;
        for (std::uint8_t lane : action.lanes) {
            // Transmit side: 32 physical lanes plus vTX; vRX is receive-only.
            if (lane >= kTotalLanes || lane == kVrxLane) return false;
        }
    }
    if (egress_.count(key) != 0) return false;
    egress_.emplace(key, std::move(action));
    return true;
}

bool SteeringTables::egress_del(EgressKey key) {
    return egress_.erase(key) != 0;
}

const EgressAction* SteeringTables::egress_find(EgressKey key) const {
    const auto it = egress_.find(key);
    return it == egress_.end() ? nullptr : &it->second;
}

IpiDecision ipi_classify(const SteeringTables& tables, Packet& pkt) {
    IpiDecision decision;
    const std::optional<VlanTag> tag = parse_vlan(pkt.frame);
    if (!tag) {
        decision.drop = DropReason::kNoTag;
        return decision;
    }
    pkt.vlan = tag;
    const IngressAction* action =
        tables.ingress_find(IngressKey{pkt.rx_lane, tag->vid});
    if (action == nullptr) {
        decision.drop = DropReason::kNoEntry;
        return decision;
    }
    if (action->drop) {
        decision.drop = DropReason::kExplicit;
        return decision;
    }
    pkt.device_id = action->target;
    decision.forward = action->target;
    return decision;
}

OpiDecision opi_classify(const SteeringTables& tables, const Packet& pkt,
                         const EgressMetaView& request) {
    OpiDecision decision;
    if (!pkt.vlan || !pkt.device_id) {
        decision.drop = DropReason::kNoEntry;
        return decision;
    }
    const EgressAction* action =
        tables.egress_find(EgressKey{pkt.vlan->vid, *pkt.device_id});
    if (action == nullptr) {
        decision.drop = DropReason::kNoEntry;
        return decision;
    }
    if (action->drop) {
        decision.drop = DropReason::kExplicit;
        return decision;
    }
    if (request.broadcast) {
        for (std::uint8_t lane : action->lanes) {
            if (lane != pkt.rx_lane) decision.lanes.push_back(lane);
        }
        if (decision.lanes.empty()) {
            decision.drop = DropReason::kUnauthorized;
        }
        return decision;
    }
    if (request.port < kTotalLanes &&
        action->lanes.count(static_cast<std::uint8_t>(request.port)) != 0) {
        decision.lanes.push_back(static_cast<std::uint8_t>(request.port));
        return decision;
    }
    decision.drop = DropReason::kUnauthorized;
    return decision;
}

}  // namespace vswsim
