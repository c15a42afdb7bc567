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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "vswsim/core.hpp"

namespace vswsim {

// Ingress steering: (rx_lane, vid) either forwards into a slot or drops.
struct IngressKey {
    std::uint8_t rx_lane = 0;
    std::uint16_t vid = 0;
    auto operator<=>(const IngressKey&) const = default;
};

struct IngressAction {
    bool drop = false;
    DeviceId target{0};
};

// Egress authorization: (vid, device_id) names the TX lanes the slot may
// reach for that network segment, or drops.
struct EgressKey {
    std::uint16_t vid = 0;
    DeviceId device{0};
    auto operator<=>(const EgressKey&) const = default;
};

struct EgressAction {
    bool drop = false;
    std::set<std::uint8_t> lanes;
};

class SteeringTables {
  public:
    explicit SteeringTables(int slot_count = kMaxSlots)
        : slot_count_(slot_count) {}

    // Writes enforce the table invariants and return false on violation:
    // duplicate keys, out-of-range lanes or slots, or a forward target
    // outside the configured slot range.
    bool ingress_add(IngressKey key, IngressAction action);
    bool ingress_del(IngressKey key);
    const IngressAction* ingress_find(IngressKey key) const;

    bool egress_add(EgressKey key, EgressAction action);
    bool egress_del(EgressKey key);
    const EgressAction* egress_find(EgressKey key) const;

    const std::map<IngressKey, IngressAction>& ingress() const { return ingress_; }
    const std::map<EgressKey, EgressAction>& egress() const { return egress_; }
    int slot_count() const { return slot_count_; }

  private:
    int slot_count_;
    std::map<IngressKey, IngressAction> ingress_;
    std::map<EgressKey, EgressAction> egress_;
};

// Classification outcomes. Forward carries the decision payload; Drop the
// reason counted by the caller.
struct IpiDecision {
    std::optional<DeviceId> forward;
    DropReason drop = DropReason::kNoTag;
};

struct OpiDecision {
    // Lanes the packet is to be copied onto; empty means drop.
    std::vector<std::uint8_t> lanes;
    DropReason drop = DropReason::kNoEntry;
};

// Minimal view of the pipeline's egress metadata so this module does not
// depend on the pipeline module.
struct EgressMetaView {
    bool broadcast = false;
    std::uint32_t port = 0;
};

// Parses the VLAN tag and consults the ingress table. On success the
// packet's vlan and device_id fields are stamped.
IpiDecision ipi_classify(const SteeringTables& tables, Packet& pkt);

// Authorizes the pipeline's requested egress against the egress table.
// A unicast request must sit inside the authorized lane set. A broadcast
// expands to every authorized lane except the packet's ingress lane.
OpiDecision opi_classify(const SteeringTables& tables, const Packet& pkt,
                         const EgressMetaView& request);

}  // namespace vswsim
