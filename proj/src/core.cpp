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

#include "vswsim/core.hpp"

#include <cmath>
#include <stdexcept>

namespace vswsim {

ClockDomain make_clock_domain(std::string name, double frequency_hz) {
    if (frequency_hz <= 0.0) {
        throw std::invalid_argument("clock frequency must be > 0");
    }
    ClockDomain d;
    d.name = std::move(name);
    d.frequency_hz = frequency_hz;
    d.period_ps = static_cast<SimTime>(std::llround(1e12 / frequency_hz));
    return d;
}

const ClockDomain& asic_domain() {
    static const ClockDomain d = make_clock_domain("asic", 1.0e9);
    return d;
}

const ClockDomain& fpga_domain() {
    static const ClockDomain d = make_clock_domain("fpga", 718.4e6);
    return d;
}

std::optional<VlanTag> parse_vlan(std::span<const std::uint8_t> frame) {
    // Ethernet header (14) + 802.1Q tag (4) must fit.
    if (frame.size() < 18) {
        return std::nullopt;
    }
    const std::uint16_t tpid =
        static_cast<std::uint16_t>(frame[12] << 8) | frame[13];
    if (tpid != VlanTag::kTpid) {
        return std::nullopt;
    }
    const std::uint16_t tci =
        static_cast<std::uint16_t>(frame[14] << 8) | frame[15];
    VlanTag tag;
    tag.pcp = static_cast<std::uint8_t>(tci >> 13);
    tag.dei = ((tci >> 12) & 1) != 0;
    tag.vid = tci & 0x0fff;
    if (tag.vid == 0 || tag.vid == 4095) {
        return std::nullopt;
    }
    return tag;
}

void write_vlan(std::span<std::uint8_t> frame, const VlanTag& tag) {
    if (frame.size() < 18) {
        throw std::invalid_argument("frame too short for a VLAN tag");
    }
    const std::uint16_t tci = static_cast<std::uint16_t>(
        (tag.pcp << 13) | (static_cast<int>(tag.dei) << 12) |
        (tag.vid & 0x0fff));
    frame[12] = 0x81;
    frame[13] = 0x00;
    frame[14] = static_cast<std::uint8_t>(tci >> 8);
    frame[15] = static_cast<std::uint8_t>(tci & 0xff);
}

const char* to_string(DropReason reason) {
    switch (reason) {
        case DropReason::kNoTag: return "no_tag";
        case DropReason::kNoEntry: return "no_entry";
        case DropReason::kExplicit: return "explicit_drop";
        case DropReason::kUnauthorized: return "unauthorized";
        case DropReason::kSlotBackpressure: return "slot_backpressure";
        case DropReason::kSlotUnavailable: return "slot_unavailable";
        case DropReason::kRxOverflow: return "rx_overflow";
        case DropReason::kParseError: return "parse_error";
        case DropReason::kPipelineDrop: return "pipeline_drop";
        case DropReason::kReconfig: return "reconfig";
    }
    return "unknown";
}

}  // namespace vswsim
