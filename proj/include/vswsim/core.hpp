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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vswsim {

// Simulated time in integer picoseconds. Both clock periods used by the
// platform (1000 ps ASIC, 1392 ps FPGA) are exact in this unit, so event
// timestamps never accumulate floating-point drift.
using SimTime = std::int64_t;

constexpr SimTime kPsPerNs = 1000;
constexpr SimTime kPsPerUs = 1000 * 1000;
constexpr SimTime kPsPerMs = 1000LL * 1000 * 1000;

// Architectural limits of the platform.
constexpr int kMaxSlots = 26;       // vS Array placeholders
constexpr int kPhysicalLanes = 32;  // 100 Gbps RX/TX lane pairs
constexpr int kLoopbackLanes = 2;   // vRX + vTX virtual ports
constexpr int kTotalLanes = kPhysicalLanes + kLoopbackLanes;
constexpr int kVrxLane = 32;  // loopback receive port
constexpr int kVtxLane = 33;  // loopback transmit port

constexpr double kLaneRateGbps = 100.0;

constexpr std::size_t kMinFrameBytes = 64;
constexpr std::size_t kDefaultMtuBytes = 9216;

// One clock domain of the SoC. period_ps is the frequency inverse rounded
// to the nearest picosecond (FPGA: 1 / 718.4 MHz = 1391.98 ns -> 1392 ps).
struct ClockDomain {
    std::string name;
    double frequency_hz = 0.0;
    SimTime period_ps = 0;
};

ClockDomain make_clock_domain(std::string name, double frequency_hz);

// The two on-chip domains.
const ClockDomain& asic_domain();  // 1.0 GHz, 1000 ps
const ClockDomain& fpga_domain();  // 718.4 MHz, 1392 ps

// 802.1Q tag as parsed from the frame. TPID is the fixed constant 0x8100;
// VID 0 (priority tag) and 4095 (reserved) are never valid steering keys.
struct VlanTag {
    static constexpr std::uint16_t kTpid = 0x8100;
    std::uint8_t pcp = 0;   // 3-bit priority code point
    bool dei = false;       // drop eligible indicator
    std::uint16_t vid = 0;  // 12-bit VLAN identifier, valid range 1..4094

    bool operator==(const VlanTag&) const = default;
};

// Index of a vS slot in the vS Array, stamped onto packets by the IPI.
struct DeviceId {
    std::uint8_t value = 0;

    bool operator==(const DeviceId&) const = default;
    auto operator<=>(const DeviceId&) const = default;
};

// A frame in flight, plus the metadata the platform attaches to it.
// device_id is absent until the IPI classifies the packet and present on
// every packet that reaches the OPI. hop_count counts vS traversals
// (loopback traffic passes through more than once).
struct Packet {
    std::vector<std::uint8_t> frame;
    std::uint8_t rx_lane = 0;      // lane the frame arrived on, 0..33
    SimTime arrival_time = 0;      // first ingress at the PHY
    std::optional<VlanTag> vlan;   // parsed view, set at ingress
    std::optional<DeviceId> device_id;
    std::uint32_t hop_count = 0;
    std::uint64_t id = 0;          // engine-assigned, for traces

    std::size_t bits() const { return frame.size() * 8; }
};

// Searches the frame for a valid 802.1Q tag at the fixed offset 12.
// Returns the tag when the TPID matches 0x8100 and the VID is 1..4094;
// anything else (short frame, other ethertype, reserved VID) is absent.
std::optional<VlanTag> parse_vlan(std::span<const std::uint8_t> frame);

// Writes tpid+tci at offset 12. The frame must already have room; used by
// traffic synthesis and tests.
void write_vlan(std::span<std::uint8_t> frame, const VlanTag& tag);

// Every way the platform can consume a packet without delivering it.
enum class DropReason {
    kNoTag,            // IPI: frame carries no valid 802.1Q tag
    kNoEntry,          // IPI/OPI: no matching steering entry
    kExplicit,         // steering entry with an explicit drop action
    kUnauthorized,     // OPI: vS requested a lane outside its entry's set
    kSlotBackpressure, // IPI: the target slot's input FIFO is full
    kSlotUnavailable,  // IPI: the target slot is empty or reconfiguring
    kRxOverflow,       // PHY: receive FIFO full at arrival
    kParseError,       // vS parser hit a truncated header
    kPipelineDrop,     // vS match-action pipeline dropped the packet
    kReconfig,         // packet discarded by a reconfiguration
};
constexpr int kDropReasonCount = 10;

const char* to_string(DropReason reason);

// Deterministic 64-bit generator (splitmix64). Used everywhere randomness
// is needed so runs are bit-identical across platforms; std::mt19937 with
// std distributions is avoided because distribution algorithms differ
// between standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by 128-bit multiply; deterministic and unbiased
    // enough for simulation traffic.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    // Uniform in [lo, hi] inclusive.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

  private:
    std::uint64_t state_;
};

}  // namespace vswsim
