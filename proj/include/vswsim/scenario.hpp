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
#include <string>
#include <vector>

#include "vswsim/pipeline.hpp"
#include "vswsim/reconfig.hpp"
#include "vswsim/steering.hpp"

namespace vswsim {

enum class SizeKind { kFixed, kUniform, kImix };

// One unidirectional flow: a (lane, vid) pair with a rate and the frame
// template used to synthesize packets.
struct TrafficProfile {
    std::uint8_t lane = 0;
    std::uint16_t vid = 1;
    double rate_gbps = 10.0;
    SizeKind size_kind = SizeKind::kFixed;
    std::uint32_t size_bytes = 1518;   // fixed size, or uniform minimum
    std::uint32_t size_max_bytes = 0;  // uniform maximum
    std::uint64_t dst_mac = 0;
    std::uint64_t src_mac = 0;
    bool ipv4 = false;
    std::uint8_t proto = 17;
    std::uint32_t ip_src = 0;
    std::uint32_t ip_dst = 0;
    // When nonempty, successive packets cycle through these destinations.
    std::vector<std::uint32_t> ip_dst_cycle;
    std::uint16_t sport = 1024;
    std::uint16_t dport = 4096;
    SimTime start_ps = 0;
    SimTime stop_ps = -1;  // -1 runs to scenario duration
};

// Pre-seeded match-action entry for one slot table.
struct TableSeed {
    int slot = 0;
    std::string table;
    MatchEntry entry;
};

struct ReconfigAction {
    enum class Kind { kDeploy, kUndeploy, kFull };
    SimTime at_ps = 0;
    Kind kind = Kind::kDeploy;
    int slot = 0;
    std::string spec_name;
    std::map<int, std::string> full_deployments;
};

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    SimTime duration_ps = kPsPerMs;
    int lanes = kPhysicalLanes;
    ReconfigPolicy policy;
    FabricCapacity capacity;
    // Initial deployments come up instantly at t=0 with no rate penalty.
    std::map<int, std::string> deployments;
    std::map<std::string, PipelineSpec> extra_pipelines;
    std::vector<std::pair<IngressKey, IngressAction>> ingress;
    std::vector<std::pair<EgressKey, EgressAction>> egress;
    std::vector<TableSeed> table_seeds;
    std::vector<TrafficProfile> traffic;
    std::vector<ReconfigAction> schedule;

    const PipelineSpec* find_pipeline(const std::string& spec_name) const;
    // Returns every violated constraint, empty when the scenario is valid.
    std::vector<std::string> validate() const;
};

// Locally administered MAC for synthesized frames.
std::uint64_t test_mac(std::uint16_t vid, std::uint8_t lane, bool source);

// Parses the structured scenario document (JSON tree with the schema
// mirrored from Scenario). Throws std::runtime_error with a description
// on malformed input.
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario_json(const std::string& text);

// Embedded scenarios, addressable from the CLI as builtin:<name>.
//   saturation_l2    32 lanes at line rate into 26 l2 slots
//   fpga_limited_int 32 lanes into 11 int slots, FPGA-bound
//   int_phy_limited  8 lanes into 11 int slots, PHY-bound
//   smoke_l2         1 lane, 1 slot, light load
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

}  // namespace vswsim
