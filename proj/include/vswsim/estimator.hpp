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

#include <string>
#include <vector>

#include "vswsim/pipeline.hpp"

namespace vswsim {

// Fabric resource pool available to virtual-switch slots.
struct FabricCapacity {
    std::uint64_t luts = 1'728'000;
    std::uint64_t ffs = 3'456'000;
    std::uint32_t brams = 2'688;
};

// Static per-layer capacity of the platform's data path.
struct LayerRates {
    int phy_lanes = kPhysicalLanes;
    double phy_lane_gbps = kLaneRateGbps;
    int asic_streams = 33;  // 32 lane streams plus the loopback channel
    double asic_stream_gbps = 100.0;

    double phy_total_gbps() const { return phy_lanes * phy_lane_gbps; }
    double asic_total_gbps() const { return asic_streams * asic_stream_gbps; }
};

// How many copies of one pipeline the fabric can hold, bounded by the
// scarcest resource and by the 26-slot architectural limit.
int max_instances(const PipelineSpec& spec, const FabricCapacity& cap);

// Aggregate FPGA-layer throughput of a deployment; each instance is capped
// at its own sustained rate.
double fpga_throughput_gbps(const std::vector<PipelineSpec>& deployment);

struct BottleneckReport {
    double gbps = 0.0;
    std::vector<std::string> layers;  // "Physical", "ASIC", "FPGA"; ties all listed
    double phy_gbps = 0.0;
    double asic_gbps = 0.0;
    double fpga_gbps = 0.0;
};

BottleneckReport platform_bottleneck(const LayerRates& rates,
                                     const std::vector<PipelineSpec>& deployment);

// Chip-level constants reported alongside estimates. These are quoted
// synthesis results, never recomputed.
constexpr double kChipAreaMm2 = 47.6;
constexpr double kChipDynamicPowerW = 28.3;

// Four-row layer table plus the area/power footer, for the estimate command.
std::string estimate_report(const LayerRates& rates,
                            const std::vector<PipelineSpec>& deployment,
                            const FabricCapacity& cap);

}  // namespace vswsim
