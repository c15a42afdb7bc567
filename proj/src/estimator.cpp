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

#include "vswsim/estimator.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace vswsim {

int max_instances(const PipelineSpec& spec, const FabricCapacity& cap) {
    if (spec.footprint.luts == 0 || spec.footprint.ffs == 0 ||
        spec.footprint.brams == 0) {
        throw std::invalid_argument("pipeline '" + spec.name +
                                    "' has an empty resource footprint");
    }
    const std::uint64_t by_luts = cap.luts / spec.footprint.luts;
    const std::uint64_t by_ffs = cap.ffs / spec.footprint.ffs;
    const std::uint64_t by_brams = cap.brams / spec.footprint.brams;
    const std::uint64_t fit = std::min({by_luts, by_ffs, by_brams});
    return static_cast<int>(
        std::min<std::uint64_t>(fit, static_cast<std::uint64_t>(kMaxSlots)));
}

double fpga_throughput_gbps(const std::vector<PipelineSpec>& deployment) {
    double total = 0.0;
    for (const PipelineSpec& spec : deployment) {
        total += spec.rate_gbps;
    }
    return total;
}

BottleneckReport platform_bottleneck(const LayerRates& rates,
                                     const std::vector<PipelineSpec>& deployment) {
    BottleneckReport report;
    report.phy_gbps = rates.phy_total_gbps();
    report.asic_gbps = rates.asic_total_gbps();
    report.fpga_gbps = fpga_throughput_gbps(deployment);
    report.gbps = std::min({report.phy_gbps, report.asic_gbps, report.fpga_gbps});
    if (report.phy_gbps == report.gbps) report.layers.push_back("Physical");
    if (report.asic_gbps == report.gbps) report.layers.push_back("ASIC");
    if (report.fpga_gbps == report.gbps) report.layers.push_back("FPGA");
    return report;
}

std::string estimate_report(const LayerRates& rates,
                            const std::vector<PipelineSpec>& deployment,
                            const FabricCapacity& cap) {
    const BottleneckReport b = platform_bottleneck(rates, deployment);

    // Seen capacity per deployed pipeline kind, for the per-kind fit lines.
    std::vector<std::pair<std::string, int>> kinds;
    for (const PipelineSpec& spec : deployment) {
        bool seen = false;
        for (auto& [name, count] : kinds) {
            if (name == spec.name) {
                ++count;
                seen = true;
            }
        }
        if (!seen) kinds.emplace_back(spec.name, 1);
    }

    std::string out;
    char line[160];
    out += "Layer      Interface           Count  Max Throughput (Tbps)\n";
    std::snprintf(line, sizeof(line), "%-10s %-19s %5d  %.2f\n", "Physical",
                  "100 Gbps PHY", rates.phy_lanes, b.phy_gbps / 1000.0);
    out += line;
    std::snprintf(line, sizeof(line), "%-10s %-19s %5d  %.2f\n", "ASIC",
                  "AXI Stream", rates.asic_streams, b.asic_gbps / 1000.0);
    out += line;
    std::snprintf(line, sizeof(line), "%-10s %-19s %5zu  %.2f\n", "FPGA",
                  "vS instance", deployment.size(), b.fpga_gbps / 1000.0);
    out += line;
    std::string layers;
    for (const std::string& l : b.layers) {
        if (!layers.empty()) layers += "+";
        layers += l;
    }
    std::snprintf(line, sizeof(line), "%-10s %-19s %5d  %.2f  (limit: %s)\n",
                  "Chip", "Platform", 1, b.gbps / 1000.0, layers.c_str());
    out += line;

    for (const auto& [name, count] : kinds) {
        const auto it = std::find_if(
            deployment.begin(), deployment.end(),
            [&name](const PipelineSpec& s) { return s.name == name; });
        const PipelineSpec& spec = *it;
        std::snprintf(line, sizeof(line),
                      "  %-12s deployed %2d, fabric fits %2d (%.2f Gbps each)\n",
                      name.c_str(), count, max_instances(spec, cap),
                      spec.rate_gbps);
        out += line;
    }

    std::snprintf(line, sizeof(line),
                  "Chip area %.1f mm^2, dynamic power %.1f W (reported synthesis "
                  "constants)\n",
                  kChipAreaMm2, kChipDynamicPowerW);
    out += line;
    return out;
}

}  // namespace vswsim
