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

#include "vswsim/fabric.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace vswsim {

Fifo::Fifo(FifoSpec spec) : spec_(std::move(spec)) {
    if (spec_.depth == 0 || spec_.width == 0) {
        throw std::invalid_argument("fifo requires nonzero depth and width");
    }
    refresh_flags();
}

std::uint32_t Fifo::words_for_bits(std::uint64_t bits) const {
    return static_cast<std::uint32_t>((bits + spec_.width - 1) / spec_.width);
}

bool Fifo::can_accept(std::uint32_t words) const {
    return words <= free_words();
}

bool Fifo::enqueue(std::uint32_t words) {
    if (!can_accept(words)) {
        return false;
    }
    state_.occupied_words += words;
    state_.peak_occupancy = std::max(state_.peak_occupancy, state_.occupied_words);
    refresh_flags();
    return true;
}

std::uint32_t Fifo::dequeue(std::uint32_t words) {
    const std::uint32_t granted = std::min(words, state_.occupied_words);
    state_.occupied_words -= granted;
    refresh_flags();
    return granted;
}

void Fifo::clear() {
    state_.occupied_words = 0;
    refresh_flags();
}

void Fifo::refresh_flags() {
    state_.full = state_.occupied_words == spec_.depth;
    state_.empty = state_.occupied_words == 0;
}

MacroConstraints default_macro_constraints() { return MacroConstraints{}; }

namespace {

// Candidate decomposition for one uniform-geometry tiling.
struct Candidate {
    std::uint32_t depth = 0;
    std::uint32_t width = 0;
    std::uint32_t columns = 0;  // macros side by side to cover width
    std::uint32_t rows = 0;     // stacked groups to cover depth
};

}  // namespace

TilingPlan plan_tiling(const FifoSpec& request, const MacroConstraints& constraints) {
    if (constraints.depths.empty() || constraints.widths.empty()) {
        throw std::invalid_argument("macro constraints must list at least one geometry");
    }
    if (request.depth == 0 || request.width == 0) {
        throw std::invalid_argument("tiling request requires nonzero depth and width");
    }

    TilingPlan plan;
    plan.fifo_id = request.fifo_id;

    const std::uint32_t widest =
        *std::max_element(constraints.widths.begin(), constraints.widths.end());
    const std::uint64_t requested_bits = request.capacity_bits();

    // Too wide and too shallow to tile: the compiler would spend most of the
    // array on unaddressable rows. Build from flip-flops.
    if (request.width > 2 * widest && request.depth < 2 * constraints.min_depth) {
        plan.fallback = TilingFallback::kFlipFlop;
        plan.total_bits_provisioned = requested_bits;
        plan.waste_bits = 0;
        plan.provisioned_width = request.width;
        return plan;
    }

    bool found = false;
    Candidate best{};
    std::uint64_t best_waste = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t best_instances = std::numeric_limits<std::uint64_t>::max();

    for (std::uint32_t depth : constraints.depths) {
        for (std::uint32_t width : constraints.widths) {
            const std::uint32_t columns = (request.width + width - 1) / width;
            const std::uint64_t row_bits =
                static_cast<std::uint64_t>(depth) * width * columns;
            // Rows stack until the provisioned capacity covers the request.
            const std::uint32_t rows = static_cast<std::uint32_t>(
                (requested_bits + row_bits - 1) / row_bits);
            const std::uint64_t instances =
                static_cast<std::uint64_t>(columns) * rows;
            const std::uint64_t provisioned =
                static_cast<std::uint64_t>(depth) * width * instances;
            const std::uint64_t waste = provisioned - requested_bits;
            const bool better =
                waste < best_waste ||
                (waste == best_waste && instances < best_instances) ||
                (waste == best_waste && instances == best_instances && found &&
                 width < best.width);
            if (better) {
                best = Candidate{depth, width, columns, rows};
                best_waste = waste;
                best_instances = instances;
                found = true;
            }
        }
    }

    const std::uint32_t instance_count = best.columns * best.rows;
    plan.macros.push_back(MacroTile{best.depth, best.width, instance_count});
    plan.total_macro_instances = instance_count;
    plan.total_bits_provisioned =
        static_cast<std::uint64_t>(best.depth) * best.width * instance_count;
    plan.waste_bits = plan.total_bits_provisioned - requested_bits;
    plan.provisioned_width = best.width * best.columns;
    return plan;
}

std::string vs_in_fifo_id(int slot) { return "vs" + std::to_string(slot) + "_in"; }
std::string vs_out_fifo_id(int slot) { return "vs" + std::to_string(slot) + "_out"; }

std::string rx_fifo_id(int lane) {
    if (lane == kVrxLane) return "vrx";
    return "rx" + std::to_string(lane);
}

std::string tx_fifo_id(int lane) {
    if (lane == kVtxLane) return "vtx";
    return "tx" + std::to_string(lane);
}

std::vector<FifoSpec> build_inventory(int slot_count, int lane_count, int loopback) {
    if (slot_count < 1 || slot_count > kMaxSlots) {
        throw std::invalid_argument("slot_count must be in [1, 26]");
    }
    if (lane_count < 1 || loopback < 0) {
        throw std::invalid_argument("lane_count must be positive, loopback nonnegative");
    }

    const ClockDomain asic = asic_domain();
    const ClockDomain fpga = fpga_domain();

    std::vector<FifoSpec> out;
    out.reserve(static_cast<std::size_t>(2 * slot_count + 2 * lane_count + loopback));

    // Slot FIFOs sit on the ASIC/FPGA boundary: writes land in one domain,
    // reads drain in the other.
    for (int s = 0; s < slot_count; ++s) {
        out.push_back(FifoSpec{vs_in_fifo_id(s), 52, 289, asic, fpga});
        out.push_back(FifoSpec{vs_out_fifo_id(s), 52, 289, fpga, asic});
    }
    // Lane FIFOs cross from the transceiver clocks into the ASIC core; both
    // ends are modeled at the core rate.
    for (int l = 0; l < lane_count; ++l) {
        out.push_back(FifoSpec{rx_fifo_id(l), 66, 417, asic, asic});
    }
    for (int l = 0; l < lane_count; ++l) {
        out.push_back(FifoSpec{tx_fifo_id(l), 66, 417, asic, asic});
    }
    for (int p = 0; p < loopback; ++p) {
        const int lane = kPhysicalLanes + p;
        // Loopback RX feeds the ingress interconnect; loopback TX returns to it.
        out.push_back(FifoSpec{p == 0 ? rx_fifo_id(lane) : tx_fifo_id(lane),
                               66, 417, asic, asic});
    }
    return out;
}

std::string tiling_report_csv(const std::vector<FifoSpec>& inventory,
                              const MacroConstraints& constraints) {
    std::string csv =
        "fifo_id,depth,width,storage,macro_geometry,instances,provisioned_bits,waste_bits\n";
    char line[256];
    for (const FifoSpec& spec : inventory) {
        const TilingPlan plan = plan_tiling(spec, constraints);
        if (plan.fallback == TilingFallback::kFlipFlop) {
            std::snprintf(line, sizeof(line), "%s,%u,%u,flipflop,-,0,%llu,%llu\n",
                          spec.fifo_id.c_str(), spec.depth, spec.width,
                          static_cast<unsigned long long>(plan.total_bits_provisioned),
                          static_cast<unsigned long long>(plan.waste_bits));
        } else {
            const MacroTile& tile = plan.macros.front();
            std::snprintf(line, sizeof(line), "%s,%u,%u,sram,%ux%u,%u,%llu,%llu\n",
                          spec.fifo_id.c_str(), spec.depth, spec.width,
                          tile.macro_depth, tile.macro_width, tile.instance_count,
                          static_cast<unsigned long long>(plan.total_bits_provisioned),
                          static_cast<unsigned long long>(plan.waste_bits));
        }
        csv += line;
    }
    return csv;
}

}  // namespace vswsim
