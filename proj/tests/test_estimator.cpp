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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "vswsim/estimator.hpp"
#include "vswsim/pipeline.hpp"

using namespace vswsim;

namespace {

std::vector<PipelineSpec> homogeneous(const std::string& name, int count) {
    std::vector<PipelineSpec> d;
    for (int i = 0; i < count; ++i) d.push_back(builtin_specs().at(name));
    return d;
}

}  // namespace

TEST_CASE("fabric capacity defaults") {
    FabricCapacity cap;
    CHECK(cap.luts == 1'728'000);
    CHECK(cap.ffs == 3'456'000);
    CHECK(cap.brams == 2'688);
}

TEST_CASE("instance fit counts match the published deployments exactly") {
    const FabricCapacity cap;
    CHECK(max_instances(builtin_specs().at("l2_switch"), cap) == 26);
    CHECK(max_instances(builtin_specs().at("firewall"), cap) == 17);
    CHECK(max_instances(builtin_specs().at("router"), cap) == 14);
    CHECK(max_instances(builtin_specs().at("int"), cap) == 11);
}

TEST_CASE("block RAM is the binding resource for every case study") {
    const FabricCapacity cap;
    for (const auto& [name, spec] : builtin_specs()) {
        const auto by_luts = cap.luts / spec.footprint.luts;
        const auto by_ffs = cap.ffs / spec.footprint.ffs;
        const auto by_brams = cap.brams / spec.footprint.brams;
        CHECK(by_brams <= by_luts);
        CHECK(by_brams <= by_ffs);
        CHECK(max_instances(spec, cap) ==
              static_cast<int>(std::min<std::uint64_t>(by_brams, 26)));
    }
}

TEST_CASE("fit counts clamp to the 26-slot array and honor other resources") {
    FabricCapacity cap;
    PipelineSpec tiny = builtin_specs().at("l2_switch");
    tiny.footprint = ResourceFootprint{1, 1, 1};
    CHECK(max_instances(tiny, cap) == 26);  // resources allow thousands

    // Starve each resource in turn.
    PipelineSpec spec = builtin_specs().at("l2_switch");
    cap.luts = spec.footprint.luts * 3;
    CHECK(max_instances(spec, cap) == 3);
    cap.luts = 1'728'000;
    cap.ffs = spec.footprint.ffs * 2;
    CHECK(max_instances(spec, cap) == 2);
    cap.ffs = 3'456'000;
    cap.brams = spec.footprint.brams - 1;
    CHECK(max_instances(spec, cap) == 0);

    PipelineSpec empty = spec;
    empty.footprint = ResourceFootprint{};
    CHECK_THROWS_AS(max_instances(empty, FabricCapacity{}), std::invalid_argument);
}

TEST_CASE("fit count is monotone in capacity and antitone in footprint") {
    const PipelineSpec& spec = builtin_specs().at("router");
    FabricCapacity cap;
    int prev = 0;
    for (std::uint32_t brams = 0; brams <= 2688; brams += 185) {
        cap.brams = brams;
        const int fit = max_instances(spec, cap);
        CHECK(fit >= prev);
        prev = fit;
    }

    PipelineSpec heavy = spec;
    heavy.footprint.brams *= 2;
    CHECK(max_instances(heavy, FabricCapacity{}) <=
          max_instances(spec, FabricCapacity{}));
}

TEST_CASE("per-layer rates match the published capacity table") {
    const LayerRates rates;
    CHECK(rates.phy_total_gbps() == doctest::Approx(3200.0));
    CHECK(rates.asic_total_gbps() == doctest::Approx(3300.0));

    // FPGA layer spans 1.43 Tbps (11 int) to 3.45 Tbps (26 l2).
    CHECK(fpga_throughput_gbps(homogeneous("int", 11)) ==
          doctest::Approx(1425.71));
    CHECK(fpga_throughput_gbps(homogeneous("l2_switch", 26)) ==
          doctest::Approx(3448.38));
    CHECK(fpga_throughput_gbps(homogeneous("firewall", 17)) ==
          doctest::Approx(2225.64));
    CHECK(fpga_throughput_gbps(homogeneous("router", 14)) ==
          doctest::Approx(1840.3));
    CHECK(fpga_throughput_gbps({}) == 0.0);

    // To two decimals in Tbps: 1.43 and 3.45.
    CHECK(fpga_throughput_gbps(homogeneous("int", 11)) / 1000.0 ==
          doctest::Approx(1.43).epsilon(0.005));
    CHECK(fpga_throughput_gbps(homogeneous("l2_switch", 26)) / 1000.0 ==
          doctest::Approx(3.45).epsilon(0.005));
}

TEST_CASE("platform bottleneck is the min across layers") {
    // Full l2 deployment: FPGA (3448) > ASIC (3300) > PHY (3200).
    auto full = platform_bottleneck(LayerRates{}, homogeneous("l2_switch", 26));
    CHECK(full.gbps == doctest::Approx(3200.0));
    CHECK(full.layers == std::vector<std::string>{"Physical"});

    // Max int deployment: FPGA is scarcest.
    auto int11 = platform_bottleneck(LayerRates{}, homogeneous("int", 11));
    CHECK(int11.gbps == doctest::Approx(1425.71));
    CHECK(int11.layers == std::vector<std::string>{"FPGA"});

    // Few lanes: PHY binds despite a large deployment.
    LayerRates eight;
    eight.phy_lanes = 8;
    auto phy = platform_bottleneck(eight, homogeneous("int", 11));
    CHECK(phy.gbps == doctest::Approx(800.0));
    CHECK(phy.layers == std::vector<std::string>{"Physical"});

    // Forcing the ASIC below everything picks the ASIC.
    LayerRates slow;
    slow.asic_streams = 4;
    auto asic = platform_bottleneck(slow, homogeneous("l2_switch", 26));
    CHECK(asic.gbps == doctest::Approx(400.0));
    CHECK(asic.layers == std::vector<std::string>{"ASIC"});

    // Exact ties list every limiting layer.
    LayerRates tied;
    tied.phy_lanes = 10;
    tied.asic_streams = 10;
    PipelineSpec flat = builtin_specs().at("l2_switch");
    flat.rate_gbps = 250.0;
    auto tie = platform_bottleneck(tied, {flat, flat, flat, flat});
    CHECK(tie.gbps == doctest::Approx(1000.0));
    CHECK(tie.layers == std::vector<std::string>{"Physical", "ASIC", "FPGA"});
}

TEST_CASE("estimate report prints the four-row table and footer") {
    const std::string text =
        estimate_report(LayerRates{}, homogeneous("l2_switch", 26), FabricCapacity{});
    CHECK(text.find("Physical   100 Gbps PHY           32  3.20") != std::string::npos);
    CHECK(text.find("ASIC       AXI Stream             33  3.30") != std::string::npos);
    CHECK(text.find("FPGA       vS instance            26  3.45") != std::string::npos);
    CHECK(text.find("Chip       Platform                1  3.20  (limit: Physical)") !=
          std::string::npos);
    CHECK(text.find("l2_switch    deployed 26, fabric fits 26 (132.63 Gbps each)") !=
          std::string::npos);
    CHECK(text.find("Chip area 47.6 mm^2, dynamic power 28.3 W") != std::string::npos);

    const std::string int_text =
        estimate_report(LayerRates{}, homogeneous("int", 11), FabricCapacity{});
    CHECK(int_text.find("FPGA       vS instance            11  1.43") !=
          std::string::npos);
    CHECK(int_text.find("(limit: FPGA)") != std::string::npos);
    CHECK(int_text.find("int          deployed 11, fabric fits 11 (129.61 Gbps each)") !=
          std::string::npos);

    // Mixed deployments get one fit line per pipeline kind.
    std::vector<PipelineSpec> mixed = homogeneous("router", 2);
    mixed.push_back(builtin_specs().at("firewall"));
    const std::string mixed_text =
        estimate_report(LayerRates{}, mixed, FabricCapacity{});
    CHECK(mixed_text.find("router       deployed  2, fabric fits 14") !=
          std::string::npos);
    CHECK(mixed_text.find("firewall     deployed  1, fabric fits 17") !=
          std::string::npos);
}

TEST_CASE("chip constants are quoted, not derived") {
    CHECK(kChipAreaMm2 == 47.6);
    CHECK(kChipDynamicPowerW == 28.3);
}
