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

#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "vswsim/core.hpp"
#include "vswsim/fabric.hpp"

using namespace vswsim;

namespace {

FifoSpec slot_spec(const std::string& id = "q") {
    return FifoSpec{id, 52, 289, asic_domain(), fpga_domain()};
}

FifoSpec lane_spec(const std::string& id = "q") {
    return FifoSpec{id, 66, 417, asic_domain(), asic_domain()};
}

}  // namespace

TEST_CASE("words_for_bits rounds up to whole words") {
    Fifo f(slot_spec());
    CHECK(f.words_for_bits(0) == 0);
    CHECK(f.words_for_bits(1) == 1);
    CHECK(f.words_for_bits(288) == 1);
    CHECK(f.words_for_bits(289) == 1);
    CHECK(f.words_for_bits(290) == 2);
    CHECK(f.words_for_bits(2048) == 8);   // 256-byte frame
    CHECK(f.words_for_bits(512) == 2);    // 64-byte frame
    Fifo lane(lane_spec());
    CHECK(lane.words_for_bits(2048) == 5);
    CHECK(lane.words_for_bits(417) == 1);
    CHECK(lane.words_for_bits(418) == 2);
}

TEST_CASE("enqueue is all-or-nothing at the capacity boundary") {
    Fifo f(slot_spec());
    CHECK(f.state().empty);
    CHECK_FALSE(f.state().full);
    CHECK(f.enqueue(50));
    CHECK(f.free_words() == 2);
    // 3 words exceed the 2 free; nothing must change.
    CHECK_FALSE(f.can_accept(3));
    CHECK_FALSE(f.enqueue(3));
    CHECK(f.state().occupied_words == 50);
    CHECK(f.free_words() == 2);
    // Exactly filling is allowed and raises the full flag.
    CHECK(f.enqueue(2));
    CHECK(f.state().full);
    CHECK_FALSE(f.state().empty);
    CHECK_FALSE(f.enqueue(1));
    CHECK(f.dequeue(10) == 10);
    CHECK_FALSE(f.state().full);
    // Dequeue grants at most what is occupied.
    CHECK(f.dequeue(100) == 42);
    CHECK(f.state().empty);
}

TEST_CASE("peak occupancy and drop counters survive clear") {
    Fifo f(slot_spec());
    f.enqueue(30);
    f.record_drop();
    f.record_drop();
    CHECK(f.state().peak_occupancy == 30);
    f.dequeue(30);
    CHECK(f.state().peak_occupancy == 30);
    f.clear();
    CHECK(f.state().empty);
    CHECK(f.state().occupied_words == 0);
    CHECK(f.state().peak_occupancy == 30);
    CHECK(f.state().drops == 2);
}

TEST_CASE("fifo word conservation under random traffic") {
    Fifo f(lane_spec());
    Rng rng(2026);
    std::uint64_t in = 0, out = 0;
    for (int i = 0; i < 100000; ++i) {
        if (rng.below(2) == 0) {
            auto words = static_cast<std::uint32_t>(rng.range(1, 10));
            if (f.enqueue(words)) in += words;
        } else {
            out += f.dequeue(static_cast<std::uint32_t>(rng.range(1, 10)));
        }
        CHECK(f.state().occupied_words <= f.spec().depth);
        REQUIRE(in == out + f.state().occupied_words);
    }
    CHECK(f.state().peak_occupancy <= f.spec().depth);
}

TEST_CASE("packet queue models the two-cycle clock crossing") {
    // Read side is the FPGA domain: items surface 2 * 1392 ps after enqueue.
    PacketQueue<int> q(slot_spec());
    CHECK(q.head_visible_at() == -1);
    REQUIRE(q.enqueue(7, 8, 1000));
    CHECK(q.head_visible_at() == 1000 + 2 * 1392);
    CHECK(q.visible_head(1000) == nullptr);
    CHECK(q.visible_head(3783) == nullptr);
    REQUIRE(q.visible_head(3784) != nullptr);
    CHECK(*q.visible_head(3784) == 7);
    CHECK(q.pop_head() == 7);
    CHECK(q.empty());
    CHECK(q.fifo().state().empty);

    // extra_delay_ps adds transit time ahead of the crossing.
    REQUIRE(q.enqueue(9, 8, 0, 5000));
    CHECK(q.head_visible_at() == 5000 + 2784);

    // The ASIC-read side surfaces after 2 * 1000 ps instead.
    PacketQueue<int> asic_q(lane_spec());
    REQUIRE(asic_q.enqueue(1, 5, 100));
    CHECK(asic_q.head_visible_at() == 2100);
}

TEST_CASE("packet queue clear reports losses and frees words") {
    PacketQueue<int> q(slot_spec());
    REQUIRE(q.enqueue(1, 10, 0));
    REQUIRE(q.enqueue(2, 10, 0));
    REQUIRE(q.enqueue(3, 10, 0));
    CHECK(q.size() == 3);
    CHECK(q.fifo().state().occupied_words == 30);
    CHECK(q.clear() == 3);
    CHECK(q.empty());
    CHECK(q.fifo().state().occupied_words == 0);
    CHECK(q.fifo().state().peak_occupancy == 30);
}

TEST_CASE("packet queue preserves FIFO order across mixed visibility") {
    PacketQueue<int> q(lane_spec());
    for (int i = 0; i < 5; ++i) REQUIRE(q.enqueue(i, 1, i * 10));
    for (int i = 0; i < 5; ++i) {
        REQUIRE(q.visible_head(1'000'000) != nullptr);
        CHECK(q.pop_head() == i);
    }
}

TEST_CASE("66x417 tiles as three 64x144 macros wasting 126 bits") {
    const TilingPlan plan = plan_tiling(lane_spec("rx0"), default_macro_constraints());
    CHECK(plan.fallback == TilingFallback::kNone);
    REQUIRE(plan.macros.size() == 1);
    CHECK(plan.macros[0].macro_depth == 64);
    CHECK(plan.macros[0].macro_width == 144);
    CHECK(plan.macros[0].instance_count == 3);
    CHECK(plan.total_macro_instances == 3);
    CHECK(plan.total_bits_provisioned == 27648);
    CHECK(plan.waste_bits == 126);
    CHECK(plan.provisioned_width == 432);
}

TEST_CASE("52x289 is too asymmetric and falls back to flip-flops") {
    // 289 > 2 * 144 and 52 < 2 * 32: the compiler refuses the shape.
    const TilingPlan plan = plan_tiling(slot_spec("vs0_in"), default_macro_constraints());
    CHECK(plan.fallback == TilingFallback::kFlipFlop);
    CHECK(plan.macros.empty());
    CHECK(plan.total_macro_instances == 0);
    CHECK(plan.total_bits_provisioned == 52u * 289u);
    CHECK(plan.waste_bits == 0);
    CHECK(plan.provisioned_width == 289);
}

TEST_CASE("an exact macro shape tiles as a single instance with zero waste") {
    FifoSpec exact{"e", 64, 144, asic_domain(), asic_domain()};
    const TilingPlan plan = plan_tiling(exact, default_macro_constraints());
    CHECK(plan.fallback == TilingFallback::kNone);
    CHECK(plan.total_macro_instances == 1);
    CHECK(plan.macros[0].macro_depth == 64);
    CHECK(plan.macros[0].macro_width == 144);
    CHECK(plan.waste_bits == 0);
}

TEST_CASE("tiling edge rules") {
    // Wide but deep enough: tiles instead of falling back.
    FifoSpec wide_deep{"wd", 64, 289, asic_domain(), asic_domain()};
    CHECK(plan_tiling(wide_deep, default_macro_constraints()).fallback ==
          TilingFallback::kNone);
    // Shallow but narrow enough: tiles.
    FifoSpec shallow_narrow{"sn", 52, 288, asic_domain(), asic_domain()};
    CHECK(plan_tiling(shallow_narrow, default_macro_constraints()).fallback ==
          TilingFallback::kNone);
    // Empty geometry lists are rejected.
    MacroConstraints none;
    none.depths.clear();
    CHECK_THROWS_AS(plan_tiling(wide_deep, none), std::invalid_argument);
}

TEST_CASE("tiling always covers the request") {
    Rng rng(99);
    const MacroConstraints constraints = default_macro_constraints();
    for (int i = 0; i < 2000; ++i) {
        FifoSpec req{"r", static_cast<std::uint32_t>(rng.range(1, 512)),
                     static_cast<std::uint32_t>(rng.range(1, 512)),
                     asic_domain(), asic_domain()};
        const TilingPlan plan = plan_tiling(req, constraints);
        if (plan.fallback == TilingFallback::kFlipFlop) {
            // Fallback only fires for the asymmetric corner.
            CHECK(req.width > 288);
            CHECK(req.depth < 64);
            CHECK(plan.waste_bits == 0);
            continue;
        }
        REQUIRE(plan.macros.size() == 1);
        const MacroTile& t = plan.macros[0];
        CHECK(plan.provisioned_width >= req.width);
        CHECK(plan.provisioned_width % t.macro_width == 0);
        CHECK(plan.total_bits_provisioned >= req.capacity_bits());
        CHECK(plan.total_bits_provisioned ==
              static_cast<std::uint64_t>(t.macro_depth) * t.macro_width *
                  t.instance_count);
        CHECK(plan.waste_bits == plan.total_bits_provisioned - req.capacity_bits());
    }
}

TEST_CASE("full inventory is 118 FIFOs totalling 2597908 bits") {
    const auto inv = build_inventory(kMaxSlots);
    CHECK(inv.size() == 118);
    std::uint64_t bits = 0;
    int slot_fifos = 0, lane_fifos = 0;
    std::set<std::string> ids;
    for (const auto& spec : inv) {
        ids.insert(spec.fifo_id);
        bits += spec.capacity_bits();
        if (spec.depth == 52 && spec.width == 289) ++slot_fifos;
        if (spec.depth == 66 && spec.width == 417) ++lane_fifos;
    }
    CHECK(slot_fifos == 52);   // in + out per slot
    CHECK(lane_fifos == 66);   // 32 RX + 32 TX + vRX + vTX
    CHECK(bits == 2'597'908);
    CHECK(ids.size() == inv.size());
    CHECK(ids.count("vs0_in") == 1);
    CHECK(ids.count("vs25_out") == 1);
    CHECK(ids.count("rx31") == 1);
    CHECK(ids.count("tx0") == 1);
    CHECK(ids.count("vrx") == 1);
    CHECK(ids.count("vtx") == 1);
}

TEST_CASE("inventory clocking puts slot FIFOs on the domain boundary") {
    const auto inv = build_inventory(2);
    CHECK(inv.size() == 2u * 2 + 64 + 2);
    for (const auto& spec : inv) {
        if (spec.fifo_id.ends_with("_in")) {
            CHECK(spec.write_domain.period_ps == 1000);
            CHECK(spec.read_domain.period_ps == 1392);
        } else if (spec.fifo_id.ends_with("_out")) {
            CHECK(spec.write_domain.period_ps == 1392);
            CHECK(spec.read_domain.period_ps == 1000);
        } else {
            CHECK(spec.write_domain.period_ps == 1000);
            CHECK(spec.read_domain.period_ps == 1000);
        }
    }
    CHECK(build_inventory(1).size() == 68);
    CHECK_THROWS_AS(build_inventory(0), std::invalid_argument);
    CHECK_THROWS_AS(build_inventory(27), std::invalid_argument);
}

TEST_CASE("tiling report pins the two platform geometries") {
    const auto inv = build_inventory(1, 1, 0);
    const std::string csv = tiling_report_csv(inv, default_macro_constraints());
    CHECK(csv.find("vs0_in,52,289,flipflop,-,0,15028,0") != std::string::npos);
    CHECK(csv.find("vs0_out,52,289,flipflop,-,0,15028,0") != std::string::npos);
    CHECK(csv.find("rx0,66,417,sram,64x144,3,27648,126") != std::string::npos);
    CHECK(csv.find("tx0,66,417,sram,64x144,3,27648,126") != std::string::npos);
}
