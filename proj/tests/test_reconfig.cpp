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

#include <map>
#include <string>

#include "vswsim/engine.hpp"
#include "vswsim/mgmt.hpp"
#include "vswsim/reconfig.hpp"
#include "vswsim/scenario.hpp"

using namespace vswsim;

namespace {

std::map<int, PipelineSpec> homogeneous(const std::string& name, int count) {
    std::map<int, PipelineSpec> d;
    for (int i = 0; i < count; ++i) d[i] = builtin_specs().at(name);
    return d;
}

// Two lanes, one l2 slot, broadcast path from lane 0 to lane 1. Traffic
// starts late enough for a reconfiguration issued at t=0 to finish first.
Scenario bare_scenario() {
    Scenario sc;
    sc.name = "reconfig_probe";
    sc.duration_ps = 100 * kPsPerUs;
    sc.lanes = 2;
    sc.policy.full_reconfig_ps = 50 * kPsPerUs;
    sc.policy.partial_reconfig_ps = 10 * kPsPerUs;
    sc.deployments[0] = "l2_switch";
    sc.ingress.push_back({{0, 10}, {false, DeviceId{0}}});
    sc.egress.push_back({{10, DeviceId{0}}, {false, {1}}});
    TrafficProfile p;
    p.lane = 0;
    p.vid = 10;
    p.rate_gbps = 5.0;
    p.size_kind = SizeKind::kFixed;
    p.size_bytes = 256;
    p.dst_mac = test_mac(10, 1, false);
    p.src_mac = test_mac(10, 0, true);
    p.start_ps = 20 * kPsPerUs;
    sc.traffic.push_back(p);
    return sc;
}

}  // namespace

TEST_CASE("default policy splits the fabric 26 ways, rounded up") {
    const ReconfigPolicy policy = default_reconfig_policy();
    CHECK(policy.mode == ReconfigMode::kPartial);
    CHECK(policy.partial_slot_budget.luts == 66462);
    CHECK(policy.partial_slot_budget.ffs == 132924);
    CHECK(policy.partial_slot_budget.brams == 104);
    CHECK(policy.partial_rate_penalty == 0.95);
    CHECK(policy.full_reconfig_ps == 100 * kPsPerMs);
    CHECK(policy.partial_reconfig_ps == 10 * kPsPerMs);

    FabricCapacity tiny;
    tiny.luts = 26;
    tiny.ffs = 53;
    tiny.brams = 27;
    const ReconfigPolicy t = default_reconfig_policy(tiny);
    CHECK(t.partial_slot_budget.luts == 1);
    CHECK(t.partial_slot_budget.ffs == 3);
    CHECK(t.partial_slot_budget.brams == 2);
}

TEST_CASE("full deployment check sums footprints against the fabric") {
    const FabricCapacity cap;
    CHECK(check_full_deployment({}, cap).ok);
    CHECK(check_full_deployment(homogeneous("l2_switch", 26), cap).ok);
    CHECK(check_full_deployment(homogeneous("int", 11), cap).ok);

    // Twelve int instances want 2880 BRAMs of the 2688 available.
    const ReconfigCheck over = check_full_deployment(homogeneous("int", 12), cap);
    CHECK_FALSE(over.ok);
    CHECK(over.reason.find("BRAMs 2880 exceed capacity 2688") != std::string::npos);

    // Out-of-range slots are rejected before accounting.
    std::map<int, PipelineSpec> stray;
    stray[26] = builtin_specs().at("l2_switch");
    CHECK_FALSE(check_full_deployment(stray, cap).ok);
    std::map<int, PipelineSpec> neg;
    neg[-1] = builtin_specs().at("l2_switch");
    CHECK_FALSE(check_full_deployment(neg, cap).ok);

    // LUT and FF exhaustion produce their own reasons.
    FabricCapacity lean = cap;
    lean.luts = 27626 * 2;
    const ReconfigCheck luts = check_full_deployment(homogeneous("l2_switch", 3), lean);
    CHECK_FALSE(luts.ok);
    CHECK(luts.reason.find("LUTs") != std::string::npos);
    lean.luts = cap.luts;
    lean.ffs = 39520;
    const ReconfigCheck ffs = check_full_deployment(homogeneous("l2_switch", 2), lean);
    CHECK_FALSE(ffs.ok);
    CHECK(ffs.reason.find("FFs") != std::string::npos);
}

TEST_CASE("partial deployment check enforces the per-slot budget") {
    const ReconfigPolicy policy = default_reconfig_policy();
    CHECK(check_partial_deployment(builtin_specs().at("l2_switch"), policy).ok);

    // firewall (153 BRAMs) and router (185) bust the 104-BRAM slot; int is
    // caught even earlier, at 77956 LUTs against the 66462 budget.
    for (const char* name : {"firewall", "router"}) {
        const ReconfigCheck c =
            check_partial_deployment(builtin_specs().at(name), policy);
        CHECK_FALSE(c.ok);
        CHECK(c.reason.find("BRAMs") != std::string::npos);
        CHECK(c.reason.find(name) != std::string::npos);
    }
    const ReconfigCheck big =
        check_partial_deployment(builtin_specs().at("int"), policy);
    CHECK_FALSE(big.ok);
    CHECK(big.reason.find("LUTs") != std::string::npos);

    // A generous budget admits the int pipeline.
    ReconfigPolicy wide = policy;
    wide.partial_slot_budget = ResourceFootprint{100000, 200000, 240};
    CHECK(check_partial_deployment(builtin_specs().at("int"), wide).ok);

    // LUT exhaustion reports LUTs.
    ReconfigPolicy lean = policy;
    lean.partial_slot_budget.luts = 1000;
    const ReconfigCheck c = check_partial_deployment(builtin_specs().at("l2_switch"), lean);
    CHECK_FALSE(c.ok);
    CHECK(c.reason.find("LUTs") != std::string::npos);

    ReconfigPolicy full_mode = policy;
    full_mode.mode = ReconfigMode::kFull;
    CHECK_FALSE(check_partial_deployment(builtin_specs().at("l2_switch"), full_mode).ok);
}

TEST_CASE("full reconfiguration wipes every slot and its tables") {
    Engine engine(bare_scenario());
    REQUIRE(engine.slot_status(0) == SlotStatus::kActive);

    // Seed a mac entry so state loss is observable.
    MatchEntry entry;
    entry.key = {0xaabbccddeeffULL};
    entry.action = make_forward(1);
    REQUIRE(engine.slot_instance(0)->table_write(1, entry));
    CHECK(engine.slot_instance(0)->table(1).size() == 1);

    engine.advance(5 * kPsPerUs);
    const ReconfigCheck check =
        engine.full_reconfigure({{1, "router"}, {2, "l2_switch"}});
    REQUIRE(check.ok);

    // The whole array reconfigures, including slots absent from the new map.
    CHECK(engine.slot_status(0) == SlotStatus::kReconfiguring);
    CHECK(engine.slot_status(1) == SlotStatus::kReconfiguring);
    CHECK(engine.slot_status(25) == SlotStatus::kReconfiguring);
    CHECK(engine.slot_instance(1) == nullptr);

    // Management traffic to a reconfiguring slot gets a busy NACK.
    ControlFrame probe;
    probe.opcode = Opcode::kRegRead;
    probe.target = 1;
    probe.resource_id = 0;
    const ControlFrame reply = engine.submit(probe);
    REQUIRE(reply.opcode == Opcode::kNack);
    CHECK(reply.payload[0] == static_cast<std::uint8_t>(NackReason::kBusy));

    engine.advance(60 * kPsPerUs);  // past full_reconfig_ps = 50 us
    CHECK(engine.slot_status(0) == SlotStatus::kEmpty);
    CHECK(engine.slot_status(1) == SlotStatus::kActive);
    CHECK(engine.slot_status(2) == SlotStatus::kActive);
    REQUIRE(engine.slot_spec(1) != nullptr);
    CHECK(engine.slot_spec(1)->name == "router");

    // No state survives: the new instances start with empty tables.
    CHECK(engine.slot_instance(1)->table(0).size() == 0);
    CHECK(engine.slot_instance(2)->table(1).size() == 0);
}

TEST_CASE("full reconfiguration refuses oversubscribed deployments") {
    Engine engine(bare_scenario());
    std::map<int, std::string> twelve;
    for (int i = 0; i < 12; ++i) twelve[i] = "int";
    const ReconfigCheck check = engine.full_reconfigure(twelve);
    CHECK_FALSE(check.ok);
    CHECK(check.reason.find("BRAMs 2880 exceed capacity 2688") != std::string::npos);
    // Nothing was disturbed.
    CHECK(engine.slot_status(0) == SlotStatus::kActive);
    CHECK(engine.slot_instance(0) != nullptr);

    const ReconfigCheck unknown = engine.full_reconfigure({{0, "mystery"}});
    CHECK_FALSE(unknown.ok);
    CHECK(unknown.reason.find("mystery") != std::string::npos);
}

TEST_CASE("partial reconfiguration touches one slot and applies the penalty") {
    // Engine A: untouched deployment at full rate.
    Engine a(bare_scenario());
    a.record_timings = true;
    a.run();
    REQUIRE(a.totals().conserved());
    REQUIRE(a.totals().delivered > 100);

    // Engine B: slot 0 redeployed partially before traffic starts.
    Engine b(bare_scenario());
    b.record_timings = true;
    const ReconfigCheck check = b.partial_reconfigure(0, "l2_switch");
    REQUIRE(check.ok);
    CHECK(b.slot_status(0) == SlotStatus::kReconfiguring);
    b.run();
    REQUIRE(b.totals().conserved());
    CHECK(b.totals().delivered == a.totals().delivered);

    // Service time per 2048-bit packet: 2048000 / 132.63 rounds to 15441 ps;
    // the 0.95 partial penalty stretches it to 16254 ps.
    REQUIRE_FALSE(a.timings().empty());
    for (const auto& [id, t] : a.timings()) {
        CHECK(t.vs_end - t.vs_start == 15441);
    }
    for (const auto& [id, t] : b.timings()) {
        CHECK(t.vs_end - t.vs_start == 16254);
    }
}

TEST_CASE("partial reconfiguration enforces budget and mode") {
    Engine engine(bare_scenario());
    // int busts the per-slot budget.
    const ReconfigCheck budget = engine.partial_reconfigure(2, "int");
    CHECK_FALSE(budget.ok);
    CHECK(budget.reason.find("LUTs") != std::string::npos);
    CHECK(engine.slot_status(2) == SlotStatus::kEmpty);

    // Undeploying through partial mode empties the slot after the delay.
    std::string error;
    REQUIRE(engine.undeploy(0, &error));
    CHECK(engine.slot_status(0) == SlotStatus::kReconfiguring);
    engine.advance(15 * kPsPerUs);
    CHECK(engine.slot_status(0) == SlotStatus::kEmpty);

    // Full mode rejects partial requests outright.
    Scenario full = bare_scenario();
    full.policy.mode = ReconfigMode::kFull;
    Engine strict(full);
    const ReconfigCheck mode = strict.partial_reconfigure(1, "l2_switch");
    CHECK_FALSE(mode.ok);
    CHECK(mode.reason.find("partial mode") != std::string::npos);

    // In full mode a deploy rebuilds the whole array.
    REQUIRE(strict.deploy(1, "l2_switch", &error));
    CHECK(strict.slot_status(0) == SlotStatus::kReconfiguring);
    CHECK(strict.slot_status(1) == SlotStatus::kReconfiguring);
    strict.advance(60 * kPsPerUs);
    CHECK(strict.slot_status(0) == SlotStatus::kActive);
    CHECK(strict.slot_status(1) == SlotStatus::kActive);
}

TEST_CASE("partial reconfiguration of an idle slot leaves traffic untouched") {
    // Engine A: plain run. Engine C: slot 5 deployed partially mid-run.
    Engine a(bare_scenario());
    a.record_timings = true;
    a.run();

    Engine c(bare_scenario());
    c.record_timings = true;
    c.advance(30 * kPsPerUs);
    REQUIRE(c.partial_reconfigure(5, "l2_switch").ok);
    c.run();

    REQUIRE(c.totals().conserved());
    CHECK(c.slot_status(5) == SlotStatus::kActive);
    CHECK(a.totals().delivered == c.totals().delivered);
    CHECK(a.totals().dropped == c.totals().dropped);

    // Per-packet timing through slot 0 is bit-identical.
    REQUIRE(a.timings().size() == c.timings().size());
    auto ia = a.timings().begin();
    auto ic = c.timings().begin();
    for (; ia != a.timings().end(); ++ia, ++ic) {
        CHECK(ia->first == ic->first);
        CHECK(ia->second.vs_start == ic->second.vs_start);
        CHECK(ia->second.vs_end == ic->second.vs_end);
    }
}

TEST_CASE("reconfiguration discards in-flight packets as reconfig drops") {
    // Let traffic run, then yank the slot mid-stream.
    Scenario sc = bare_scenario();
    sc.traffic[0].start_ps = 0;
    sc.traffic[0].rate_gbps = 50.0;
    Engine engine(sc);
    engine.advance(30 * kPsPerUs);
    REQUIRE(engine.partial_reconfigure(0, "l2_switch").ok);
    engine.run();
    REQUIRE(engine.totals().conserved());
    // The slot queue held packets when the reconfiguration hit.
    CHECK(engine.slot_metrics(0).drops[static_cast<int>(DropReason::kReconfig)] > 0);
    // While the slot was away, ingress counted it unavailable.
    CHECK(engine.lane_metrics(0).drops[static_cast<int>(DropReason::kSlotUnavailable)] > 0);
    CHECK(engine.totals().delivered > 0);
}
