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

#include <vector>

#include "vswsim/core.hpp"
#include "vswsim/steering.hpp"

using namespace vswsim;

namespace {

Packet tagged_packet(std::uint8_t lane, std::uint16_t vid) {
    Packet p;
    p.frame.assign(64, 0);
    p.rx_lane = lane;
    write_vlan(p.frame, VlanTag{.pcp = 0, .dei = false, .vid = vid});
    return p;
}

Packet untagged_packet(std::uint8_t lane) {
    Packet p;
    p.frame.assign(64, 0);
    p.rx_lane = lane;
    return p;
}

}  // namespace

TEST_CASE("ingress table enforces key and target ranges") {
    SteeringTables t;
    CHECK(t.ingress_add({0, 10}, {false, DeviceId{0}}));
    CHECK(t.ingress_add({33, 4094}, {false, DeviceId{25}}));
    CHECK(t.ingress_add({1, 10}, {true, DeviceId{0}}));  // explicit drop entry

    CHECK_FALSE(t.ingress_add({34, 10}, {false, DeviceId{0}}));   // lane range
    CHECK_FALSE(t.ingress_add({2, 0}, {false, DeviceId{0}}));     // vid 0
    CHECK_FALSE(t.ingress_add({2, 4095}, {false, DeviceId{0}}));  // vid 4095
    CHECK_FALSE(t.ingress_add({2, 10}, {false, DeviceId{26}}));   // slot range
    CHECK_FALSE(t.ingress_add({0, 10}, {false, DeviceId{1}}));    // duplicate

    CHECK(t.ingress_find({0, 10}) != nullptr);
    CHECK(t.ingress_find({0, 11}) == nullptr);
    CHECK(t.ingress_del({0, 10}));
    CHECK_FALSE(t.ingress_del({0, 10}));
    CHECK(t.ingress_find({0, 10}) == nullptr);

    // A smaller deployment shrinks the admissible slot range.
    SteeringTables small(4);
    CHECK(small.ingress_add({0, 10}, {false, DeviceId{3}}));
    CHECK_FALSE(small.ingress_add({0, 11}, {false, DeviceId{4}}));
}

TEST_CASE("egress table rejects the receive-only loopback lane") {
    SteeringTables t;
    CHECK(t.egress_add({10, DeviceId{0}}, {false, {0, 5, 31}}));
    CHECK(t.egress_add({10, DeviceId{1}}, {false, {kVtxLane}}));
    CHECK(t.egress_add({11, DeviceId{0}}, {true, {}}));  // drop entry

    CHECK_FALSE(t.egress_add({12, DeviceId{0}}, {false, {kVrxLane}}));
    CHECK_FALSE(t.egress_add({12, DeviceId{0}}, {false, {34}}));
    CHECK_FALSE(t.egress_add({12, DeviceId{0}}, {false, {}}));    // empty set
    CHECK_FALSE(t.egress_add({0, DeviceId{0}}, {false, {1}}));    // vid 0
    CHECK_FALSE(t.egress_add({12, DeviceId{26}}, {false, {1}}));  // slot range
    CHECK_FALSE(t.egress_add({10, DeviceId{0}}, {false, {2}}));   // duplicate

    CHECK(t.egress_del({10, DeviceId{1}}));
    CHECK_FALSE(t.egress_del({10, DeviceId{1}}));
}

TEST_CASE("ipi classification stamps vlan and device id") {
    SteeringTables t;
    REQUIRE(t.ingress_add({3, 100}, {false, DeviceId{7}}));
    REQUIRE(t.ingress_add({3, 101}, {true, DeviceId{0}}));

    Packet p = tagged_packet(3, 100);
    auto d = ipi_classify(t, p);
    REQUIRE(d.forward.has_value());
    CHECK(d.forward->value == 7);
    REQUIRE(p.vlan.has_value());
    CHECK(p.vlan->vid == 100);
    REQUIRE(p.device_id.has_value());
    CHECK(p.device_id->value == 7);

    // Untagged: no_tag, nothing stamped.
    Packet u = untagged_packet(3);
    auto du = ipi_classify(t, u);
    CHECK_FALSE(du.forward.has_value());
    CHECK(du.drop == DropReason::kNoTag);
    CHECK_FALSE(u.device_id.has_value());

    // Tagged but no entry for (lane, vid).
    Packet m = tagged_packet(4, 100);
    auto dm = ipi_classify(t, m);
    CHECK_FALSE(dm.forward.has_value());
    CHECK(dm.drop == DropReason::kNoEntry);

    // Explicit drop entry.
    Packet x = tagged_packet(3, 101);
    auto dx = ipi_classify(t, x);
    CHECK_FALSE(dx.forward.has_value());
    CHECK(dx.drop == DropReason::kExplicit);

    // The same VID on another lane is a separate key.
    Packet y = tagged_packet(5, 101);
    CHECK(ipi_classify(t, y).drop == DropReason::kNoEntry);
}

TEST_CASE("opi unicast stays inside the authorized lane set") {
    SteeringTables t;
    REQUIRE(t.egress_add({100, DeviceId{7}}, {false, {1, 2, 3}}));
    REQUIRE(t.egress_add({101, DeviceId{7}}, {true, {}}));

    Packet p = tagged_packet(0, 100);
    p.vlan = parse_vlan(p.frame);
    p.device_id = DeviceId{7};

    auto ok = opi_classify(t, p, {false, 2});
    CHECK(ok.lanes == std::vector<std::uint8_t>{2});

    auto outside = opi_classify(t, p, {false, 9});
    CHECK(outside.lanes.empty());
    CHECK(outside.drop == DropReason::kUnauthorized);

    auto oob = opi_classify(t, p, {false, 77});
    CHECK(oob.lanes.empty());
    CHECK(oob.drop == DropReason::kUnauthorized);

    // Wrong (vid, slot) pair: no entry.
    Packet q = tagged_packet(0, 100);
    q.vlan = parse_vlan(q.frame);
    q.device_id = DeviceId{6};
    CHECK(opi_classify(t, q, {false, 2}).drop == DropReason::kNoEntry);

    // Explicit egress drop.
    Packet r = tagged_packet(0, 101);
    r.vlan = parse_vlan(r.frame);
    r.device_id = DeviceId{7};
    CHECK(opi_classify(t, r, {false, 1}).drop == DropReason::kExplicit);

    // Unstamped packets never reach a lane.
    Packet bare = untagged_packet(0);
    CHECK(opi_classify(t, bare, {false, 1}).drop == DropReason::kNoEntry);
}

TEST_CASE("opi broadcast expands to all authorized lanes except ingress") {
    SteeringTables t;
    REQUIRE(t.egress_add({100, DeviceId{0}}, {false, {1, 4, 9}}));

    Packet p = tagged_packet(4, 100);
    p.vlan = parse_vlan(p.frame);
    p.device_id = DeviceId{0};

    auto d = opi_classify(t, p, {true, 0});
    CHECK(d.lanes == std::vector<std::uint8_t>{1, 9});

    // Ingress lane outside the set: every authorized lane is used.
    Packet q = tagged_packet(2, 100);
    q.vlan = parse_vlan(q.frame);
    q.device_id = DeviceId{0};
    CHECK(opi_classify(t, q, {true, 0}).lanes == std::vector<std::uint8_t>{1, 4, 9});

    // A single-lane set facing its own ingress collapses to a drop.
    SteeringTables s;
    REQUIRE(s.egress_add({100, DeviceId{0}}, {false, {4}}));
    auto empty = opi_classify(s, p, {true, 0});
    CHECK(empty.lanes.empty());
    CHECK(empty.drop == DropReason::kUnauthorized);
}

TEST_CASE("classification is pure table lookup with no cross-talk") {
    SteeringTables t;
    for (int lane = 0; lane < 8; ++lane) {
        for (int vid = 10; vid < 14; ++vid) {
            REQUIRE(t.ingress_add({static_cast<std::uint8_t>(lane),
                                   static_cast<std::uint16_t>(vid)},
                                  {false, DeviceId{static_cast<std::uint8_t>(
                                              (lane + vid) % kMaxSlots)}}));
        }
    }
    Rng rng(5);
    for (int i = 0; i < 5000; ++i) {
        const auto lane = static_cast<std::uint8_t>(rng.below(8));
        const auto vid = static_cast<std::uint16_t>(10 + rng.below(4));
        Packet p = tagged_packet(lane, vid);
        auto d = ipi_classify(t, p);
        REQUIRE(d.forward.has_value());
        CHECK(d.forward->value == (lane + vid) % kMaxSlots);
    }
}
