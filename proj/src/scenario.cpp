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

#include "vswsim/scenario.hpp"

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vswsim {
namespace {

using nlohmann::json;

std::string fmt(const char* pattern, ...) {
    char buf[256];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return buf;
}

// Accepts decimal, 0x hex, colon-grouped MAC bytes, and dotted IPv4.
std::uint64_t parse_scalar(const std::string& text) {
    if (text.empty()) throw std::runtime_error("empty value");
    if (text.find(':') != std::string::npos) {
        std::uint64_t value = 0;
        int groups = 0;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ':')) {
            value = (value << 8) | (std::stoul(part, nullptr, 16) & 0xff);
            if (++groups > 8) throw std::runtime_error("bad value: " + text);
        }
        return value;
    }
    if (text.find('.') != std::string::npos) {
        std::uint64_t value = 0;
        int groups = 0;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, '.')) {
            unsigned long octet = std::stoul(part, nullptr, 10);
            if (octet > 255 || ++groups > 4) {
                throw std::runtime_error("bad value: " + text);
            }
            value = (value << 8) | octet;
        }
        if (groups != 4) throw std::runtime_error("bad value: " + text);
        return value;
    }
    return std::stoull(text, nullptr, 0);
}

std::uint64_t scalar_of(const json& node) {
    if (node.is_number_unsigned()) return node.get<std::uint64_t>();
    if (node.is_number_integer()) {
        auto v = node.get<std::int64_t>();
        if (v < 0) throw std::runtime_error("negative value");
        return static_cast<std::uint64_t>(v);
    }
    if (node.is_string()) return parse_scalar(node.get<std::string>());
    throw std::runtime_error("expected number or string value");
}

ActionSpec parse_action(const json& node) {
    std::string kind = node.value("action", "forward");
    if (kind == "drop") return make_drop();
    if (kind == "noop") {
        ActionSpec a;
        a.kind = ActionKind::kNoOp;
        return a;
    }
    if (kind != "forward") throw std::runtime_error("unknown action: " + kind);
    if (node.value("broadcast", false)) return make_broadcast();
    if (!node.contains("port")) throw std::runtime_error("forward needs port");
    return make_forward(static_cast<std::uint8_t>(node.at("port").get<unsigned>()));
}

MatchEntry parse_entry(const json& node) {
    MatchEntry entry;
    for (const auto& k : node.at("key")) entry.key.push_back(scalar_of(k));
    entry.prefix_len = node.value("prefix", 0);
    if (node.contains("masks")) {
        for (const auto& m : node.at("masks")) entry.masks.push_back(scalar_of(m));
    }
    entry.priority = node.value("priority", 0u);
    entry.action = parse_action(node);
    return entry;
}

SizeKind parse_size(const std::string& text, std::uint32_t* lo, std::uint32_t* hi) {
    if (text == "imix") return SizeKind::kImix;
    std::stringstream ss(text);
    std::string kind, a, b;
    std::getline(ss, kind, ':');
    std::getline(ss, a, ':');
    if (kind == "fixed") {
        *lo = static_cast<std::uint32_t>(std::stoul(a));
        return SizeKind::kFixed;
    }
    if (kind == "uniform") {
        std::getline(ss, b, ':');
        *lo = static_cast<std::uint32_t>(std::stoul(a));
        *hi = static_cast<std::uint32_t>(std::stoul(b));
        return SizeKind::kUniform;
    }
    throw std::runtime_error("unknown size spec: " + text);
}

ResourceFootprint parse_footprint(const json& node) {
    ResourceFootprint fp;
    fp.luts = node.at("luts").get<std::uint64_t>();
    fp.ffs = node.at("ffs").get<std::uint64_t>();
    fp.brams = node.at("brams").get<std::uint64_t>();
    return fp;
}

PipelineSpec parse_pipeline(const json& node) {
    PipelineSpec spec;
    spec.name = node.at("name").get<std::string>();
    spec.rate_gbps = node.at("rate_gbps").get<double>();
    spec.latency_cycles = node.at("latency_cycles").get<std::uint32_t>();
    spec.footprint = parse_footprint(node.at("footprint"));
    for (const auto& h : node.at("parser")) {
        HeaderRule rule;
        rule.name = h.at("header").get<std::string>();
        rule.length = h.at("length").get<std::uint32_t>();
        for (const auto& e : h.at("extract")) {
            rule.extracts.push_back({e.at("field").get<std::string>(),
                                     e.at("offset").get<std::uint32_t>(),
                                     e.at("width").get<std::uint32_t>()});
        }
        rule.dispatch_field = h.value("dispatch_field", "");
        if (h.contains("transitions")) {
            for (const auto& [value, next] : h.at("transitions").items()) {
                rule.transitions[parse_scalar(value)] = next.get<std::string>();
            }
        }
        spec.parser.push_back(std::move(rule));
    }
    for (const auto& s : node.at("stages")) {
        MatchActionStage stage;
        stage.table_name = s.at("table").get<std::string>();
        stage.table_id = static_cast<std::uint32_t>(spec.stages.size());
        std::string kind = s.value("kind", "exact");
        if (kind == "exact") stage.match_kind = MatchKind::kExact;
        else if (kind == "lpm") stage.match_kind = MatchKind::kLpm;
        else if (kind == "ternary") stage.match_kind = MatchKind::kTernary;
        else throw std::runtime_error("unknown match kind: " + kind);
        if (s.contains("keys")) {
            for (const auto& k : s.at("keys")) {
                stage.key_fields.push_back(k.get<std::string>());
            }
        }
        stage.capacity = s.value("capacity", 1024u);
        if (s.contains("default")) {
            stage.default_action = parse_action(s.at("default"));
        } else {
            stage.default_action.kind = ActionKind::kNoOp;
        }
        spec.stages.push_back(std::move(stage));
    }
    if (node.contains("deparser")) {
        for (const auto& f : node.at("deparser")) {
            spec.deparser.push_back(f.get<std::string>());
        }
    }
    spec.validate();
    return spec;
}

TrafficProfile parse_traffic(const json& node) {
    TrafficProfile p;
    p.lane = static_cast<std::uint8_t>(node.at("lane").get<unsigned>());
    p.vid = static_cast<std::uint16_t>(node.at("vid").get<unsigned>());
    p.rate_gbps = node.at("rate_gbps").get<double>();
    if (node.contains("size")) {
        p.size_kind =
            parse_size(node.at("size").get<std::string>(), &p.size_bytes, &p.size_max_bytes);
    }
    if (node.contains("dst_mac")) p.dst_mac = scalar_of(node.at("dst_mac"));
    if (node.contains("src_mac")) p.src_mac = scalar_of(node.at("src_mac"));
    p.ipv4 = node.value("ipv4", false);
    p.proto = static_cast<std::uint8_t>(node.value("proto", 17u));
    if (node.contains("ip_src")) p.ip_src = static_cast<std::uint32_t>(scalar_of(node.at("ip_src")));
    if (node.contains("ip_dst")) p.ip_dst = static_cast<std::uint32_t>(scalar_of(node.at("ip_dst")));
    if (node.contains("ip_dst_cycle")) {
        for (const auto& d : node.at("ip_dst_cycle")) {
            p.ip_dst_cycle.push_back(static_cast<std::uint32_t>(scalar_of(d)));
        }
    }
    p.sport = static_cast<std::uint16_t>(node.value("sport", 1024u));
    p.dport = static_cast<std::uint16_t>(node.value("dport", 4096u));
    p.start_ps = node.value("start_ps", static_cast<SimTime>(0));
    p.stop_ps = node.value("stop_ps", static_cast<SimTime>(-1));
    return p;
}

}  // namespace

const PipelineSpec* Scenario::find_pipeline(const std::string& spec_name) const {
    auto extra = extra_pipelines.find(spec_name);
    if (extra != extra_pipelines.end()) return &extra->second;
    const auto& builtins = builtin_specs();
    auto it = builtins.find(spec_name);
    if (it != builtins.end()) return &it->second;
    return nullptr;
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> errors;
    if (duration_ps <= 0) errors.push_back("duration_ps must be positive");
    if (lanes < 1 || lanes > kPhysicalLanes) {
        errors.push_back(fmt("lanes %d outside 1..%d", lanes, kPhysicalLanes));
    }
    for (const auto& [slot, spec_name] : deployments) {
        if (slot < 0 || slot >= kMaxSlots) {
            errors.push_back(fmt("deployment slot %d outside 0..%d", slot, kMaxSlots - 1));
        }
        if (find_pipeline(spec_name) == nullptr) {
            errors.push_back("unknown pipeline spec: " + spec_name);
        }
    }
    std::set<IngressKey> ingress_seen;
    for (const auto& [key, action] : ingress) {
        if (key.rx_lane >= kTotalLanes) {
            errors.push_back(fmt("ingress lane %u outside 0..%d", key.rx_lane, kTotalLanes - 1));
        }
        if (key.vid == 0 || key.vid >= 4095) {
            errors.push_back(fmt("ingress vid %u reserved", key.vid));
        }
        if (!action.drop && deployments.count(action.target.value) == 0) {
            errors.push_back(fmt("ingress (%u,%u) targets empty slot %u", key.rx_lane, key.vid,
                                 action.target.value));
        }
        if (!ingress_seen.insert(key).second) {
            errors.push_back(fmt("duplicate ingress key (%u,%u)", key.rx_lane, key.vid));
        }
    }
    for (const auto& [key, action] : egress) {
        if (key.vid == 0 || key.vid >= 4095) {
            errors.push_back(fmt("egress vid %u reserved", key.vid));
        }
        if (!action.drop && action.lanes.empty()) {
            errors.push_back(fmt("egress (%u,%u) authorizes no lanes", key.vid, key.device.value));
        }
        for (auto lane : action.lanes) {
            if (lane >= kTotalLanes || lane == kVrxLane) {
                errors.push_back(fmt("egress (%u,%u) lane %u invalid", key.vid, key.device.value,
                                     lane));
            }
        }
    }
    for (const auto& seed : table_seeds) {
        auto dep = deployments.find(seed.slot);
        if (dep == deployments.end()) {
            errors.push_back(fmt("table seed targets empty slot %d", seed.slot));
            continue;
        }
        const PipelineSpec* spec = find_pipeline(dep->second);
        if (spec == nullptr) continue;
        const MatchActionStage* stage = spec->stage_by_name(seed.table);
        if (stage == nullptr) {
            errors.push_back(fmt("slot %d has no table %s", seed.slot, seed.table.c_str()));
            continue;
        }
        if (seed.entry.key.size() != stage->key_fields.size()) {
            errors.push_back(fmt("table seed %s key arity %zu, expected %zu", seed.table.c_str(),
                                 seed.entry.key.size(), stage->key_fields.size()));
        }
    }
    std::map<int, double> lane_load;
    for (const auto& p : traffic) {
        if (p.lane >= lanes) {
            errors.push_back(fmt("traffic lane %u outside active 0..%d", p.lane, lanes - 1));
        }
        if (p.vid == 0 || p.vid >= 4095) {
            errors.push_back(fmt("traffic vid %u reserved", p.vid));
        }
        if (p.rate_gbps <= 0) {
            errors.push_back(fmt("traffic (%u,%u) rate must be positive", p.lane, p.vid));
        }
        std::uint32_t lo = p.size_bytes;
        std::uint32_t hi = p.size_kind == SizeKind::kUniform ? p.size_max_bytes : p.size_bytes;
        if (p.size_kind == SizeKind::kImix) {
            lo = 64;
            hi = 1518;
        }
        if (lo < kMinFrameBytes || hi > kDefaultMtuBytes || lo > hi) {
            errors.push_back(fmt("traffic (%u,%u) sizes %u..%u outside %u..%u", p.lane, p.vid, lo,
                                 hi, kMinFrameBytes, kDefaultMtuBytes));
        }
        lane_load[p.lane] += p.rate_gbps;
    }
    for (const auto& [lane, load] : lane_load) {
        if (load > kLaneRateGbps + 1e-9) {
            errors.push_back(fmt("lane %d offered %.2f Gbps exceeds %.0f", lane, load,
                                 kLaneRateGbps));
        }
    }
    for (const auto& action : schedule) {
        if (action.at_ps < 0 || action.at_ps > duration_ps) {
            errors.push_back(fmt("schedule entry at %lld ps outside run",
                                 static_cast<long long>(action.at_ps)));
        }
        if (action.kind != ReconfigAction::Kind::kFull &&
            (action.slot < 0 || action.slot >= kMaxSlots)) {
            errors.push_back(fmt("schedule slot %d outside 0..%d", action.slot, kMaxSlots - 1));
        }
        if (action.kind == ReconfigAction::Kind::kDeploy &&
            find_pipeline(action.spec_name) == nullptr) {
            errors.push_back("schedule deploys unknown spec: " + action.spec_name);
        }
        if (action.kind == ReconfigAction::Kind::kFull) {
            for (const auto& [slot, spec_name] : action.full_deployments) {
                if (slot < 0 || slot >= kMaxSlots || find_pipeline(spec_name) == nullptr) {
                    errors.push_back(fmt("schedule full reconfig invalid slot %d / spec %s", slot,
                                         spec_name.c_str()));
                }
            }
        }
    }
    return errors;
}

std::uint64_t test_mac(std::uint16_t vid, std::uint8_t lane, bool source) {
    std::uint64_t oui = source ? 0x060000000000ull : 0x020000000000ull;
    return oui | (static_cast<std::uint64_t>(vid) << 8) | lane;
}

Scenario parse_scenario_json(const std::string& text) {
    json root = json::parse(text);
    Scenario sc;
    sc.name = root.value("name", "scenario");
    sc.seed = root.value("seed", 1ull);
    sc.duration_ps = root.value("duration_ps", kPsPerMs);
    sc.lanes = root.value("lanes", kPhysicalLanes);
    if (root.contains("capacity")) {
        const auto& cap = root.at("capacity");
        sc.capacity.luts = cap.value("luts", sc.capacity.luts);
        sc.capacity.ffs = cap.value("ffs", sc.capacity.ffs);
        sc.capacity.brams = cap.value("brams", sc.capacity.brams);
    }
    sc.policy = default_reconfig_policy(sc.capacity);
    if (root.contains("policy")) {
        const auto& pol = root.at("policy");
        std::string mode = pol.value("mode", "partial");
        if (mode == "full") sc.policy.mode = ReconfigMode::kFull;
        else if (mode == "partial") sc.policy.mode = ReconfigMode::kPartial;
        else throw std::runtime_error("unknown reconfig mode: " + mode);
        if (pol.contains("budget")) {
            sc.policy.partial_slot_budget = parse_footprint(pol.at("budget"));
        }
        sc.policy.partial_rate_penalty =
            pol.value("partial_rate_penalty", sc.policy.partial_rate_penalty);
        sc.policy.full_reconfig_ps = pol.value("full_reconfig_ps", sc.policy.full_reconfig_ps);
        sc.policy.partial_reconfig_ps =
            pol.value("partial_reconfig_ps", sc.policy.partial_reconfig_ps);
    }
    if (root.contains("pipelines")) {
        for (const auto& node : root.at("pipelines")) {
            PipelineSpec spec = parse_pipeline(node);
            sc.extra_pipelines.emplace(spec.name, std::move(spec));
        }
    }
    if (root.contains("deployments")) {
        for (const auto& [slot, spec_name] : root.at("deployments").items()) {
            sc.deployments[std::stoi(slot)] = spec_name.get<std::string>();
        }
    }
    if (root.contains("ingress")) {
        for (const auto& node : root.at("ingress")) {
            IngressKey key{static_cast<std::uint8_t>(node.at("lane").get<unsigned>()),
                           static_cast<std::uint16_t>(node.at("vid").get<unsigned>())};
            IngressAction action;
            if (node.value("drop", false)) {
                action.drop = true;
            } else {
                action.target = DeviceId{static_cast<std::uint8_t>(node.at("vs").get<unsigned>())};
            }
            sc.ingress.emplace_back(key, action);
        }
    }
    if (root.contains("egress")) {
        for (const auto& node : root.at("egress")) {
            EgressKey key{static_cast<std::uint16_t>(node.at("vid").get<unsigned>()),
                          DeviceId{static_cast<std::uint8_t>(node.at("vs").get<unsigned>())}};
            EgressAction action;
            if (node.value("drop", false)) {
                action.drop = true;
            } else {
                for (const auto& lane : node.at("lanes")) {
                    action.lanes.insert(static_cast<std::uint8_t>(lane.get<unsigned>()));
                }
            }
            sc.egress.emplace_back(key, action);
        }
    }
    if (root.contains("tables")) {
        for (const auto& node : root.at("tables")) {
            TableSeed seed;
            seed.slot = node.at("slot").get<int>();
            seed.table = node.at("table").get<std::string>();
            seed.entry = parse_entry(node);
            sc.table_seeds.push_back(std::move(seed));
        }
    }
    if (root.contains("traffic")) {
        for (const auto& node : root.at("traffic")) {
            sc.traffic.push_back(parse_traffic(node));
        }
    }
    if (root.contains("schedule")) {
        for (const auto& node : root.at("schedule")) {
            ReconfigAction action;
            action.at_ps = node.at("at_ps").get<SimTime>();
            if (node.contains("deploy")) {
                action.kind = ReconfigAction::Kind::kDeploy;
                action.slot = node.at("deploy").at("slot").get<int>();
                action.spec_name = node.at("deploy").at("spec").get<std::string>();
            } else if (node.contains("undeploy")) {
                action.kind = ReconfigAction::Kind::kUndeploy;
                action.slot = node.at("undeploy").get<int>();
            } else if (node.contains("full")) {
                action.kind = ReconfigAction::Kind::kFull;
                for (const auto& [slot, spec_name] : node.at("full").items()) {
                    action.full_deployments[std::stoi(slot)] = spec_name.get<std::string>();
                }
            } else {
                throw std::runtime_error("schedule entry needs deploy, undeploy, or full");
            }
            sc.schedule.push_back(std::move(action));
        }
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_json(buffer.str());
}

namespace {

// 32 lanes at line rate, 4 flows per lane, spread over all 26 l2 slots.
// Every MAC is pre-seeded so the run is drop-free and delivers 3.2 Tbps.
Scenario build_saturation_l2() {
    Scenario sc;
    sc.name = "saturation_l2";
    sc.duration_ps = 1'200 * kPsPerUs;
    sc.lanes = kPhysicalLanes;
    for (int s = 0; s < kMaxSlots; ++s) sc.deployments[s] = "l2_switch";
    for (int f = 0; f < 128; ++f) {
        auto lane = static_cast<std::uint8_t>(f / 4);
        auto vid = static_cast<std::uint16_t>(10 + f);
        auto slot = static_cast<std::uint8_t>(f % kMaxSlots);
        auto out = static_cast<std::uint8_t>(lane ^ 1);
        sc.ingress.push_back({{lane, vid}, {false, DeviceId{slot}}});
        sc.egress.push_back({{vid, DeviceId{slot}}, {false, {out}}});
        TableSeed seed;
        seed.slot = slot;
        seed.table = "mac";
        seed.entry.key = {test_mac(vid, out, false)};
        seed.entry.action = make_forward(out);
        sc.table_seeds.push_back(std::move(seed));
        TrafficProfile p;
        p.lane = lane;
        p.vid = vid;
        p.rate_gbps = 25.0;
        p.size_kind = SizeKind::kFixed;
        p.size_bytes = 256;
        p.dst_mac = test_mac(vid, out, false);
        p.src_mac = test_mac(vid, lane, true);
        sc.traffic.push_back(std::move(p));
    }
    return sc;
}

// Saturates int slots so the FPGA layer is the bottleneck. Each flow cycles
// its destination over the slot's four /24 routes, spreading TX load so no
// physical lane exceeds line rate even under worst-case drop skew. Routes
// always span all 32 TX lanes: telemetry growth inflates egress above the
// ingress rate, so confining TX to the active RX lanes would oversubscribe
// them and head-of-line stalls at full TX queues would mask the real limit.
Scenario build_int_scenario(const std::string& name, int lanes, int flows, double rate_gbps) {
    Scenario sc;
    sc.name = name;
    sc.duration_ps = 1'200 * kPsPerUs;
    sc.lanes = lanes;
    const int slots = 11;
    for (int s = 0; s < slots; ++s) sc.deployments[s] = "int";
    for (int s = 0; s < slots; ++s) {
        for (int p = 0; p < 4; ++p) {
            auto out = static_cast<std::uint8_t>((4 * s + p) % kPhysicalLanes);
            TableSeed seed;
            seed.slot = s;
            seed.table = "routes";
            seed.entry.key = {(10ull << 24) | (static_cast<std::uint64_t>(s) << 16) |
                              (static_cast<std::uint64_t>(p) << 8)};
            seed.entry.prefix_len = 24;
            seed.entry.action = make_forward(out);
            sc.table_seeds.push_back(std::move(seed));
        }
    }
    for (int f = 0; f < flows; ++f) {
        auto lane = static_cast<std::uint8_t>(f % lanes);
        auto vid = static_cast<std::uint16_t>(10 + f);
        auto slot = static_cast<std::uint8_t>(f % slots);
        int member = f / slots;
        sc.ingress.push_back({{lane, vid}, {false, DeviceId{slot}}});
        EgressAction out;
        for (int p = 0; p < 4; ++p) {
            out.lanes.insert(static_cast<std::uint8_t>((4 * slot + p) % kPhysicalLanes));
        }
        sc.egress.push_back({{vid, DeviceId{slot}}, out});
        TrafficProfile tp;
        tp.lane = lane;
        tp.vid = vid;
        tp.rate_gbps = rate_gbps;
        tp.size_kind = SizeKind::kFixed;
        tp.size_bytes = 256;
        tp.dst_mac = test_mac(vid, 0, false);
        tp.src_mac = test_mac(vid, lane, true);
        tp.ipv4 = true;
        tp.proto = 17;
        tp.ip_src = (172u << 24) | (16u << 16) | (static_cast<std::uint32_t>(f) << 8) | 1;
        for (int p = 0; p < 4; ++p) {
            tp.ip_dst_cycle.push_back((10u << 24) | (static_cast<std::uint32_t>(slot) << 16) |
                                      (static_cast<std::uint32_t>(p) << 8) |
                                      static_cast<std::uint32_t>(1 + member));
        }
        tp.sport = static_cast<std::uint16_t>(1000 + f);
        tp.dport = 4790;
        sc.traffic.push_back(std::move(tp));
    }
    return sc;
}

Scenario build_smoke_l2() {
    Scenario sc;
    sc.name = "smoke_l2";
    sc.duration_ps = 200 * kPsPerUs;
    sc.lanes = 2;
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
    sc.traffic.push_back(std::move(p));
    return sc;
}

}  // namespace

Scenario builtin_scenario(const std::string& name) {
    // 121 flows = 11 per slot at 12.5 Gbps oversubscribes every int slot.
    if (name == "fpga_limited_int") return build_int_scenario(name, 32, 121, 12.5);
    // 64 flows at 12.5 Gbps fill 8 RX lanes; the PHY caps intake at 800 Gbps
    // and record insertion lifts delivered TX bits to 9/8 of that.
    if (name == "int_phy_limited") return build_int_scenario(name, 8, 64, 12.5);
    if (name == "saturation_l2") return build_saturation_l2();
    if (name == "smoke_l2") return build_smoke_l2();
    throw std::runtime_error("unknown builtin scenario: " + name);
}

std::vector<std::string> builtin_scenario_names() {
    return {"saturation_l2", "fpga_limited_int", "int_phy_limited", "smoke_l2"};
}

}  // namespace vswsim
