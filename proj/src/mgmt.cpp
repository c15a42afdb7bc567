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

#include "vswsim/mgmt.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

namespace vswsim {

void BitWriter::append(std::uint64_t value, std::uint32_t bits) {
    if (bits > 64 || cursor_ + bits > size_bits_) {
        throw ProtocolError("bit writer overflow");
    }
    for (std::uint32_t i = 0; i < bits; ++i) {
        const std::uint64_t bit = (value >> (bits - 1 - i)) & 1;
        const std::size_t pos = cursor_ + i;
        if (bit) {
            data_[pos / 8] |= static_cast<std::uint8_t>(0x80u >> (pos % 8));
        } else {
            data_[pos / 8] &= static_cast<std::uint8_t>(~(0x80u >> (pos % 8)));
        }
    }
    cursor_ += bits;
}

std::uint64_t BitReader::take(std::uint32_t bits) {
    if (bits > 64 || cursor_ + bits > size_bits_) {
        throw ProtocolError("bit reader overrun");
    }
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < bits; ++i) {
        const std::size_t pos = cursor_ + i;
        const std::uint64_t bit = (data_[pos / 8] >> (7 - pos % 8)) & 1;
        v = (v << 1) | bit;
    }
    cursor_ += bits;
    return v;
}

namespace {

bool valid_target(std::uint8_t target) {
    return target < kMaxSlots || target == kTargetIpi || target == kTargetOpi;
}

}  // namespace

Word146 encode(const ControlFrame& frame) {
    if (static_cast<std::uint8_t>(frame.opcode) < 1 ||
        static_cast<std::uint8_t>(frame.opcode) > 7) {
        throw ProtocolError("reserved opcode");
    }
    if (!valid_target(frame.target)) {
        throw ProtocolError("unknown target " + std::to_string(frame.target));
    }
    Word146 word{};
    BitWriter w(word.data(), word.size() * 8);
    w.append(static_cast<std::uint8_t>(frame.opcode), 4);
    w.append(frame.target, 6);
    w.append(frame.resource_id, 8);
    for (std::uint8_t byte : frame.payload) {
        w.append(byte, 8);
    }
    return word;
}

ControlFrame decode(const Word146& word) {
    BitReader r(word.data(), word.size() * 8);
    ControlFrame frame;
    const std::uint64_t op = r.take(4);
    if (op < 1 || op > 7) {
        throw ProtocolError("reserved opcode " + std::to_string(op));
    }
    frame.opcode = static_cast<Opcode>(op);
    frame.target = static_cast<std::uint8_t>(r.take(6));
    if (!valid_target(frame.target)) {
        throw ProtocolError("unknown target " + std::to_string(frame.target));
    }
    frame.resource_id = static_cast<std::uint8_t>(r.take(8));
    for (std::uint8_t& byte : frame.payload) {
        byte = static_cast<std::uint8_t>(r.take(8));
    }
    if (r.take(6) != 0) {
        throw ProtocolError("nonzero padding bits");
    }
    return frame;
}

std::string to_string(NackReason reason) {
    switch (reason) {
        case NackReason::kNoDevice: return "no_device";
        case NackReason::kRejected: return "rejected";
        case NackReason::kBadAddress: return "bad_address";
        case NackReason::kTableFull: return "table_full";
        case NackReason::kProtocol: return "protocol";
        case NackReason::kBusy: return "busy";
        case NackReason::kAbsent: return "absent";
    }
    return "unknown";
}

ControlFrame make_ack(const ControlFrame& request) {
    ControlFrame reply;
    reply.opcode = Opcode::kAck;
    reply.target = request.target;
    reply.resource_id = request.resource_id;
    return reply;
}

ControlFrame make_nack(const ControlFrame& request, NackReason reason) {
    ControlFrame reply;
    reply.opcode = Opcode::kNack;
    reply.target = request.target;
    reply.resource_id = request.resource_id;
    reply.payload[0] = static_cast<std::uint8_t>(reason);
    return reply;
}

namespace {

NackReason nack_reason_of(const ControlFrame& reply) {
    return static_cast<NackReason>(reply.payload[0]);
}

ControlFrame make_read_reply(const ControlFrame& request) {
    ControlFrame reply;
    reply.opcode = Opcode::kReadReply;
    reply.target = request.target;
    reply.resource_id = request.resource_id;
    return reply;
}

ControlFrame make_reg_reply(const ControlFrame& request, std::uint64_t value) {
    ControlFrame reply = make_read_reply(request);
    BitWriter w(reply.payload.data(), 128);
    w.append(value, 64);
    return reply;
}

// Entry payload layout: key fields in stage order, then prefix (lpm) or
// masks + priority (ternary), then act(4) and arg(16).
void pack_entry_fields(BitWriter& w, const PipelineSpec& spec,
                       const MatchActionStage& stage, const MatchEntry& entry) {
    for (std::size_t i = 0; i < stage.key_fields.size(); ++i) {
        w.append(entry.key[i], spec.field_width_bits(stage.key_fields[i]));
    }
    if (stage.match_kind == MatchKind::kLpm) {
        w.append(entry.prefix_len, 8);
    } else if (stage.match_kind == MatchKind::kTernary) {
        for (std::size_t i = 0; i < stage.key_fields.size(); ++i) {
            w.append(entry.masks[i], spec.field_width_bits(stage.key_fields[i]));
        }
        w.append(entry.priority, 16);
    }
}

void unpack_entry_fields(BitReader& r, const PipelineSpec& spec,
                         const MatchActionStage& stage, MatchEntry* entry) {
    entry->key.clear();
    entry->masks.clear();
    for (const std::string& f : stage.key_fields) {
        entry->key.push_back(r.take(spec.field_width_bits(f)));
    }
    if (stage.match_kind == MatchKind::kLpm) {
        entry->prefix_len = static_cast<std::uint8_t>(r.take(8));
    } else if (stage.match_kind == MatchKind::kTernary) {
        for (const std::string& f : stage.key_fields) {
            entry->masks.push_back(r.take(spec.field_width_bits(f)));
        }
        entry->priority = static_cast<std::uint16_t>(r.take(16));
    }
}

std::uint32_t entry_payload_bits(const PipelineSpec& spec,
                                 const MatchActionStage& stage) {
    std::uint32_t bits = spec.key_width_bits(stage) + 20;
    if (stage.match_kind == MatchKind::kLpm) bits += 8;
    if (stage.match_kind == MatchKind::kTernary) {
        bits += spec.key_width_bits(stage) + 16;
    }
    return bits;
}

void pack_action(BitWriter& w, const ActionSpec& action) {
    if (action.kind == ActionKind::kForward) {
        w.append(kPayloadActForward, 4);
        w.append(action.broadcast ? kPayloadArgBroadcast
                                  : static_cast<std::uint16_t>(action.port),
                 16);
    } else {
        w.append(kPayloadActDrop, 4);
        w.append(0, 16);
    }
}

ActionSpec unpack_action(std::uint8_t act, std::uint16_t arg) {
    if (act == kPayloadActForward) {
        return arg == kPayloadArgBroadcast ? make_broadcast() : make_forward(arg);
    }
    return make_drop();
}

}  // namespace

ControlFrame pack_ingress_write(std::uint8_t lane, std::uint16_t vid,
                                std::uint8_t act, std::uint8_t device) {
    ControlFrame frame;
    frame.opcode = Opcode::kTableWrite;
    frame.target = kTargetIpi;
    frame.resource_id = 0;
    BitWriter w(frame.payload.data(), 128);
    w.append(lane, 8);
    w.append(vid, 12);
    w.append(act, 4);
    w.append(device, 8);
    return frame;
}

ControlFrame pack_egress_write(std::uint16_t vid, std::uint8_t device,
                               std::uint8_t act, std::uint64_t lane_mask) {
    ControlFrame frame;
    frame.opcode = Opcode::kTableWrite;
    frame.target = kTargetOpi;
    frame.resource_id = 0;
    BitWriter w(frame.payload.data(), 128);
    w.append(vid, 12);
    w.append(device, 8);
    w.append(act, 4);
    w.append(lane_mask, kTotalLanes);
    return frame;
}

ControlFrame pack_table_write(std::uint8_t slot, const PipelineSpec& spec,
                              int table_id, const MatchEntry& entry,
                              std::uint8_t act) {
    const MatchActionStage& stage =
        spec.stages.at(static_cast<std::size_t>(table_id));
    if (entry_payload_bits(spec, stage) > 128) {
        throw ProtocolError("entry for table '" + stage.table_name +
                            "' does not fit a control frame");
    }
    ControlFrame frame;
    frame.opcode = Opcode::kTableWrite;
    frame.target = slot;
    frame.resource_id = static_cast<std::uint8_t>(table_id);
    BitWriter w(frame.payload.data(), 128);
    pack_entry_fields(w, spec, stage, entry);
    if (act == kPayloadActDelete) {
        w.append(kPayloadActDelete, 4);
        w.append(0, 16);
    } else {
        pack_action(w, entry.action);
    }
    return frame;
}

namespace {

// Steering payloads.
struct IngressPayload {
    std::uint8_t lane;
    std::uint16_t vid;
    std::uint8_t act;
    std::uint8_t device;
};

IngressPayload unpack_ingress(const ControlFrame& frame) {
    BitReader r(frame.payload.data(), 128);
    IngressPayload p{};
    p.lane = static_cast<std::uint8_t>(r.take(8));
    p.vid = static_cast<std::uint16_t>(r.take(12));
    p.act = static_cast<std::uint8_t>(r.take(4));
    p.device = static_cast<std::uint8_t>(r.take(8));
    return p;
}

struct EgressPayload {
    std::uint16_t vid;
    std::uint8_t device;
    std::uint8_t act;
    std::uint64_t lane_mask;
};

EgressPayload unpack_egress(const ControlFrame& frame) {
    BitReader r(frame.payload.data(), 128);
    EgressPayload p{};
    p.vid = static_cast<std::uint16_t>(r.take(12));
    p.device = static_cast<std::uint8_t>(r.take(8));
    p.act = static_cast<std::uint8_t>(r.take(4));
    p.lane_mask = r.take(kTotalLanes);
    return p;
}

std::uint64_t lane_mask_of(const std::set<std::uint8_t>& lanes) {
    std::uint64_t mask = 0;
    for (std::uint8_t lane : lanes) {
        mask |= 1ull << (kTotalLanes - 1 - lane);
    }
    return mask;
}

std::set<std::uint8_t> lanes_of_mask(std::uint64_t mask) {
    std::set<std::uint8_t> lanes;
    for (std::uint8_t lane = 0; lane < kTotalLanes; ++lane) {
        if ((mask >> (kTotalLanes - 1 - lane)) & 1) lanes.insert(lane);
    }
    return lanes;
}

ControlFrame reply_ingress_entry(const ControlFrame& request,
                                 const IngressKey& key,
                                 const IngressAction& action) {
    ControlFrame reply = make_read_reply(request);
    BitWriter w(reply.payload.data(), 128);
    w.append(key.rx_lane, 8);
    w.append(key.vid, 12);
    w.append(action.drop ? kPayloadActDrop : kPayloadActForward, 4);
    w.append(action.drop ? 0 : action.target.value, 8);
    return reply;
}

ControlFrame reply_egress_entry(const ControlFrame& request,
                                const EgressKey& key,
                                const EgressAction& action) {
    ControlFrame reply = make_read_reply(request);
    BitWriter w(reply.payload.data(), 128);
    w.append(key.vid, 12);
    w.append(key.device.value, 8);
    w.append(action.drop ? kPayloadActDrop : kPayloadActForward, 4);
    w.append(action.drop ? 0 : lane_mask_of(action.lanes), kTotalLanes);
    return reply;
}

ControlFrame dispatch_steering_write(const ControlFrame& frame,
                                     SteeringTables& tables) {
    if (frame.resource_id != 0) {
        return make_nack(frame, NackReason::kBadAddress);
    }
    if (frame.target == kTargetIpi) {
        const IngressPayload p = unpack_ingress(frame);
        const IngressKey key{p.lane, p.vid};
        if (p.act == kPayloadActDelete) {
            return tables.ingress_del(key)
                       ? make_ack(frame)
                       : make_nack(frame, NackReason::kAbsent);
        }
        if (p.act > kPayloadActDelete) {
            return make_nack(frame, NackReason::kProtocol);
        }
        IngressAction action;
        action.drop = p.act == kPayloadActDrop;
        action.target = DeviceId{p.device};
        return tables.ingress_add(key, action)
                   ? make_ack(frame)
                   : make_nack(frame, NackReason::kRejected);
    }
    const EgressPayload p = unpack_egress(frame);
    const EgressKey key{p.vid, DeviceId{p.device}};
    if (p.act == kPayloadActDelete) {
        return tables.egress_del(key) ? make_ack(frame)
                                      : make_nack(frame, NackReason::kAbsent);
    }
    if (p.act > kPayloadActDelete) {
        return make_nack(frame, NackReason::kProtocol);
    }
    EgressAction action;
    action.drop = p.act == kPayloadActDrop;
    action.lanes = lanes_of_mask(p.lane_mask);
    return tables.egress_add(key, std::move(action))
               ? make_ack(frame)
               : make_nack(frame, NackReason::kRejected);
}

ControlFrame dispatch_steering_read(const ControlFrame& frame,
                                    const SteeringTables& tables) {
    if (frame.resource_id != 0) {
        return make_nack(frame, NackReason::kBadAddress);
    }
    BitReader r(frame.payload.data(), 128);
    const bool by_index = r.take(1) != 0;
    if (frame.target == kTargetIpi) {
        if (by_index) {
            std::size_t index = r.take(32);
            if (index >= tables.ingress().size()) {
                return make_nack(frame, NackReason::kBadAddress);
            }
            auto it = tables.ingress().begin();
            std::advance(it, static_cast<std::ptrdiff_t>(index));
            return reply_ingress_entry(frame, it->first, it->second);
        }
        const IngressKey key{static_cast<std::uint8_t>(r.take(8)),
                             static_cast<std::uint16_t>(r.take(12))};
        const IngressAction* action = tables.ingress_find(key);
        if (action == nullptr) return make_nack(frame, NackReason::kAbsent);
        return reply_ingress_entry(frame, key, *action);
    }
    if (by_index) {
        std::size_t index = r.take(32);
        if (index >= tables.egress().size()) {
            return make_nack(frame, NackReason::kBadAddress);
        }
        auto it = tables.egress().begin();
        std::advance(it, static_cast<std::ptrdiff_t>(index));
        return reply_egress_entry(frame, it->first, it->second);
    }
    const EgressKey key{static_cast<std::uint16_t>(r.take(12)),
                        DeviceId{static_cast<std::uint8_t>(r.take(8))}};
    const EgressAction* action = tables.egress_find(key);
    if (action == nullptr) return make_nack(frame, NackReason::kAbsent);
    return reply_egress_entry(frame, key, *action);
}

ControlFrame dispatch_interface_reg(const ControlFrame& frame,
                                    const InterfaceCounters& counters) {
    if (frame.opcode == Opcode::kRegWrite) {
        return make_nack(frame, NackReason::kRejected);
    }
    if (frame.resource_id == 0) {
        return make_reg_reply(frame, counters.forwarded);
    }
    const std::size_t idx = frame.resource_id - 1u;
    if (idx < counters.drops.size()) {
        return make_reg_reply(frame, counters.drops[idx]);
    }
    return make_nack(frame, NackReason::kBadAddress);
}

ControlFrame reply_table_entry(const ControlFrame& request,
                               const PipelineSpec& spec,
                               const MatchActionStage& stage,
                               const MatchEntry& entry) {
    ControlFrame reply = make_read_reply(request);
    BitWriter w(reply.payload.data(), 128);
    pack_entry_fields(w, spec, stage, entry);
    pack_action(w, entry.action);
    return reply;
}

ControlFrame dispatch_slot(const ControlFrame& frame, ControlPlane& system) {
    const int slot = frame.target;
    if (system.slot_reconfiguring(slot)) {
        return make_nack(frame, NackReason::kBusy);
    }
    VsInstance* vs = system.slot_instance(slot);
    if (vs == nullptr) {
        return make_nack(frame, NackReason::kNoDevice);
    }
    const PipelineSpec& spec = vs->spec();

    switch (frame.opcode) {
        case Opcode::kTableWrite: {
            if (frame.resource_id >= spec.stages.size()) {
                return make_nack(frame, NackReason::kBadAddress);
            }
            const MatchActionStage& stage = spec.stages[frame.resource_id];
            if (entry_payload_bits(spec, stage) > 128) {
                return make_nack(frame, NackReason::kProtocol);
            }
            BitReader r(frame.payload.data(), 128);
            MatchEntry entry;
            unpack_entry_fields(r, spec, stage, &entry);
            const std::uint8_t act = static_cast<std::uint8_t>(r.take(4));
            const std::uint16_t arg = static_cast<std::uint16_t>(r.take(16));
            if (act == kPayloadActDelete) {
                return vs->table_erase(frame.resource_id, entry)
                           ? make_ack(frame)
                           : make_nack(frame, NackReason::kAbsent);
            }
            if (act > kPayloadActDelete) {
                return make_nack(frame, NackReason::kProtocol);
            }
            entry.action = unpack_action(act, arg);
            if (vs->table_write(frame.resource_id, entry)) {
                return make_ack(frame);
            }
            return make_nack(frame,
                             vs->table(frame.resource_id).size() >= stage.capacity
                                 ? NackReason::kTableFull
                                 : NackReason::kRejected);
        }
        case Opcode::kTableRead: {
            if (frame.resource_id >= spec.stages.size()) {
                return make_nack(frame, NackReason::kBadAddress);
            }
            const MatchActionStage& stage = spec.stages[frame.resource_id];
            BitReader r(frame.payload.data(), 128);
            const bool by_index = r.take(1) != 0;
            if (by_index) {
                const std::size_t index = r.take(32);
                const MatchEntry* entry =
                    vs->table_read_by_index(frame.resource_id, index);
                if (entry == nullptr) {
                    return make_nack(frame, NackReason::kBadAddress);
                }
                return reply_table_entry(frame, spec, stage, *entry);
            }
            MatchEntry probe;
            unpack_entry_fields(r, spec, stage, &probe);
            const MatchEntry* entry = vs->table_read(frame.resource_id, probe);
            if (entry == nullptr) return make_nack(frame, NackReason::kAbsent);
            return reply_table_entry(frame, spec, stage, *entry);
        }
        case Opcode::kRegWrite: {
            if (frame.resource_id < kVsRegisterCount) {
                BitReader r(frame.payload.data(), 128);
                vs->registers[frame.resource_id] = r.take(64);
                return make_ack(frame);
            }
            return make_nack(frame, NackReason::kRejected);
        }
        case Opcode::kRegRead: {
            if (frame.resource_id < kVsRegisterCount) {
                return make_reg_reply(frame, vs->registers[frame.resource_id]);
            }
            if (frame.resource_id == kRegPacketsProcessed) {
                return make_reg_reply(frame, vs->packets_processed);
            }
            if (frame.resource_id == kRegPacketsEmitted) {
                return make_reg_reply(frame, vs->packets_emitted);
            }
            if (frame.resource_id >= kRegTableCountersBase) {
                const int offset = frame.resource_id - kRegTableCountersBase;
                const int table_id = offset / 2;
                if (table_id < vs->table_count()) {
                    const TableState& table = vs->table(table_id);
                    return make_reg_reply(frame, (offset % 2) == 0 ? table.hits
                                                                   : table.misses);
                }
            }
            return make_nack(frame, NackReason::kBadAddress);
        }
        default:
            return make_nack(frame, NackReason::kProtocol);
    }
}

}  // namespace

ControlFrame dispatch(const ControlFrame& frame, ControlPlane& system) {
    if (frame.target == kTargetIpi || frame.target == kTargetOpi) {
        switch (frame.opcode) {
            case Opcode::kTableWrite:
                return dispatch_steering_write(frame, system.steering());
            case Opcode::kTableRead:
                return dispatch_steering_read(frame, system.steering());
            case Opcode::kRegWrite:
            case Opcode::kRegRead:
                return dispatch_interface_reg(frame,
                                              frame.target == kTargetIpi
                                                  ? system.ipi_counters()
                                                  : system.opi_counters());
            default:
                return make_nack(frame, NackReason::kProtocol);
        }
    }
    if (frame.target >= kMaxSlots) {
        return make_nack(frame, NackReason::kBadAddress);
    }
    return dispatch_slot(frame, system);
}

// ---------------------------------------------------------------------------
// Operator CLI.

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

// Accepts decimal, 0x hex, dotted IPv4, and colon-separated MAC notation.
bool parse_value(const std::string& text, std::uint64_t* out) {
    if (text.empty()) return false;
    if (text.find(':') != std::string::npos) {
        std::uint64_t v = 0;
        int groups = 0;
        std::istringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ':')) {
            if (part.empty() || part.size() > 2 || groups >= 8) return false;
            std::size_t used = 0;
            const unsigned long byte = std::stoul(part, &used, 16);
            if (used != part.size() || byte > 0xff) return false;
            v = (v << 8) | byte;
            ++groups;
        }
        if (groups < 2) return false;
        *out = v;
        return true;
    }
    if (text.find('.') != std::string::npos) {
        std::uint64_t v = 0;
        int groups = 0;
        std::istringstream ss(text);
        std::string part;
        while (std::getline(ss, part, '.')) {
            if (part.empty() || groups >= 4) return false;
            std::size_t used = 0;
            const unsigned long octet = std::stoul(part, &used, 10);
            if (used != part.size() || octet > 255) return false;
            v = (v << 8) | octet;
            ++groups;
        }
        if (groups != 4) return false;
        *out = v;
        return true;
    }
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used, 0);
        if (used != text.size()) return false;
        *out = v;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_duration_ps(const std::string& text, SimTime* out) {
    std::size_t used = 0;
    std::uint64_t n = 0;
    try {
        n = std::stoull(text, &used, 10);
    } catch (const std::exception&) {
        return false;
    }
    const std::string unit = text.substr(used);
    std::int64_t scale;
    if (unit == "ps") {
        scale = 1;
    } else if (unit == "ns") {
        scale = kPsPerNs;
    } else if (unit == "us") {
        scale = kPsPerUs;
    } else if (unit == "ms") {
        scale = kPsPerMs;
    } else {
        return false;
    }
    *out = static_cast<SimTime>(n) * scale;
    return true;
}

// key=value arguments plus bare flags like "drop".
struct Args {
    std::map<std::string, std::string> kv;
    std::set<std::string> flags;
};

Args collect_args(const std::vector<std::string>& tokens, std::size_t from) {
    Args args;
    for (std::size_t i = from; i < tokens.size(); ++i) {
        const std::size_t eq = tokens[i].find('=');
        if (eq == std::string::npos) {
            args.flags.insert(tokens[i]);
        } else {
            args.kv[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
        }
    }
    return args;
}

bool split_values(const std::string& text, std::vector<std::uint64_t>* out) {
    std::istringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::uint64_t v = 0;
        if (!parse_value(part, &v)) return false;
        out->push_back(v);
    }
    return !out->empty();
}

std::string format_reply(const ControlFrame& reply) {
    switch (reply.opcode) {
        case Opcode::kAck:
            return "ACK";
        case Opcode::kNack:
            return "NACK " + to_string(nack_reason_of(reply));
        default:
            return "READ_REPLY";
    }
}

constexpr const char* kUsage =
    "usage: ingress add|del lane=<n> vid=<v> vs=<id>|drop | ingress dump |\n"
    "       egress add|del vid=<v> vs=<id> lanes=<l,..>|drop | egress dump |\n"
    "       vs <id> table <name> add|del|dump [key=<v,..>] [prefix=<n>]\n"
    "         [mask=<v,..>] [prio=<n>] [action=forward|drop] [port=<n>|bcast] |\n"
    "       vs <id> reg <idx> read|write <val> | stats |\n"
    "       deploy <slot> <spec> | undeploy <slot> | run <duration> | quit";

class CliSession {
  public:
    CliSession(std::ostream& out, ShellHost& host) : out_(out), host_(host) {}

    // Returns false when the session should end.
    bool handle(const std::string& line);

  private:
    void usage() { out_ << kUsage << "\n"; }

    void cmd_ingress(const std::vector<std::string>& tokens);
    void cmd_egress(const std::vector<std::string>& tokens);
    void cmd_vs(const std::vector<std::string>& tokens);
    void cmd_stats();
    void dump_ingress();
    void dump_egress();
    void dump_table(std::uint8_t slot, const PipelineSpec& spec, int table_id);

    std::uint64_t read_counter(std::uint8_t target, std::uint8_t reg,
                               bool* ok);

    std::ostream& out_;
    ShellHost& host_;
};

bool CliSession::handle(const std::string& line) {
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty() || tokens[0][0] == '#') return true;
    const std::string& cmd = tokens[0];
    if (cmd == "quit" || cmd == "exit") return false;
    if (cmd == "ingress") {
        cmd_ingress(tokens);
    } else if (cmd == "egress") {
        cmd_egress(tokens);
    } else if (cmd == "vs") {
        cmd_vs(tokens);
    } else if (cmd == "stats") {
        cmd_stats();
    } else if (cmd == "deploy" && tokens.size() == 3) {
        int slot = -1;
        try {
            slot = std::stoi(tokens[1]);
        } catch (const std::exception&) {
            usage();
            return true;
        }
        std::string error;
        if (host_.deploy(slot, tokens[2], &error)) {
            out_ << "ACK\n";
        } else {
            out_ << "error: " << error << "\n";
        }
    } else if (cmd == "undeploy" && tokens.size() == 2) {
        int slot = -1;
        try {
            slot = std::stoi(tokens[1]);
        } catch (const std::exception&) {
            usage();
            return true;
        }
        std::string error;
        if (host_.undeploy(slot, &error)) {
            out_ << "ACK\n";
        } else {
            out_ << "error: " << error << "\n";
        }
    } else if (cmd == "run" && tokens.size() == 2) {
        SimTime duration = 0;
        if (!parse_duration_ps(tokens[1], &duration) || duration < 0) {
            usage();
            return true;
        }
        host_.advance(duration);
        out_ << "t=" << host_.now() << "ps\n";
    } else {
        usage();
    }
    return true;
}

void CliSession::cmd_ingress(const std::vector<std::string>& tokens) {
    if (tokens.size() >= 2 && tokens[1] == "dump") {
        dump_ingress();
        return;
    }
    if (tokens.size() < 3 || (tokens[1] != "add" && tokens[1] != "del")) {
        usage();
        return;
    }
    const Args args = collect_args(tokens, 2);
    std::uint64_t lane = 0;
    std::uint64_t vid = 0;
    if (!args.kv.count("lane") || !parse_value(args.kv.at("lane"), &lane) ||
        !args.kv.count("vid") || !parse_value(args.kv.at("vid"), &vid)) {
        usage();
        return;
    }
    std::uint8_t act;
    std::uint64_t device = 0;
    if (tokens[1] == "del") {
        act = kPayloadActDelete;
    } else if (args.flags.count("drop")) {
        act = kPayloadActDrop;
    } else if (args.kv.count("vs") && parse_value(args.kv.at("vs"), &device)) {
        act = kPayloadActForward;
    } else {
        usage();
        return;
    }
    const ControlFrame reply = host_.submit(pack_ingress_write(
        static_cast<std::uint8_t>(lane), static_cast<std::uint16_t>(vid), act,
        static_cast<std::uint8_t>(device)));
    out_ << format_reply(reply) << "\n";
}

void CliSession::cmd_egress(const std::vector<std::string>& tokens) {
    if (tokens.size() >= 2 && tokens[1] == "dump") {
        dump_egress();
        return;
    }
    if (tokens.size() < 3 || (tokens[1] != "add" && tokens[1] != "del")) {
        usage();
        return;
    }
    const Args args = collect_args(tokens, 2);
    std::uint64_t vid = 0;
    std::uint64_t device = 0;
    if (!args.kv.count("vid") || !parse_value(args.kv.at("vid"), &vid) ||
        !args.kv.count("vs") || !parse_value(args.kv.at("vs"), &device)) {
        usage();
        return;
    }
    std::uint8_t act;
    std::uint64_t lane_mask = 0;
    if (tokens[1] == "del") {
        act = kPayloadActDelete;
    } else if (args.flags.count("drop")) {
        act = kPayloadActDrop;
    } else if (args.kv.count("lanes")) {
        std::vector<std::uint64_t> lanes;
        if (!split_values(args.kv.at("lanes"), &lanes)) {
            usage();
            return;
        }
        std::set<std::uint8_t> lane_set;
        for (std::uint64_t lane : lanes) {
            if (lane >= kTotalLanes) {
                usage();
                return;
            }
            lane_set.insert(static_cast<std::uint8_t>(lane));
        }
        lane_mask = lane_mask_of(lane_set);
        act = kPayloadActForward;
    } else {
        usage();
        return;
    }
    const ControlFrame reply = host_.submit(
        pack_egress_write(static_cast<std::uint16_t>(vid),
                          static_cast<std::uint8_t>(device), act, lane_mask));
    out_ << format_reply(reply) << "\n";
}

void CliSession::cmd_vs(const std::vector<std::string>& tokens) {
    if (tokens.size() < 4) {
        usage();
        return;
    }
    int slot = -1;
    try {
        slot = std::stoi(tokens[1]);
    } catch (const std::exception&) {
        usage();
        return;
    }
    if (slot < 0 || slot >= kMaxSlots) {
        usage();
        return;
    }

    if (tokens[2] == "reg") {
        int reg = -1;
        try {
            reg = std::stoi(tokens[3]);
        } catch (const std::exception&) {
            usage();
            return;
        }
        if (reg < 0 || reg > 255 || tokens.size() < 5) {
            usage();
            return;
        }
        ControlFrame frame;
        frame.target = static_cast<std::uint8_t>(slot);
        frame.resource_id = static_cast<std::uint8_t>(reg);
        if (tokens[4] == "read") {
            frame.opcode = Opcode::kRegRead;
            const ControlFrame reply = host_.submit(frame);
            if (reply.opcode == Opcode::kReadReply) {
                BitReader r(reply.payload.data(), 128);
                out_ << r.take(64) << "\n";
            } else {
                out_ << format_reply(reply) << "\n";
            }
        } else if (tokens[4] == "write" && tokens.size() == 6) {
            std::uint64_t value = 0;
            if (!parse_value(tokens[5], &value)) {
                usage();
                return;
            }
            frame.opcode = Opcode::kRegWrite;
            BitWriter w(frame.payload.data(), 128);
            w.append(value, 64);
            out_ << format_reply(host_.submit(frame)) << "\n";
        } else {
            usage();
        }
        return;
    }

    if (tokens[2] != "table" || tokens.size() < 5) {
        usage();
        return;
    }
    const PipelineSpec* spec = host_.slot_spec(slot);
    if (spec == nullptr) {
        out_ << "NACK no_device\n";
        return;
    }
    const int table_id = spec->stage_index(tokens[3]);
    if (table_id < 0) {
        out_ << "error: no table '" << tokens[3] << "' in " << spec->name << "\n";
        return;
    }
    const MatchActionStage& stage = spec->stages[static_cast<std::size_t>(table_id)];
    const std::string& verb = tokens[4];
    if (verb == "dump") {
        dump_table(static_cast<std::uint8_t>(slot), *spec, table_id);
        return;
    }
    if (verb != "add" && verb != "del") {
        usage();
        return;
    }
    const Args args = collect_args(tokens, 5);
    MatchEntry entry;
    if (!args.kv.count("key") || !split_values(args.kv.at("key"), &entry.key) ||
        entry.key.size() != stage.key_fields.size()) {
        usage();
        return;
    }
    if (stage.match_kind == MatchKind::kLpm) {
        std::uint64_t prefix = 0;
        if (!args.kv.count("prefix") ||
            !parse_value(args.kv.at("prefix"), &prefix)) {
            usage();
            return;
        }
        entry.prefix_len = static_cast<std::uint8_t>(prefix);
    }
    if (stage.match_kind == MatchKind::kTernary) {
        if (!args.kv.count("mask") ||
            !split_values(args.kv.at("mask"), &entry.masks) ||
            entry.masks.size() != entry.key.size()) {
            usage();
            return;
        }
        std::uint64_t prio = 0;
        if (args.kv.count("prio") && parse_value(args.kv.at("prio"), &prio)) {
            entry.priority = static_cast<std::uint16_t>(prio);
        }
    }

    std::uint8_t act = kPayloadActDelete;
    if (verb == "add") {
        const std::string action =
            args.kv.count("action") ? args.kv.at("action") : "forward";
        if (action == "drop") {
            entry.action = make_drop();
            act = kPayloadActDrop;
        } else if (action == "forward") {
            if (args.flags.count("bcast") ||
                (args.kv.count("port") && args.kv.at("port") == "bcast")) {
                entry.action = make_broadcast();
            } else {
                std::uint64_t port = 0;
                if (!args.kv.count("port") ||
                    !parse_value(args.kv.at("port"), &port)) {
                    usage();
                    return;
                }
                entry.action = make_forward(static_cast<std::uint32_t>(port));
            }
            act = kPayloadActForward;
        } else {
            usage();
            return;
        }
    }

    try {
        const ControlFrame reply = host_.submit(pack_table_write(
            static_cast<std::uint8_t>(slot), *spec, table_id, entry, act));
        out_ << format_reply(reply) << "\n";
    } catch (const ProtocolError& e) {
        out_ << "error: " << e.what() << "\n";
    }
}

void CliSession::dump_ingress() {
    for (std::uint32_t index = 0;; ++index) {
        ControlFrame frame;
        frame.opcode = Opcode::kTableRead;
        frame.target = kTargetIpi;
        BitWriter w(frame.payload.data(), 128);
        w.append(1, 1);
        w.append(index, 32);
        const ControlFrame reply = host_.submit(frame);
        if (reply.opcode != Opcode::kReadReply) break;
        BitReader r(reply.payload.data(), 128);
        const std::uint64_t lane = r.take(8);
        const std::uint64_t vid = r.take(12);
        const std::uint64_t act = r.take(4);
        const std::uint64_t dev = r.take(8);
        out_ << "ingress," << lane << "," << vid << ",";
        if (act == kPayloadActForward) {
            out_ << "forward," << dev << "\n";
        } else {
            out_ << "drop,-\n";
        }
    }
}

void CliSession::dump_egress() {
    for (std::uint32_t index = 0;; ++index) {
        ControlFrame frame;
        frame.opcode = Opcode::kTableRead;
        frame.target = kTargetOpi;
        BitWriter w(frame.payload.data(), 128);
        w.append(1, 1);
        w.append(index, 32);
        const ControlFrame reply = host_.submit(frame);
        if (reply.opcode != Opcode::kReadReply) break;
        BitReader r(reply.payload.data(), 128);
        const std::uint64_t vid = r.take(12);
        const std::uint64_t dev = r.take(8);
        const std::uint64_t act = r.take(4);
        const std::uint64_t mask = r.take(kTotalLanes);
        out_ << "egress," << vid << "," << dev << ",";
        if (act == kPayloadActForward) {
            out_ << "forward,";
            bool first = true;
            for (std::uint8_t lane : lanes_of_mask(mask)) {
                out_ << (first ? "" : ";") << static_cast<int>(lane);
                first = false;
            }
            out_ << "\n";
        } else {
            out_ << "drop,-\n";
        }
    }
}

void CliSession::dump_table(std::uint8_t slot, const PipelineSpec& spec,
                            int table_id) {
    const MatchActionStage& stage = spec.stages[static_cast<std::size_t>(table_id)];
    for (std::uint32_t index = 0;; ++index) {
        ControlFrame frame;
        frame.opcode = Opcode::kTableRead;
        frame.target = slot;
        frame.resource_id = static_cast<std::uint8_t>(table_id);
        BitWriter w(frame.payload.data(), 128);
        w.append(1, 1);
        w.append(index, 32);
        const ControlFrame reply = host_.submit(frame);
        if (reply.opcode != Opcode::kReadReply) break;
        BitReader r(reply.payload.data(), 128);
        MatchEntry entry;
        unpack_entry_fields(r, spec, stage, &entry);
        const std::uint8_t act = static_cast<std::uint8_t>(r.take(4));
        const std::uint16_t arg = static_cast<std::uint16_t>(r.take(16));

        out_ << stage.table_name;
        for (std::size_t i = 0; i < entry.key.size(); ++i) {
            out_ << "," << entry.key[i];
            if (stage.match_kind == MatchKind::kLpm) {
                out_ << "/" << static_cast<int>(entry.prefix_len);
            } else if (stage.match_kind == MatchKind::kTernary) {
                out_ << "&" << entry.masks[i];
            }
        }
        if (stage.match_kind == MatchKind::kTernary) {
            out_ << "," << entry.priority;
        }
        if (act == kPayloadActForward) {
            if (arg == kPayloadArgBroadcast) {
                out_ << ",forward,bcast\n";
            } else {
                out_ << ",forward," << arg << "\n";
            }
        } else {
            out_ << ",drop,-\n";
        }
    }
}

std::uint64_t CliSession::read_counter(std::uint8_t target, std::uint8_t reg,
                                       bool* ok) {
    ControlFrame frame;
    frame.opcode = Opcode::kRegRead;
    frame.target = target;
    frame.resource_id = reg;
    const ControlFrame reply = host_.submit(frame);
    if (reply.opcode != Opcode::kReadReply) {
        *ok = false;
        return 0;
    }
    *ok = true;
    BitReader r(reply.payload.data(), 128);
    return r.take(64);
}

void CliSession::cmd_stats() {
    bool ok = true;
    out_ << "ipi.forwarded " << read_counter(kTargetIpi, 0, &ok) << "\n";
    for (int d = 0; d < kDropReasonCount; ++d) {
        const std::uint64_t n =
            read_counter(kTargetIpi, static_cast<std::uint8_t>(1 + d), &ok);
        out_ << "ipi.drop." << to_string(static_cast<DropReason>(d)) << " " << n
             << "\n";
    }
    out_ << "opi.delivered " << read_counter(kTargetOpi, 0, &ok) << "\n";
    for (int d = 0; d < kDropReasonCount; ++d) {
        const std::uint64_t n =
            read_counter(kTargetOpi, static_cast<std::uint8_t>(1 + d), &ok);
        out_ << "opi.drop." << to_string(static_cast<DropReason>(d)) << " " << n
             << "\n";
    }
    for (int slot = 0; slot < kMaxSlots; ++slot) {
        if (host_.slot_spec(slot) == nullptr) continue;
        const std::uint64_t processed = read_counter(
            static_cast<std::uint8_t>(slot), kRegPacketsProcessed, &ok);
        const std::uint64_t emitted = read_counter(
            static_cast<std::uint8_t>(slot), kRegPacketsEmitted, &ok);
        if (!ok) continue;
        out_ << "vs" << slot << ".processed " << processed << "\n";
        out_ << "vs" << slot << ".emitted " << emitted << "\n";
    }
}

}  // namespace

void cli_session(std::istream& in, std::ostream& out, ShellHost& host) {
    std::string line;
    CliSession session(out, host);
    while (std::getline(in, line)) {
        if (!session.handle(line)) break;
    }
}

}  // namespace vswsim
