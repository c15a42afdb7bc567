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

#include "vswsim/pipeline.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace vswsim {

namespace {

std::uint64_t width_mask(std::uint32_t width_bytes) {
    if (width_bytes >= 8) return ~0ull;
    return (1ull << (8 * width_bytes)) - 1;
}

std::uint64_t read_be(const std::vector<std::uint8_t>& frame, std::size_t offset,
                      std::uint32_t width) {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < width; ++i) {
        v = (v << 8) | frame[offset + i];
    }
    return v;
}

void write_be(std::vector<std::uint8_t>& frame, std::size_t offset,
              std::uint32_t width, std::uint64_t value) {
    for (std::uint32_t i = 0; i < width; ++i) {
        frame[offset + i] =
            static_cast<std::uint8_t>(value >> (8 * (width - 1 - i)));
    }
}

std::uint64_t prefix_mask(std::uint8_t prefix_len, std::uint32_t key_bits) {
    if (prefix_len == 0) return 0;
    const std::uint64_t all = key_bits >= 64 ? ~0ull : ((1ull << key_bits) - 1);
    return all & ~((key_bits - prefix_len) >= 64
                       ? ~0ull
                       : ((1ull << (key_bits - prefix_len)) - 1));
}

}  // namespace

ActionSpec make_forward(std::uint32_t port) {
    ActionSpec a;
    a.kind = ActionKind::kForward;
    a.port = port;
    return a;
}

ActionSpec make_broadcast() {
    ActionSpec a;
    a.kind = ActionKind::kForward;
    a.broadcast = true;
    return a;
}

ActionSpec make_drop() {
    ActionSpec a;
    a.kind = ActionKind::kDrop;
    return a;
}

std::uint32_t PipelineSpec::field_width_bits(const std::string& field) const {
    for (const HeaderRule& h : parser) {
        for (const ExtractRule& e : h.extracts) {
            if (e.field == field) return 8 * e.width;
        }
    }
    for (const MatchActionStage& s : stages) {
        if (s.default_action.kind != ActionKind::kPushHeader) continue;
        for (const SubField& f : s.default_action.push.fields) {
            if (f.name == field) return 8 * f.width;
        }
    }
    return 0;
}

std::uint32_t PipelineSpec::key_width_bits(const MatchActionStage& stage) const {
    std::uint32_t bits = 0;
    for (const std::string& f : stage.key_fields) {
        bits += field_width_bits(f);
    }
    return bits;
}

const MatchActionStage* PipelineSpec::stage_by_name(
    const std::string& table_name) const {
    for (const MatchActionStage& s : stages) {
        if (s.table_name == table_name) return &s;
    }
    return nullptr;
}

int PipelineSpec::stage_index(const std::string& table_name) const {
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (stages[i].table_name == table_name) return static_cast<int>(i);
    }
    return -1;
}

void PipelineSpec::validate() const {
    if (stages.empty()) {
        throw std::invalid_argument("pipeline '" + name + "' has no stages");
    }
    if (rate_gbps <= 0.0) {
        throw std::invalid_argument("pipeline '" + name + "' needs rate_gbps > 0");
    }
    if (latency_cycles < 1) {
        throw std::invalid_argument("pipeline '" + name + "' needs latency_cycles >= 1");
    }
    for (const HeaderRule& h : parser) {
        for (const ExtractRule& e : h.extracts) {
            if (e.width == 0 || e.width > 8) {
                throw std::invalid_argument("field '" + e.field +
                                            "' must be 1..8 bytes wide");
            }
            if (e.offset + e.width > h.length) {
                throw std::invalid_argument("field '" + e.field +
                                            "' overruns header '" + h.name + "'");
            }
        }
    }
    for (const MatchActionStage& s : stages) {
        for (const std::string& f : s.key_fields) {
            if (field_width_bits(f) == 0) {
                throw std::invalid_argument("stage '" + s.table_name +
                                            "' keys on unknown field '" + f + "'");
            }
        }
        if (s.match_kind == MatchKind::kLpm && s.key_fields.size() != 1) {
            throw std::invalid_argument("lpm stage '" + s.table_name +
                                        "' must key on exactly one field");
        }
    }
}

void LpmTrie::insert(std::uint64_t key, std::uint8_t prefix_len, ActionSpec action) {
    if (prefix_len > key_bits_) {
        throw std::invalid_argument("prefix length exceeds key width");
    }
    Node* n = &root_;
    for (std::uint8_t i = 0; i < prefix_len; ++i) {
        const int bit = (key >> (key_bits_ - 1 - i)) & 1;
        if (!n->child[bit]) n->child[bit] = std::make_unique<Node>();
        n = n->child[bit].get();
    }
    n->terminal = true;
    n->action = std::move(action);
}

bool LpmTrie::erase(std::uint64_t key, std::uint8_t prefix_len) {
    Node* n = &root_;
    for (std::uint8_t i = 0; i < prefix_len; ++i) {
        const int bit = (key >> (key_bits_ - 1 - i)) & 1;
        if (!n->child[bit]) return false;
        n = n->child[bit].get();
    }
    if (!n->terminal) return false;
    n->terminal = false;
    return true;
}

const ActionSpec* LpmTrie::lookup_longest(std::uint64_t key) const {
    const Node* n = &root_;
    const ActionSpec* best = n->terminal ? &n->action : nullptr;
    for (std::uint32_t i = 0; i < key_bits_; ++i) {
        const int bit = (key >> (key_bits_ - 1 - i)) & 1;
        n = n->child[bit].get();
        if (!n) break;
        if (n->terminal) best = &n->action;
    }
    return best;
}

TableState::TableState(const MatchActionStage& stage, std::uint32_t key_bits)
    : kind_(stage.match_kind),
      key_field_count_(stage.key_fields.size()),
      capacity_(stage.capacity) {
    if (kind_ == MatchKind::kLpm) {
        trie_.emplace(key_bits);
    }
}

MatchEntry TableState::canonical(const MatchEntry& entry) const {
    MatchEntry e = entry;
    if (kind_ == MatchKind::kLpm) {
        e.key[0] &= prefix_mask(e.prefix_len, trie_->key_bits());
    } else if (kind_ == MatchKind::kTernary) {
        if (e.masks.size() != e.key.size()) {
            throw std::invalid_argument("ternary entry needs one mask per key field");
        }
        for (std::size_t i = 0; i < e.key.size(); ++i) {
            e.key[i] &= e.masks[i];
        }
    }
    return e;
}

bool TableState::same_slot(const MatchEntry& a, const MatchEntry& b) const {
    switch (kind_) {
        case MatchKind::kExact:
            return a.key == b.key;
        case MatchKind::kLpm:
            return a.key == b.key && a.prefix_len == b.prefix_len;
        case MatchKind::kTernary:
            return a.key == b.key && a.masks == b.masks;
    }
    return false;
}

bool TableState::write(const MatchEntry& entry) {
    if (entry.key.size() != key_field_count_) {
        throw std::invalid_argument("table key shape mismatch");
    }
    const MatchEntry e = canonical(entry);
    for (MatchEntry& existing : entries_) {
        if (same_slot(existing, e)) {
            if (kind_ == MatchKind::kTernary && existing.priority != e.priority) {
                // Re-prioritizing is a delete + add, not an overwrite.
                return false;
            }
            existing = e;
            if (kind_ == MatchKind::kLpm) {
                trie_->insert(e.key[0], e.prefix_len, e.action);
            }
            return true;
        }
    }
    if (kind_ == MatchKind::kTernary) {
        for (const MatchEntry& existing : entries_) {
            if (existing.priority == e.priority) return false;
        }
    }
    if (entries_.size() >= capacity_) return false;
    entries_.push_back(e);
    sort_entries();
    if (kind_ == MatchKind::kLpm) {
        trie_->insert(e.key[0], e.prefix_len, e.action);
    }
    return true;
}

bool TableState::erase(const MatchEntry& entry) {
    if (entry.key.size() != key_field_count_) {
        throw std::invalid_argument("table key shape mismatch");
    }
    const MatchEntry e = canonical(entry);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (same_slot(entries_[i], e)) {
            if (kind_ == MatchKind::kLpm) {
                trie_->erase(e.key[0], e.prefix_len);
            }
            entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i));
            return true;
        }
    }
    return false;
}

const MatchEntry* TableState::read(const MatchEntry& probe) const {
    if (probe.key.size() != key_field_count_) {
        throw std::invalid_argument("table key shape mismatch");
    }
    const MatchEntry e = canonical(probe);
    for (const MatchEntry& existing : entries_) {
        if (same_slot(existing, e)) return &existing;
    }
    return nullptr;
}

const MatchEntry* TableState::read_by_index(std::size_t index) const {
    if (index >= entries_.size()) return nullptr;
    return &entries_[index];
}

const ActionSpec* TableState::lookup(const std::vector<std::uint64_t>& key) const {
    switch (kind_) {
        case MatchKind::kExact: {
            for (const MatchEntry& e : entries_) {
                if (e.key == key) return &e.action;
            }
            return nullptr;
        }
        case MatchKind::kLpm:
            return trie_->lookup_longest(key[0]);
        case MatchKind::kTernary: {
            for (const MatchEntry& e : entries_) {
                bool match = true;
                for (std::size_t i = 0; i < key.size(); ++i) {
                    if ((key[i] & e.masks[i]) != e.key[i]) {
                        match = false;
                        break;
                    }
                }
                if (match) return &e.action;
            }
            return nullptr;
        }
    }
    return nullptr;
}

void TableState::sort_entries() {
    switch (kind_) {
        case MatchKind::kExact:
            std::sort(entries_.begin(), entries_.end(),
                      [](const MatchEntry& a, const MatchEntry& b) {
                          return a.key < b.key;
                      });
            break;
        case MatchKind::kLpm:
            std::sort(entries_.begin(), entries_.end(),
                      [](const MatchEntry& a, const MatchEntry& b) {
                          return std::tie(a.key, a.prefix_len) <
                                 std::tie(b.key, b.prefix_len);
                      });
            break;
        case MatchKind::kTernary:
            std::sort(entries_.begin(), entries_.end(),
                      [](const MatchEntry& a, const MatchEntry& b) {
                          return a.priority < b.priority;
                      });
            break;
    }
}

struct VsInstance::Parsed {
    struct Field {
        std::uint64_t value = 0;
        std::size_t offset = 0;
        std::uint32_t width = 0;
    };
    std::map<std::string, Field> fields;
    std::size_t parse_end = 0;
};

VsInstance::VsInstance(PipelineSpec spec, DeviceId device_id)
    : spec_(std::move(spec)), device_id_(device_id) {
    spec_.validate();
    tables_.reserve(spec_.stages.size());
    for (const MatchActionStage& s : spec_.stages) {
        std::uint32_t key_bits = 0;
        if (s.match_kind == MatchKind::kLpm) {
            key_bits = spec_.field_width_bits(s.key_fields[0]);
        }
        tables_.emplace_back(s, key_bits);
    }
}

bool VsInstance::parse(const Packet& pkt, Parsed* out) const {
    if (spec_.parser.empty()) return true;
    const HeaderRule* h = &spec_.parser[0];
    std::size_t cursor = 0;
    while (h != nullptr) {
        if (cursor + h->length > pkt.frame.size()) return false;
        for (const ExtractRule& e : h->extracts) {
            out->fields[e.field] = Parsed::Field{
                read_be(pkt.frame, cursor + e.offset, e.width),
                cursor + e.offset, e.width};
        }
        cursor += h->length;
        out->parse_end = cursor;
        const HeaderRule* next = nullptr;
        if (!h->dispatch_field.empty()) {
            const auto it = out->fields.find(h->dispatch_field);
            if (it != out->fields.end()) {
                const auto t = h->transitions.find(it->second.value);
                if (t != h->transitions.end()) {
                    for (const HeaderRule& cand : spec_.parser) {
                        if (cand.name == t->second) {
                            next = &cand;
                            break;
                        }
                    }
                }
            }
        }
        h = next;
    }
    return true;
}

namespace {

std::uint64_t eval_expr(const ValueExpr& expr, const ProcessContext& ctx,
                        const Packet& pkt, DeviceId device_id) {
    switch (expr.source) {
        case ValueSource::kImmediate:
            return expr.immediate;
        case ValueSource::kDeviceId:
            return device_id.value;
        case ValueSource::kIngressTimePs:
            return static_cast<std::uint64_t>(ctx.ingress_time_ps);
        case ValueSource::kEgressTimePs:
            return 0;  // patched by the engine once service completes
        case ValueSource::kQueueBits:
            return ctx.queue_bits;
        case ValueSource::kHopCount:
            return pkt.hop_count;
        case ValueSource::kIngressPort:
            return ctx.ingress_port;
    }
    return 0;
}

}  // namespace

ProcessResult VsInstance::process_packet(const Packet& pkt,
                                         const ProcessContext& ctx) {
    ++packets_processed;
    ProcessResult result;
    Parsed parsed;
    if (!parse(pkt, &parsed)) {
        result.drop = DropReason::kParseError;
        return result;
    }

    Packet work = pkt;
    EgressMeta meta;
    bool have_meta = false;
    bool dropped = false;
    std::uint32_t pushed_bytes = 0;
    std::vector<PendingWrite> pending;

    for (std::size_t si = 0; si < spec_.stages.size() && !dropped; ++si) {
        const MatchActionStage& stage = spec_.stages[si];
        TableState& table = tables_[si];

        const ActionSpec* act = &stage.default_action;
        if (!stage.key_fields.empty()) {
            std::vector<std::uint64_t> key;
            key.reserve(stage.key_fields.size());
            bool key_complete = true;
            for (const std::string& f : stage.key_fields) {
                const auto it = parsed.fields.find(f);
                if (it == parsed.fields.end()) {
                    key_complete = false;
                    break;
                }
                key.push_back(it->second.value);
            }
            const ActionSpec* hit =
                key_complete ? table.lookup(key) : nullptr;
            if (hit != nullptr) {
                ++table.hits;
                act = hit;
            } else {
                ++table.misses;
            }
        }

        switch (act->kind) {
            case ActionKind::kForward:
                meta.broadcast = act->broadcast;
                meta.port = act->port;
                have_meta = true;
                break;
            case ActionKind::kDrop:
                dropped = true;
                break;
            case ActionKind::kSetField: {
                const auto it = parsed.fields.find(act->field);
                if (it == parsed.fields.end()) {
                    throw std::runtime_error("set_field on unparsed field '" +
                                             act->field + "'");
                }
                it->second.value =
                    eval_expr(act->value, ctx, pkt, device_id_) &
                    width_mask(it->second.width);
                break;
            }
            case ActionKind::kAddToField: {
                const auto it = parsed.fields.find(act->field);
                if (it == parsed.fields.end()) {
                    throw std::runtime_error("add_to_field on unparsed field '" +
                                             act->field + "'");
                }
                it->second.value =
                    (it->second.value + static_cast<std::uint64_t>(act->delta)) &
                    width_mask(it->second.width);
                break;
            }
            case ActionKind::kLearn: {
                const int target = spec_.stage_index(act->learn_table);
                if (target < 0) {
                    throw std::runtime_error("learn targets unknown table '" +
                                             act->learn_table + "'");
                }
                MatchEntry entry;
                bool key_complete = true;
                for (const std::string& f : act->learn_key_fields) {
                    const auto it = parsed.fields.find(f);
                    if (it == parsed.fields.end()) {
                        key_complete = false;
                        break;
                    }
                    entry.key.push_back(it->second.value);
                }
                if (key_complete) {
                    entry.action = make_forward(static_cast<std::uint32_t>(
                        eval_expr(act->learn_value, ctx, pkt, device_id_)));
                    // Full table rejects new keys; existing keys refresh.
                    tables_[static_cast<std::size_t>(target)].write(entry);
                }
                break;
            }
            case ActionKind::kPushHeader: {
                pushed_bytes += act->push.length;
                if (pushed_bytes > spec_.headroom_bytes) {
                    throw std::runtime_error("push_header exceeds headroom in '" +
                                             spec_.name + "'");
                }
                work.frame.insert(
                    work.frame.begin() +
                        static_cast<std::ptrdiff_t>(parsed.parse_end),
                    act->push.length, 0);
                for (const SubField& f : act->push.fields) {
                    parsed.fields[f.name] = Parsed::Field{
                        0, parsed.parse_end + f.offset, f.width};
                }
                for (const auto& [fname, expr] : act->push.inits) {
                    const auto it = parsed.fields.find(fname);
                    if (it == parsed.fields.end()) {
                        throw std::runtime_error("push_header init on unknown field '" +
                                                 fname + "'");
                    }
                    if (expr.source == ValueSource::kEgressTimePs) {
                        pending.push_back(PendingWrite{it->second.offset,
                                                       it->second.width,
                                                       expr.source});
                        continue;
                    }
                    const std::uint64_t v =
                        eval_expr(expr, ctx, pkt, device_id_) &
                        width_mask(it->second.width);
                    it->second.value = v;
                    write_be(work.frame, it->second.offset, it->second.width, v);
                }
                parsed.parse_end += act->push.length;
                break;
            }
            case ActionKind::kNoOp:
                break;
        }
    }

    if (dropped || !have_meta) {
        result.drop = DropReason::kPipelineDrop;
        return result;
    }

    for (const std::string& fname : spec_.deparser) {
        const auto it = parsed.fields.find(fname);
        if (it == parsed.fields.end()) continue;
        write_be(work.frame, it->second.offset, it->second.width,
                 it->second.value);
    }
    work.hop_count = pkt.hop_count + 1;
    work.device_id = device_id_;

    ++packets_emitted;
    result.outputs.push_back(
        ProcessOutput{std::move(work), meta, std::move(pending)});
    return result;
}

bool VsInstance::table_write(int table_id, const MatchEntry& entry) {
    return table(table_id).write(entry);
}

bool VsInstance::table_erase(int table_id, const MatchEntry& entry) {
    return table(table_id).erase(entry);
}

const MatchEntry* VsInstance::table_read(int table_id,
                                         const MatchEntry& probe) const {
    return table(table_id).read(probe);
}

const MatchEntry* VsInstance::table_read_by_index(int table_id,
                                                  std::size_t index) const {
    return table(table_id).read_by_index(index);
}

const TableState& VsInstance::table(int table_id) const {
    if (table_id < 0 || table_id >= table_count()) {
        throw std::out_of_range("no table with id " + std::to_string(table_id));
    }
    return tables_[static_cast<std::size_t>(table_id)];
}

TableState& VsInstance::table(int table_id) {
    if (table_id < 0 || table_id >= table_count()) {
        throw std::out_of_range("no table with id " + std::to_string(table_id));
    }
    return tables_[static_cast<std::size_t>(table_id)];
}

namespace {

HeaderRule eth_vlan_header(bool dispatch_ipv4) {
    HeaderRule h;
    h.name = "eth_vlan";
    h.length = 18;
    h.extracts = {
        ExtractRule{"eth.dst", 0, 6},   ExtractRule{"eth.src", 6, 6},
        ExtractRule{"vlan.tpid", 12, 2}, ExtractRule{"vlan.tci", 14, 2},
        ExtractRule{"eth.type", 16, 2},
    };
    if (dispatch_ipv4) {
        h.dispatch_field = "eth.type";
        h.transitions[0x0800] = "ipv4";
    }
    return h;
}

HeaderRule ipv4_header(bool dispatch_l4) {
    HeaderRule h;
    h.name = "ipv4";
    h.length = 20;
    h.extracts = {
        ExtractRule{"ip.ver_ihl", 0, 1}, ExtractRule{"ip.totlen", 2, 2},
        ExtractRule{"ip.ttl", 8, 1},     ExtractRule{"ip.proto", 9, 1},
        ExtractRule{"ip.src", 12, 4},    ExtractRule{"ip.dst", 16, 4},
    };
    if (dispatch_l4) {
        h.dispatch_field = "ip.proto";
        h.transitions[6] = "tcp";
        h.transitions[17] = "udp";
    }
    return h;
}

HeaderRule tcp_header() {
    HeaderRule h;
    h.name = "tcp";
    h.length = 20;
    h.extracts = {ExtractRule{"l4.sport", 0, 2}, ExtractRule{"l4.dport", 2, 2}};
    return h;
}

HeaderRule udp_header() {
    HeaderRule h;
    h.name = "udp";
    h.length = 8;
    h.extracts = {ExtractRule{"l4.sport", 0, 2}, ExtractRule{"l4.dport", 2, 2}};
    return h;
}

MatchActionStage keyless_stage(std::uint8_t id, std::string name,
                               ActionSpec default_action) {
    MatchActionStage s;
    s.table_id = id;
    s.table_name = std::move(name);
    s.match_kind = MatchKind::kExact;
    s.capacity = 1;
    s.default_action = std::move(default_action);
    return s;
}

PipelineSpec build_l2_switch() {
    PipelineSpec p;
    p.name = "l2_switch";
    p.parser = {eth_vlan_header(false)};

    ActionSpec learn;
    learn.kind = ActionKind::kLearn;
    learn.learn_table = "mac";
    learn.learn_key_fields = {"eth.src"};
    learn.learn_value = ValueExpr{ValueSource::kIngressPort, 0};
    p.stages.push_back(keyless_stage(0, "learn", learn));

    MatchActionStage mac;
    mac.table_id = 1;
    mac.table_name = "mac";
    mac.match_kind = MatchKind::kExact;
    mac.key_fields = {"eth.dst"};
    mac.capacity = 4096;
    mac.default_action = make_broadcast();
    p.stages.push_back(mac);

    p.footprint = ResourceFootprint{27626, 39520, 102};
    p.rate_gbps = 132.63;
    p.latency_cycles = 18;
    return p;
}

PipelineSpec build_firewall() {
    PipelineSpec p;
    p.name = "firewall";
    p.parser = {eth_vlan_header(true), ipv4_header(true), tcp_header(),
                udp_header()};

    MatchActionStage acl;
    acl.table_id = 0;
    acl.table_name = "acl";
    acl.match_kind = MatchKind::kExact;
    acl.key_fields = {"ip.src", "ip.dst", "ip.proto", "l4.sport", "l4.dport"};
    acl.capacity = 1024;
    acl.default_action = make_drop();
    p.stages.push_back(acl);

    p.footprint = ResourceFootprint{48979, 76147, 153};
    p.rate_gbps = 130.92;
    p.latency_cycles = 22;
    return p;
}

PipelineSpec build_router() {
    PipelineSpec p;
    p.name = "router";
    p.parser = {eth_vlan_header(true), ipv4_header(false)};

    MatchActionStage routes;
    routes.table_id = 0;
    routes.table_name = "routes";
    routes.match_kind = MatchKind::kLpm;
    routes.key_fields = {"ip.dst"};
    routes.capacity = 1024;
    routes.default_action = make_drop();
    p.stages.push_back(routes);

    ActionSpec ttl_dec;
    ttl_dec.kind = ActionKind::kAddToField;
    ttl_dec.field = "ip.ttl";
    ttl_dec.delta = -1;
    p.stages.push_back(keyless_stage(1, "ttl", ttl_dec));

    p.deparser = {"ip.ttl"};
    p.footprint = ResourceFootprint{49754, 80915, 185};
    p.rate_gbps = 131.45;
    p.latency_cycles = 24;
    return p;
}

PipelineSpec build_int() {
    PipelineSpec p;
    p.name = "int";
    p.parser = {eth_vlan_header(true), ipv4_header(true), tcp_header(),
                udp_header()};

    MatchActionStage routes;
    routes.table_id = 0;
    routes.table_name = "routes";
    routes.match_kind = MatchKind::kLpm;
    routes.key_fields = {"ip.dst"};
    routes.capacity = 1024;
    routes.default_action = make_drop();
    p.stages.push_back(routes);

    ActionSpec telemetry;
    telemetry.kind = ActionKind::kPushHeader;
    telemetry.push.header_name = "int";
    telemetry.push.length = 32;
    telemetry.push.fields = {
        SubField{"int.device_id", 0, 4},  SubField{"int.ingress_ps", 4, 8},
        SubField{"int.egress_ps", 12, 8}, SubField{"int.queue_bits", 20, 8},
        SubField{"int.hop_count", 28, 4},
    };
    telemetry.push.inits = {
        {"int.device_id", ValueExpr{ValueSource::kDeviceId, 0}},
        {"int.ingress_ps", ValueExpr{ValueSource::kIngressTimePs, 0}},
        {"int.egress_ps", ValueExpr{ValueSource::kEgressTimePs, 0}},
        {"int.queue_bits", ValueExpr{ValueSource::kQueueBits, 0}},
        {"int.hop_count", ValueExpr{ValueSource::kHopCount, 0}},
    };
    p.stages.push_back(keyless_stage(1, "telemetry", telemetry));

    ActionSpec grow;
    grow.kind = ActionKind::kAddToField;
    grow.field = "ip.totlen";
    grow.delta = 32;
    p.stages.push_back(keyless_stage(2, "length", grow));

    p.deparser = {"ip.totlen"};
    p.footprint = ResourceFootprint{77956, 155594, 240};
    p.rate_gbps = 129.61;
    p.latency_cycles = 30;
    return p;
}

}  // namespace

const std::map<std::string, PipelineSpec>& builtin_specs() {
    static const std::map<std::string, PipelineSpec> specs = [] {
        std::map<std::string, PipelineSpec> m;
        m["l2_switch"] = build_l2_switch();
        m["firewall"] = build_firewall();
        m["router"] = build_router();
        m["int"] = build_int();
        for (auto& [name, spec] : m) spec.validate();
        return m;
    }();
    return specs;
}

}  // namespace vswsim
