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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vswsim/core.hpp"

namespace vswsim {

// Synthesis footprint of one pipeline on the FPGA fabric.
struct ResourceFootprint {
    std::uint64_t luts = 0;
    std::uint64_t ffs = 0;
    std::uint32_t brams = 0;
};

// One fixed-width big-endian field pulled out of a header.
struct ExtractRule {
    std::string field;
    std::uint32_t offset = 0;  // bytes from header start
    std::uint32_t width = 0;   // bytes, at most 8
};

// One parser node: extract fields, then optionally dispatch on one of them.
// An empty dispatch_field (or an unmatched value) ends parsing.
struct HeaderRule {
    std::string name;
    std::uint32_t length = 0;  // bytes consumed by this header
    std::vector<ExtractRule> extracts;
    std::string dispatch_field;
    std::map<std::uint64_t, std::string> transitions;
};

// Where an action parameter's value comes from. Immediate values are fixed
// in the pipeline definition or table entry; the metadata kinds are supplied per packet by
// the engine. Egress timestamps are not known while the packet is being
// processed, so they surface as pending writes the engine patches later.
enum class ValueSource {
    kImmediate,
    kDeviceId,
    kIngressTimePs,
    kEgressTimePs,
    kQueueBits,
    kHopCount,
    kIngressPort,
};

struct ValueExpr {
    ValueSource source = ValueSource::kImmediate;
    std::uint64_t immediate = 0;
};

enum class ActionKind {
    kForward,
    kDrop,
    kSetField,
    kLearn,
    kPushHeader,
    kAddToField,
    kNoOp,
};

// Requested egress for one output packet: a single port or a broadcast
// that the output interface expands against its authorization table.
struct EgressMeta {
    bool broadcast = false;
    std::uint32_t port = 0;
};

struct SubField {
    std::string name;
    std::uint32_t offset = 0;  // bytes from the inserted header's start
    std::uint32_t width = 0;   // bytes
};

// Bytes inserted at the current parse cursor, with named subfields and
// their initial values.
struct PushHeaderSpec {
    std::string header_name;
    std::uint32_t length = 0;
    std::vector<SubField> fields;
    std::vector<std::pair<std::string, ValueExpr>> inits;
};

struct ActionSpec {
    ActionKind kind = ActionKind::kNoOp;
    // forward
    std::uint32_t port = 0;
    bool broadcast = false;
    // set_field / add_to_field
    std::string field;
    ValueExpr value;
    std::int64_t delta = 0;
    // learn
    std::string learn_table;
    std::vector<std::string> learn_key_fields;
    ValueExpr learn_value;
    // push_header
    PushHeaderSpec push;
};

ActionSpec make_forward(std::uint32_t port);
ActionSpec make_broadcast();
ActionSpec make_drop();

enum class MatchKind { kExact, kLpm, kTernary };

// One table entry as written by the control plane. Exact entries use key
// only; lpm adds prefix_len over a single key field; ternary adds per-field
// masks and a priority (lower value wins, duplicates rejected).
struct MatchEntry {
    std::vector<std::uint64_t> key;
    std::uint8_t prefix_len = 0;
    std::vector<std::uint64_t> masks;
    std::uint16_t priority = 0;
    ActionSpec action;
};

struct MatchActionStage {
    std::uint8_t table_id = 0;
    std::string table_name;
    MatchKind match_kind = MatchKind::kExact;
    std::vector<std::string> key_fields;
    std::size_t capacity = 1024;
    ActionSpec default_action;
};

struct PipelineSpec {
    std::string name;
    std::vector<HeaderRule> parser;
    std::vector<MatchActionStage> stages;
    std::vector<std::string> deparser;  // field names written back to the frame
    ResourceFootprint footprint;
    double rate_gbps = 0.0;
    int latency_cycles = 1;
    std::uint32_t headroom_bytes = 64;

    // Bit width of a named field, from parser extracts and pushed headers.
    // Zero when the name is unknown.
    std::uint32_t field_width_bits(const std::string& field) const;
    // Total key width of one stage in bits.
    std::uint32_t key_width_bits(const MatchActionStage& stage) const;
    const MatchActionStage* stage_by_name(const std::string& table_name) const;
    int stage_index(const std::string& table_name) const;

    // Structural checks from the type invariants; throws std::invalid_argument.
    void validate() const;
};

// Binary trie keyed on one big-endian field, most significant bit first.
class LpmTrie {
  public:
    explicit LpmTrie(std::uint32_t key_bits) : key_bits_(key_bits) {}

    void insert(std::uint64_t key, std::uint8_t prefix_len, ActionSpec action);
    bool erase(std::uint64_t key, std::uint8_t prefix_len);
    const ActionSpec* lookup_longest(std::uint64_t key) const;
    std::uint32_t key_bits() const { return key_bits_; }

  private:
    struct Node {
        std::unique_ptr<Node> child[2];
        bool terminal = false;
        ActionSpec action;
    };

    Node root_;
    std::uint32_t key_bits_;
};

// Live contents of one stage's table. Exact entries live in an ordered map
// so dumps are deterministic; lpm keeps a mirror map alongside the trie for
// the same reason; ternary entries stay sorted by priority.
class TableState {
  public:
    TableState(const MatchActionStage& stage, std::uint32_t key_bits);

    // Insert or overwrite. Rejects (returning false) on capacity exhaustion
    // for new keys and on duplicate ternary priority under a different key.
    bool write(const MatchEntry& entry);
    bool erase(const MatchEntry& entry);  // keyed fields only
    const MatchEntry* read(const MatchEntry& probe) const;
    const MatchEntry* read_by_index(std::size_t index) const;
    std::size_t size() const { return entries_.size(); }

    // Longest-prefix / first-priority / exact lookup against packet keys.
    const ActionSpec* lookup(const std::vector<std::uint64_t>& key) const;

    std::uint64_t hits = 0;
    std::uint64_t misses = 0;

  private:
    MatchEntry canonical(const MatchEntry& entry) const;
    bool same_slot(const MatchEntry& a, const MatchEntry& b) const;
    void sort_entries();

    MatchKind kind_;
    std::size_t key_field_count_;
    std::size_t capacity_;
    // Ordered by (key, prefix) for lpm, by key for exact, by priority for
    // ternary; read_by_index and dumps walk this vector.
    std::vector<MatchEntry> entries_;
    std::optional<LpmTrie> trie_;
};

// Per-packet metadata handed in by the engine.
struct ProcessContext {
    SimTime ingress_time_ps = 0;
    std::uint64_t queue_bits = 0;
    std::uint32_t ingress_port = 0;
};

// A frame byte range whose value is only known after service completes.
struct PendingWrite {
    std::size_t offset = 0;
    std::uint32_t width = 0;  // bytes
    ValueSource source = ValueSource::kEgressTimePs;
};

struct ProcessOutput {
    Packet pkt;
    EgressMeta meta;
    std::vector<PendingWrite> pending;
};

struct ProcessResult {
    std::optional<DropReason> drop;
    std::vector<ProcessOutput> outputs;
};

constexpr std::size_t kVsRegisterCount = 16;

// One deployed virtual switch: spec, private tables, registers, counters.
// Instances never share storage.
class VsInstance {
  public:
    VsInstance(PipelineSpec spec, DeviceId device_id);

    const PipelineSpec& spec() const { return spec_; }
    DeviceId device_id() const { return device_id_; }

    ProcessResult process_packet(const Packet& pkt, const ProcessContext& ctx);

    // Control-plane table access by stage index. write/erase return false
    // on rejection (unknown id is a hard error and throws).
    bool table_write(int table_id, const MatchEntry& entry);
    bool table_erase(int table_id, const MatchEntry& entry);
    const MatchEntry* table_read(int table_id, const MatchEntry& probe) const;
    const MatchEntry* table_read_by_index(int table_id, std::size_t index) const;
    const TableState& table(int table_id) const;
    TableState& table(int table_id);
    int table_count() const { return static_cast<int>(tables_.size()); }

    std::array<std::uint64_t, kVsRegisterCount> registers{};
    std::uint64_t packets_processed = 0;
    std::uint64_t packets_emitted = 0;

  private:
    struct Parsed;
    bool parse(const Packet& pkt, Parsed* out) const;

    PipelineSpec spec_;
    DeviceId device_id_;
    std::vector<TableState> tables_;
};

// The four case-study pipelines with their measured footprints and rates.
const std::map<std::string, PipelineSpec>& builtin_specs();

}  // namespace vswsim
