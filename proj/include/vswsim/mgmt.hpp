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
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "vswsim/pipeline.hpp"
#include "vswsim/steering.hpp"

namespace vswsim {

// One management frame on the wire: 146 bits, MSB-first, packed into 19
// bytes with the trailing 6 bits zero.
using Word146 = std::array<std::uint8_t, 19>;
constexpr int kControlFrameBits = 146;

enum class Opcode : std::uint8_t {
    kTableWrite = 1,
    kTableRead = 2,
    kRegWrite = 3,
    kRegRead = 4,
    kReadReply = 5,
    kAck = 6,
    kNack = 7,
};

constexpr std::uint8_t kTargetIpi = 62;
constexpr std::uint8_t kTargetOpi = 63;

struct ControlFrame {
    Opcode opcode = Opcode::kAck;
    std::uint8_t target = 0;       // 0..25 slots, 62 IPI, 63 OPI
    std::uint8_t resource_id = 0;  // table or register index
    std::array<std::uint8_t, 16> payload{};  // 128 bits, MSB-first

    bool operator==(const ControlFrame&) const = default;
};

struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// Layout: opcode(4) | target(6) | resource_id(8) | payload(128).
Word146 encode(const ControlFrame& frame);
// Throws ProtocolError on reserved opcodes, unknown targets, or nonzero
// padding bits.
ControlFrame decode(const Word146& word);

// MSB-first bit packing over a byte buffer.
class BitWriter {
  public:
    BitWriter(std::uint8_t* data, std::size_t size_bits)
        : data_(data), size_bits_(size_bits) {}
    void append(std::uint64_t value, std::uint32_t bits);
    std::size_t written_bits() const { return cursor_; }

  private:
    std::uint8_t* data_;
    std::size_t size_bits_;
    std::size_t cursor_ = 0;
};

class BitReader {
  public:
    BitReader(const std::uint8_t* data, std::size_t size_bits)
        : data_(data), size_bits_(size_bits) {}
    std::uint64_t take(std::uint32_t bits);
    std::size_t consumed_bits() const { return cursor_; }

  private:
    const std::uint8_t* data_;
    std::size_t size_bits_;
    std::size_t cursor_ = 0;
};

enum class NackReason : std::uint8_t {
    kNoDevice = 1,
    kRejected = 2,
    kBadAddress = 3,
    kTableFull = 4,
    kProtocol = 5,
    kBusy = 6,
    kAbsent = 7,
};

std::string to_string(NackReason reason);

// Action encoding inside table payloads.
constexpr std::uint8_t kPayloadActDrop = 0;
constexpr std::uint8_t kPayloadActForward = 1;
constexpr std::uint8_t kPayloadActDelete = 2;
constexpr std::uint16_t kPayloadArgBroadcast = 0xffff;

// Register map exposed by dispatch on slot targets. Indices below
// kVsRegisterCount are the instance's read/write registers; the rest are
// read-only synthetic counters.
constexpr std::uint8_t kRegTableCountersBase = 128;  // hits 128+2t, misses 129+2t
constexpr std::uint8_t kRegPacketsProcessed = 240;
constexpr std::uint8_t kRegPacketsEmitted = 241;

// Interface (IPI/OPI) register map: 0 = forwarded/delivered, 1+r = drops
// counted under DropReason r.
struct InterfaceCounters {
    std::uint64_t forwarded = 0;
    std::array<std::uint64_t, kDropReasonCount> drops{};
};

// What dispatch needs from the engine. Mutations take effect at the
// engine's current event time.
class ControlPlane {
  public:
    virtual ~ControlPlane() = default;
    virtual SteeringTables& steering() = 0;
    virtual VsInstance* slot_instance(int slot) = 0;
    virtual bool slot_reconfiguring(int slot) const = 0;
    virtual const InterfaceCounters& ipi_counters() const = 0;
    virtual const InterfaceCounters& opi_counters() const = 0;
};

// Routes one inbound frame and produces the reply for the target's
// outbound channel.
ControlFrame dispatch(const ControlFrame& frame, ControlPlane& system);

ControlFrame make_ack(const ControlFrame& request);
ControlFrame make_nack(const ControlFrame& request, NackReason reason);

// Operator-facing host: the CLI stays a pure frame client for table and
// register traffic; deployment and time control are engine lifecycle calls.
class ShellHost {
  public:
    virtual ~ShellHost() = default;
    virtual ControlFrame submit(const ControlFrame& frame) = 0;
    virtual bool deploy(int slot, const std::string& spec_name,
                        std::string* error) = 0;
    virtual bool undeploy(int slot, std::string* error) = 0;
    virtual void advance(SimTime duration) = 0;
    virtual SimTime now() const = 0;
    virtual const PipelineSpec* slot_spec(int slot) const = 0;
};

// Reads commands line by line and writes one reply block per command.
// Unparseable lines print a usage message and emit no frame.
void cli_session(std::istream& in, std::ostream& out, ShellHost& host);

// Payload packing shared by dispatch and the CLI (also used in tests).
ControlFrame pack_ingress_write(std::uint8_t lane, std::uint16_t vid,
                                std::uint8_t act, std::uint8_t device);
ControlFrame pack_egress_write(std::uint16_t vid, std::uint8_t device,
                               std::uint8_t act, std::uint64_t lane_mask);
ControlFrame pack_table_write(std::uint8_t slot, const PipelineSpec& spec,
                              int table_id, const MatchEntry& entry,
                              std::uint8_t act);

}  // namespace vswsim
