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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "vswsim/fabric.hpp"
#include "vswsim/mgmt.hpp"
#include "vswsim/pipeline.hpp"
#include "vswsim/reconfig.hpp"
#include "vswsim/scenario.hpp"
#include "vswsim/steering.hpp"

namespace vswsim {

enum class EventKind {
    kPacketArrival,
    kFifoService,
    kPipelineComplete,
    kControlFrame,
    kReconfigDone,
    kMeasurementTick,
    kEndOfRun,
};

const char* to_string(EventKind kind);

struct LaneMetrics {
    std::uint64_t injected = 0;
    std::uint64_t injected_bytes = 0;
    std::uint64_t delivered = 0;
    std::uint64_t delivered_bytes = 0;
    std::uint64_t window_rx_bits = 0;
    std::uint64_t window_tx_bits = 0;
    std::array<std::uint64_t, kDropReasonCount> drops{};
};

struct SlotMetrics {
    std::uint64_t processed = 0;
    std::uint64_t emitted = 0;
    std::uint64_t window_out_bits = 0;
    std::array<std::uint64_t, kDropReasonCount> drops{};
    // Arrival-to-delivery times of packets that traversed this slot.
    std::vector<SimTime> latencies_ps;
};

struct LatencySummary {
    SimTime min_ps = 0;
    double mean_ps = 0.0;
    SimTime p99_ps = 0;
    std::uint64_t count = 0;
};

LatencySummary summarize_latency(std::vector<SimTime> samples);

// Whole-run packet accounting. A run conserves packets exactly:
// injected + duplicated == delivered + dropped + in_flight.
struct Totals {
    std::uint64_t injected = 0;
    std::uint64_t injected_bytes = 0;
    std::uint64_t delivered = 0;
    std::uint64_t delivered_bytes = 0;
    std::uint64_t duplicated = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
    std::array<std::uint64_t, kDropReasonCount> drops{};

    bool conserved() const {
        return injected + duplicated == delivered + dropped + in_flight;
    }
};

struct HopTrace {
    std::string label;
    SimTime at_ps = 0;
};

// Deterministic discrete-event simulator of the whole platform: lane
// generators, IPI/OPI arbitration, slot pipelines, loopback, TX drain,
// management channel, and reconfiguration. Events with equal timestamps
// process in scheduling order, so two runs of the same scenario produce
// byte-identical metrics.
class Engine : public ControlPlane, public ShellHost {
  public:
    explicit Engine(Scenario scenario);

    // Runs to the scenario duration, then drains in-flight packets.
    void run();

    // ControlPlane.
    SteeringTables& steering() override { return steering_; }
    VsInstance* slot_instance(int slot) override;
    bool slot_reconfiguring(int slot) const override;
    const InterfaceCounters& ipi_counters() const override { return ipi_counters_; }
    const InterfaceCounters& opi_counters() const override { return opi_counters_; }

    // ShellHost.
    ControlFrame submit(const ControlFrame& frame) override;
    bool deploy(int slot, const std::string& spec_name, std::string* error) override;
    bool undeploy(int slot, std::string* error) override;
    void advance(SimTime duration) override;
    SimTime now() const override { return now_; }
    const PipelineSpec* slot_spec(int slot) const override;

    // Reconfiguration entry points; failures return the reason untouched.
    ReconfigCheck full_reconfigure(const std::map<int, std::string>& deployments);
    ReconfigCheck partial_reconfigure(int slot, const std::string& spec_name);

    SlotStatus slot_status(int slot) const;
    const Scenario& scenario() const { return scenario_; }
    const Totals& totals() const { return totals_; }
    const LaneMetrics& lane_metrics(int lane) const { return lanes_.at(lane); }
    const SlotMetrics& slot_metrics(int slot) const { return slot_metrics_.at(slot); }
    const Fifo* find_fifo(const std::string& fifo_id) const;

    std::string metrics_csv() const;
    std::string summary_text() const;
    std::map<int, LatencySummary> measure_latency() const;

    // Observability. Hooks fire in event order; they must not mutate state.
    std::function<void(int slot, const Packet&)> on_slot_ingress;
    std::function<void(int lane, const Packet&)> on_delivery;
    std::function<void(SimTime, EventKind, const std::string&)> on_event;

    // Per-packet service timestamps, recorded when enabled before run().
    struct SlotTiming {
        int slot = -1;
        SimTime vs_start = 0;
        SimTime vs_end = 0;
        std::uint64_t queue_bits = 0;
    };
    bool record_timings = false;
    const std::map<std::uint64_t, SlotTiming>& timings() const { return timings_; }

    // Hop-by-hop timeline of the first injected packet.
    bool trace_first_packet = false;
    const std::vector<HopTrace>& first_packet_trace() const { return trace_; }

  private:
    struct Event {
        SimTime t = 0;
        std::uint64_t seq = 0;
        EventKind kind = EventKind::kFifoService;
        int a = 0;
        int b = 0;
        bool operator>(const Event& other) const {
            return t != other.t ? t > other.t : seq > other.seq;
        }
    };

    struct OutPacket {
        Packet pkt;
        EgressMetaView meta;
        std::vector<PendingWrite> pending;
    };

    struct SlotState {
        SlotStatus status = SlotStatus::kEmpty;
        std::unique_ptr<VsInstance> instance;
        std::unique_ptr<PacketQueue<Packet>> in;
        std::unique_ptr<PacketQueue<OutPacket>> out;
        double rate_scale = 1.0;
        SimTime busy_until = 0;
        SimTime reconfig_done_at = 0;
        int service_epoch = 0;
        std::optional<OutPacket> current;
        // Output stalled on a full vS->OPI queue; the slot halts until placed.
        std::optional<OutPacket> stalled;
        std::string pending_spec;
    };

    struct FlowState {
        const TrafficProfile* profile = nullptr;
        SimTime next_ready = 0;
        SimTime stop_at = 0;
        std::uint64_t index = 0;
        Rng rng{0};
    };

    struct LaneGen {
        std::vector<FlowState> flows;
        SimTime free_at = 0;
        bool staged = false;
        Packet staged_pkt;
    };

    void push_event(SimTime t, EventKind kind, int a = 0, int b = 0);
    void process_until(SimTime end, bool drain);
    void handle(const Event& ev);

    void stage_next_emission(int lane);
    void handle_arrival(int lane);
    Packet build_frame(FlowState& flow, SimTime arrival, int lane);

    void schedule_ipi(SimTime visible_at);
    void schedule_opi(SimTime visible_at);
    void ipi_sweep(SimTime t);
    void opi_sweep(SimTime t);
    void slot_intake(int slot, SimTime t);
    void pipeline_complete(int slot, int epoch, SimTime t);
    void place_output(int slot, OutPacket&& out, SimTime t);
    void tx_check(int lane, SimTime t);
    void tx_complete(int lane, SimTime t);

    void count_drop(DropReason reason);
    void clear_slot_packets(int slot);
    void instantiate(int slot, const std::string& spec_name, double rate_scale);
    void apply_schedule_entry(int index, SimTime t);
    void trace(const char* label, SimTime t, std::uint64_t pkt_id);

    std::uint64_t window_ns() const;  // width of the measurement window
    bool in_window(SimTime t) const {
        return t >= window_start_ && t < scenario_.duration_ps;
    }

    Scenario scenario_;
    SteeringTables steering_;
    std::array<SlotState, kMaxSlots> slots_;
    std::array<std::unique_ptr<PacketQueue<Packet>>, kTotalLanes> rx_;
    std::array<std::unique_ptr<PacketQueue<Packet>>, kTotalLanes> tx_;
    std::array<bool, kTotalLanes> tx_busy_{};
    std::vector<LaneGen> gens_;

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0;
    SimTime window_start_ = 0;
    bool ipi_scheduled_ = false;
    bool opi_scheduled_ = false;
    int opi_ptr_ = 0;
    SimTime ctrl_free_at_ = 0;
    std::uint64_t next_packet_id_ = 0;

    InterfaceCounters ipi_counters_;
    InterfaceCounters opi_counters_;
    Totals totals_;
    std::array<LaneMetrics, kTotalLanes> lanes_;
    std::array<SlotMetrics, kMaxSlots> slot_metrics_;
    std::map<std::uint64_t, SlotTiming> timings_;
    std::vector<HopTrace> trace_;
};

}  // namespace vswsim
