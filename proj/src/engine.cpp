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

#include "vswsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "vswsim/estimator.hpp"

namespace vswsim {
namespace {

constexpr SimTime kAsicCyclePs = 1000;
constexpr SimTime kTxPsPerBit = 10;  // one bit per 10 ps at 100 Gbps
// Loopback cycles could otherwise circulate forever after the generators stop.
constexpr SimTime kDrainCapPs = 50 * kPsPerMs;

// IPI/OPI arbitration runs on the ASIC clock grid.
SimTime align_up(SimTime t) {
    return (t + kAsicCyclePs - 1) / kAsicCyclePs * kAsicCyclePs;
}

void write_be(std::vector<std::uint8_t>& frame, std::size_t offset, std::uint32_t width,
              std::uint64_t value) {
    for (std::uint32_t i = 0; i < width; ++i) {
        frame[offset + i] =
            static_cast<std::uint8_t>(value >> (8 * (width - 1 - i)));
    }
}

// IPI vs and vS-side subkinds of fifo_service events.
constexpr int kSvcIpi = 0;
constexpr int kSvcOpi = 1;
constexpr int kSvcTxCheck = 2;
constexpr int kSvcIntake = 3;
constexpr int kSvcTxDone = 4;

}  // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::kPacketArrival: return "packet_arrival";
        case EventKind::kFifoService: return "fifo_service";
        case EventKind::kPipelineComplete: return "pipeline_complete";
        case EventKind::kControlFrame: return "control_frame";
        case EventKind::kReconfigDone: return "reconfig_done";
        case EventKind::kMeasurementTick: return "measurement_tick";
        case EventKind::kEndOfRun: return "end_of_run";
    }
    return "unknown";
}

LatencySummary summarize_latency(std::vector<SimTime> samples) {
    LatencySummary s;
    if (samples.empty()) return s;
    std::sort(samples.begin(), samples.end());
    s.count = samples.size();
    s.min_ps = samples.front();
    const double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
    s.mean_ps = sum / static_cast<double>(samples.size());
    std::size_t rank = (samples.size() * 99 + 99) / 100;  // ceil(0.99 n)
    if (rank == 0) rank = 1;
    s.p99_ps = samples[rank - 1];
    return s;
}

Engine::Engine(Scenario scenario) : scenario_(std::move(scenario)) {
    auto errors = scenario_.validate();
    if (!errors.empty()) {
        std::string joined = "invalid scenario:";
        for (const auto& e : errors) joined += "\n  " + e;
        throw std::invalid_argument(joined);
    }

    // The queue inventory is always the full platform's: every slot and lane
    // exists in silicon whether or not the scenario exercises it.
    for (const FifoSpec& spec : build_inventory(kMaxSlots)) {
        if (spec.fifo_id.rfind("vs", 0) == 0 && spec.fifo_id.find("_in") != std::string::npos) {
            int s = std::stoi(spec.fifo_id.substr(2));
            slots_[s].in = std::make_unique<PacketQueue<Packet>>(spec);
        } else if (spec.fifo_id.rfind("vs", 0) == 0 &&
                   spec.fifo_id.find("_out") != std::string::npos) {
            int s = std::stoi(spec.fifo_id.substr(2));
            slots_[s].out = std::make_unique<PacketQueue<OutPacket>>(spec);
        } else if (spec.fifo_id == "vrx") {
            rx_[kVrxLane] = std::make_unique<PacketQueue<Packet>>(spec);
        } else if (spec.fifo_id == "vtx") {
            tx_[kVtxLane] = std::make_unique<PacketQueue<Packet>>(spec);
        } else if (spec.fifo_id.rfind("rx", 0) == 0) {
            rx_[std::stoi(spec.fifo_id.substr(2))] = std::make_unique<PacketQueue<Packet>>(spec);
        } else if (spec.fifo_id.rfind("tx", 0) == 0) {
            tx_[std::stoi(spec.fifo_id.substr(2))] = std::make_unique<PacketQueue<Packet>>(spec);
        }
    }

    for (const auto& [key, action] : scenario_.ingress) {
        steering_.ingress_add(key, action);
    }
    for (const auto& [key, action] : scenario_.egress) {
        steering_.egress_add(key, action);
    }
    for (const auto& [slot, spec_name] : scenario_.deployments) {
        instantiate(slot, spec_name, 1.0);
    }
    for (const auto& seed : scenario_.table_seeds) {
        VsInstance* inst = slots_[seed.slot].instance.get();
        int table_id = inst->spec().stage_index(seed.table);
        if (!inst->table_write(table_id, seed.entry)) {
            throw std::invalid_argument("table seed rejected: slot " +
                                        std::to_string(seed.slot) + " table " + seed.table);
        }
    }

    gens_.resize(scenario_.lanes);
    for (const auto& profile : scenario_.traffic) {
        FlowState flow;
        flow.profile = &profile;
        flow.next_ready = profile.start_ps;
        flow.stop_at = profile.stop_ps < 0
                           ? scenario_.duration_ps
                           : std::min(profile.stop_ps, scenario_.duration_ps);
        flow.rng = Rng(scenario_.seed ^
                       (0x9e3779b97f4a7c15ull *
                        (static_cast<std::uint64_t>(profile.lane) * 4096u + profile.vid + 1)));
        gens_[profile.lane].flows.push_back(flow);
    }

    window_start_ = scenario_.duration_ps / 10;
    push_event(window_start_, EventKind::kMeasurementTick);
    push_event(scenario_.duration_ps, EventKind::kEndOfRun);
    for (std::size_t i = 0; i < scenario_.schedule.size(); ++i) {
        push_event(scenario_.schedule[i].at_ps, EventKind::kControlFrame, static_cast<int>(i));
    }
    for (int lane = 0; lane < scenario_.lanes; ++lane) {
        stage_next_emission(lane);
    }
}

void Engine::push_event(SimTime t, EventKind kind, int a, int b) {
    // Re-checks scheduled against an already-visible head must not move the
    // clock backward.
    if (t < now_) t = now_;
    events_.push(Event{t, next_seq_++, kind, a, b});
}

void Engine::run() {
    process_until(scenario_.duration_ps + kDrainCapPs, true);
}

void Engine::advance(SimTime duration) {
    process_until(now_ + duration, false);
}

void Engine::process_until(SimTime end, bool drain) {
    while (!events_.empty() && events_.top().t <= end) {
        Event ev = events_.top();
        events_.pop();
        now_ = ev.t;
        handle(ev);
    }
    if (!drain) {
        now_ = end;
        return;
    }
    std::uint64_t in_flight = 0;
    for (const auto& q : rx_) {
        if (q) in_flight += q->size();
    }
    for (const auto& q : tx_) {
        if (q) in_flight += q->size();
    }
    for (const auto& slot : slots_) {
        in_flight += slot.in->size() + slot.out->size();
        if (slot.current) ++in_flight;
        if (slot.stalled) ++in_flight;
    }
    totals_.in_flight = in_flight;
}

void Engine::handle(const Event& ev) {
    if (on_event) {
        char detail[64];
        detail[0] = '\0';
        switch (ev.kind) {
            case EventKind::kPacketArrival:
                std::snprintf(detail, sizeof(detail), "lane=%d", ev.a);
                break;
            case EventKind::kFifoService:
                if (ev.b == kSvcIpi) std::snprintf(detail, sizeof(detail), "ipi");
                else if (ev.b == kSvcOpi) std::snprintf(detail, sizeof(detail), "opi");
                else if (ev.b == kSvcTxCheck) std::snprintf(detail, sizeof(detail), "tx lane=%d", ev.a);
                else if (ev.b == kSvcIntake) std::snprintf(detail, sizeof(detail), "vs_in slot=%d", ev.a);
                else std::snprintf(detail, sizeof(detail), "tx_done lane=%d", ev.a);
                break;
            case EventKind::kPipelineComplete:
            case EventKind::kReconfigDone:
                std::snprintf(detail, sizeof(detail), "slot=%d", ev.a);
                break;
            case EventKind::kControlFrame:
                std::snprintf(detail, sizeof(detail), "schedule=%d", ev.a);
                break;
            default:
                break;
        }
        on_event(ev.t, ev.kind, detail);
    }
    switch (ev.kind) {
        case EventKind::kPacketArrival:
            handle_arrival(ev.a);
            break;
        case EventKind::kFifoService:
            if (ev.b == kSvcIpi) ipi_sweep(ev.t);
            else if (ev.b == kSvcOpi) opi_sweep(ev.t);
            else if (ev.b == kSvcTxCheck) tx_check(ev.a, ev.t);
            else if (ev.b == kSvcIntake) slot_intake(ev.a, ev.t);
            else tx_complete(ev.a, ev.t);
            break;
        case EventKind::kPipelineComplete:
            pipeline_complete(ev.a, ev.b, ev.t);
            break;
        case EventKind::kControlFrame:
            apply_schedule_entry(ev.a, ev.t);
            break;
        case EventKind::kReconfigDone: {
            if (ev.a < 0) {
                for (int s = 0; s < kMaxSlots; ++s) {
                    SlotState& slot = slots_[s];
                    if (slot.status != SlotStatus::kReconfiguring ||
                        slot.reconfig_done_at != ev.t) {
                        continue;
                    }
                    if (slot.pending_spec.empty()) {
                        slot.status = SlotStatus::kEmpty;
                    } else {
                        instantiate(s, slot.pending_spec, 1.0);
                    }
                }
            } else {
                SlotState& slot = slots_[ev.a];
                if (slot.status == SlotStatus::kReconfiguring &&
                    slot.reconfig_done_at == ev.t) {
                    if (slot.pending_spec.empty()) {
                        slot.status = SlotStatus::kEmpty;
                    } else {
                        instantiate(ev.a, slot.pending_spec,
                                    scenario_.policy.partial_rate_penalty);
                    }
                }
            }
            break;
        }
        case EventKind::kMeasurementTick:
        case EventKind::kEndOfRun:
            break;
    }
}

Packet Engine::build_frame(FlowState& flow, SimTime arrival, int lane) {
    const TrafficProfile& p = *flow.profile;
    std::uint32_t size = p.size_bytes;
    if (p.size_kind == SizeKind::kUniform) {
        size = static_cast<std::uint32_t>(
            flow.rng.range(p.size_bytes, p.size_max_bytes));
    } else if (p.size_kind == SizeKind::kImix) {
        // Classic 7:4:1 mix of minimum, mid, and near-maximum frames.
        std::uint64_t pick = flow.rng.below(12);
        size = pick < 7 ? 64 : (pick < 11 ? 594 : 1518);
    }
    Packet pkt;
    pkt.rx_lane = static_cast<std::uint8_t>(lane);
    pkt.arrival_time = arrival;
    pkt.frame.assign(size, 0);
    write_be(pkt.frame, 0, 6, p.dst_mac);
    write_be(pkt.frame, 6, 6, p.src_mac);
    write_be(pkt.frame, 12, 2, VlanTag::kTpid);
    write_be(pkt.frame, 14, 2, p.vid);
    write_be(pkt.frame, 16, 2, p.ipv4 ? 0x0800 : 0xffff);
    std::size_t payload_from = 18;
    if (p.ipv4) {
        std::uint32_t dst = p.ip_dst;
        if (!p.ip_dst_cycle.empty()) {
            dst = p.ip_dst_cycle[flow.index % p.ip_dst_cycle.size()];
        }
        pkt.frame[18] = 0x45;
        write_be(pkt.frame, 20, 2, size - 18);
        pkt.frame[26] = 64;  // ttl
        pkt.frame[27] = p.proto;
        write_be(pkt.frame, 30, 4, p.ip_src);
        write_be(pkt.frame, 34, 4, dst);
        write_be(pkt.frame, 38, 2, p.sport);
        write_be(pkt.frame, 40, 2, p.dport);
        payload_from = p.proto == 6 ? 58 : 46;
        if (p.proto == 17 && size >= 46) {
            write_be(pkt.frame, 42, 2, size - 38);  // udp length
        }
    }
    for (std::size_t i = payload_from; i < size; ++i) {
        pkt.frame[i] = static_cast<std::uint8_t>(flow.index * 131 + i);
    }
    return pkt;
}

void Engine::stage_next_emission(int lane) {
    LaneGen& g = gens_[lane];
    if (g.staged) return;
    int best = -1;
    for (std::size_t i = 0; i < g.flows.size(); ++i) {
        FlowState& f = g.flows[i];
        if (f.next_ready >= f.stop_at) continue;
        if (best < 0 || f.next_ready < g.flows[best].next_ready) {
            best = static_cast<int>(i);
        }
    }
    if (best < 0) return;
    FlowState& f = g.flows[best];
    const SimTime start = std::max(f.next_ready, g.free_at);
    Packet pkt = build_frame(f, 0, lane);
    const SimTime completion = start + static_cast<SimTime>(pkt.bits()) * kTxPsPerBit;
    pkt.arrival_time = completion;
    pkt.id = next_packet_id_++;
    // Fluid pacing: the flow's schedule advances by its own period even when
    // the lane serializes late.
    f.next_ready += std::llround(pkt.bits() * 1000.0 / f.profile->rate_gbps);
    f.index++;
    g.free_at = completion;
    g.staged = true;
    g.staged_pkt = std::move(pkt);
    push_event(completion, EventKind::kPacketArrival, lane);
}

void Engine::handle_arrival(int lane) {
    LaneGen& g = gens_[lane];
    g.staged = false;
    Packet pkt = std::move(g.staged_pkt);
    const SimTime t = now_;
    const std::uint64_t bits = pkt.bits();
    totals_.injected++;
    totals_.injected_bytes += pkt.frame.size();
    lanes_[lane].injected++;
    lanes_[lane].injected_bytes += pkt.frame.size();
    if (in_window(t)) lanes_[lane].window_rx_bits += bits;
    trace("phy_arrival", t, pkt.id);
    PacketQueue<Packet>& q = *rx_[lane];
    const std::uint32_t words = q.words_for_bits(bits);
    if (q.can_accept(words)) {
        q.enqueue(std::move(pkt), words, t);
        schedule_ipi(t + 2 * kAsicCyclePs);
    } else {
        q.fifo().record_drop();
        lanes_[lane].drops[static_cast<int>(DropReason::kRxOverflow)]++;
        count_drop(DropReason::kRxOverflow);
    }
    stage_next_emission(lane);
}

void Engine::schedule_ipi(SimTime visible_at) {
    if (ipi_scheduled_) return;
    ipi_scheduled_ = true;
    push_event(align_up(visible_at), EventKind::kFifoService, 0, kSvcIpi);
}

void Engine::schedule_opi(SimTime visible_at) {
    if (opi_scheduled_) return;
    opi_scheduled_ = true;
    push_event(align_up(visible_at), EventKind::kFifoService, 0, kSvcOpi);
}

void Engine::ipi_sweep(SimTime t) {
    ipi_scheduled_ = false;
    for (int lane = 0; lane < kTotalLanes; ++lane) {
        if (!rx_[lane]) continue;
        PacketQueue<Packet>& q = *rx_[lane];
        if (q.visible_head(t) == nullptr) continue;
        Packet pkt = q.pop_head();
        IpiDecision d = ipi_classify(steering_, pkt);
        if (!d.forward) {
            lanes_[lane].drops[static_cast<int>(d.drop)]++;
            ipi_counters_.drops[static_cast<int>(d.drop)]++;
            count_drop(d.drop);
            continue;
        }
        const int s = d.forward->value;
        SlotState& slot = slots_[s];
        if (slot.status != SlotStatus::kActive) {
            lanes_[lane].drops[static_cast<int>(DropReason::kSlotUnavailable)]++;
            slot_metrics_[s].drops[static_cast<int>(DropReason::kSlotUnavailable)]++;
            ipi_counters_.drops[static_cast<int>(DropReason::kSlotUnavailable)]++;
            count_drop(DropReason::kSlotUnavailable);
            continue;
        }
        const std::uint32_t words = slot.in->words_for_bits(pkt.bits());
        if (!slot.in->can_accept(words)) {
            slot.in->fifo().record_drop();
            lanes_[lane].drops[static_cast<int>(DropReason::kSlotBackpressure)]++;
            slot_metrics_[s].drops[static_cast<int>(DropReason::kSlotBackpressure)]++;
            ipi_counters_.drops[static_cast<int>(DropReason::kSlotBackpressure)]++;
            count_drop(DropReason::kSlotBackpressure);
            continue;
        }
        ipi_counters_.forwarded++;
        trace("ipi_move", t, pkt.id);
        if (on_slot_ingress) on_slot_ingress(s, pkt);
        slot.in->enqueue(std::move(pkt), words, t);
        push_event(slot.in->head_visible_at() > t ? slot.in->head_visible_at() : t,
                   EventKind::kFifoService, s, kSvcIntake);
    }
    for (int lane = 0; lane < kTotalLanes; ++lane) {
        if (rx_[lane] && !rx_[lane]->empty()) {
            ipi_scheduled_ = true;
            push_event(t + kAsicCyclePs, EventKind::kFifoService, 0, kSvcIpi);
            break;
        }
    }
}

void Engine::slot_intake(int slot_id, SimTime t) {
    SlotState& slot = slots_[slot_id];
    if (slot.status != SlotStatus::kActive || slot.stalled || slot.busy_until > t) return;
    const Packet* head = slot.in->visible_head(t);
    if (head == nullptr) {
        if (!slot.in->empty()) {
            push_event(slot.in->head_visible_at(), EventKind::kFifoService, slot_id, kSvcIntake);
        }
        return;
    }
    Packet pkt = slot.in->pop_head();
    const std::uint64_t in_bits = pkt.bits();
    const std::uint64_t pkt_id = pkt.id;
    const std::uint64_t queue_bits =
        static_cast<std::uint64_t>(slot.in->fifo().state().occupied_words) *
        slot.in->fifo().spec().width;
    ProcessContext ctx{t, queue_bits, pkt.rx_lane};
    ProcessResult r = slot.instance->process_packet(pkt, ctx);
    const double rate = slot.instance->spec().rate_gbps * slot.rate_scale;
    std::uint64_t out_bits = 0;
    for (const auto& out : r.outputs) out_bits += out.pkt.bits();
    const std::uint64_t service_bits = std::max(in_bits, out_bits);
    SimTime service = std::llround(service_bits * 1000.0 / rate);
    if (service < 1) service = 1;
    slot.busy_until = t + service;
    slot.service_epoch++;
    slot_metrics_[slot_id].processed++;
    trace("vs_start", t, pkt_id);
    if (r.drop || r.outputs.empty()) {
        const DropReason reason = r.drop.value_or(DropReason::kPipelineDrop);
        slot_metrics_[slot_id].drops[static_cast<int>(reason)]++;
        count_drop(reason);
        slot.current.reset();
    } else {
        ProcessOutput& out = r.outputs.front();
        if (record_timings) {
            timings_[out.pkt.id] = SlotTiming{slot_id, t, slot.busy_until, queue_bits};
        }
        slot.current = OutPacket{std::move(out.pkt),
                                 EgressMetaView{out.meta.broadcast, out.meta.port},
                                 std::move(out.pending)};
    }
    push_event(slot.busy_until, EventKind::kPipelineComplete, slot_id, slot.service_epoch);
}

void Engine::pipeline_complete(int slot_id, int epoch, SimTime t) {
    SlotState& slot = slots_[slot_id];
    if (slot.status != SlotStatus::kActive || epoch != slot.service_epoch ||
        slot.busy_until != t) {
        return;
    }
    if (slot.current) {
        OutPacket out = std::move(*slot.current);
        slot.current.reset();
        for (const PendingWrite& w : out.pending) {
            const std::uint64_t value =
                w.source == ValueSource::kEgressTimePs ? static_cast<std::uint64_t>(t) : 0;
            write_be(out.pkt.frame, w.offset, w.width, value);
        }
        trace("vs_complete", t, out.pkt.id);
        place_output(slot_id, std::move(out), t);
    }
    if (!slot.stalled && !slot.in->empty()) {
        push_event(std::max(t, slot.in->head_visible_at()), EventKind::kFifoService, slot_id,
                   kSvcIntake);
    }
}

void Engine::place_output(int slot_id, OutPacket&& out, SimTime t) {
    SlotState& slot = slots_[slot_id];
    slot_metrics_[slot_id].emitted++;
    if (in_window(t)) slot_metrics_[slot_id].window_out_bits += out.pkt.bits();
    const std::uint32_t words = slot.out->words_for_bits(out.pkt.bits());
    if (slot.out->can_accept(words)) {
        const SimTime extra =
            static_cast<SimTime>(slot.instance->spec().latency_cycles) *
            fpga_domain().period_ps;
        slot.out->enqueue(std::move(out), words, t, extra);
        schedule_opi(slot.out->head_visible_at());
    } else {
        slot.stalled = std::move(out);
    }
}

void Engine::opi_sweep(SimTime t) {
    opi_scheduled_ = false;
    int first_serviced = -1;
    std::array<bool, kTotalLanes> taken{};
    for (int i = 0; i < kMaxSlots; ++i) {
        const int s = (opi_ptr_ + i) % kMaxSlots;
        SlotState& slot = slots_[s];
        const OutPacket* head = slot.out->visible_head(t);
        if (head == nullptr) continue;
        OpiDecision d = opi_classify(steering_, head->pkt, head->meta);
        for (std::uint8_t lane : d.lanes) {
            if (tx_[lane] == nullptr) {  // vRX is receive-only
                d.lanes.clear();
                d.drop = DropReason::kUnauthorized;
                break;
            }
        }
        if (d.lanes.empty()) {
            slot.out->pop_head();
            slot_metrics_[s].drops[static_cast<int>(d.drop)]++;
            opi_counters_.drops[static_cast<int>(d.drop)]++;
            count_drop(d.drop);
        } else {
            const std::uint32_t words = tx_[d.lanes.front()]->words_for_bits(head->pkt.bits());
            bool fits = true;
            for (std::uint8_t lane : d.lanes) {
                if (taken[lane] || !tx_[lane]->can_accept(words)) {
                    fits = false;
                    break;
                }
            }
            // All-or-nothing: a broadcast blocked on any one TX queue keeps
            // its place so copies are never reordered or partially sent.
            if (!fits) continue;
            OutPacket o = slot.out->pop_head();
            opi_counters_.forwarded++;
            totals_.duplicated += d.lanes.size() - 1;
            trace("opi_move", t, o.pkt.id);
            for (std::uint8_t lane : d.lanes) {
                Packet copy = o.pkt;
                tx_[lane]->enqueue(std::move(copy), words, t);
                taken[lane] = true;
                push_event(tx_[lane]->head_visible_at(), EventKind::kFifoService, lane,
                           kSvcTxCheck);
            }
        }
        if (first_serviced < 0) first_serviced = s;
        if (slot.stalled) {
            OutPacket o = std::move(*slot.stalled);
            slot.stalled.reset();
            const std::uint32_t w = slot.out->words_for_bits(o.pkt.bits());
            if (slot.out->can_accept(w)) {
                const SimTime extra =
                    static_cast<SimTime>(slot.instance->spec().latency_cycles) *
                    fpga_domain().period_ps;
                slot.out->enqueue(std::move(o), w, t, extra);
                if (!slot.in->empty()) {
                    push_event(std::max(t, slot.in->head_visible_at()),
                               EventKind::kFifoService, s, kSvcIntake);
                }
            } else {
                slot.stalled = std::move(o);
            }
        }
    }
    if (first_serviced >= 0) opi_ptr_ = (first_serviced + 1) % kMaxSlots;
    for (const SlotState& slot : slots_) {
        if (!slot.out->empty()) {
            opi_scheduled_ = true;
            push_event(t + kAsicCyclePs, EventKind::kFifoService, 0, kSvcOpi);
            break;
        }
    }
}

void Engine::tx_check(int lane, SimTime t) {
    if (tx_busy_[lane]) return;
    PacketQueue<Packet>& q = *tx_[lane];
    const Packet* head = q.visible_head(t);
    if (head == nullptr) {
        if (!q.empty()) push_event(q.head_visible_at(), EventKind::kFifoService, lane, kSvcTxCheck);
        return;
    }
    tx_busy_[lane] = true;
    trace("tx_start", t, head->id);
    // Words stay occupied until the tail bit leaves the lane.
    push_event(t + static_cast<SimTime>(head->bits()) * kTxPsPerBit, EventKind::kFifoService,
               lane, kSvcTxDone);
}

void Engine::tx_complete(int lane, SimTime t) {
    PacketQueue<Packet>& q = *tx_[lane];
    Packet pkt = q.pop_head();
    tx_busy_[lane] = false;
    if (lane == kVtxLane) {
        // Loopback: the frame re-enters the IPI on the vRX port with its
        // original arrival time so end-to-end latency spans all passes.
        pkt.rx_lane = kVrxLane;
        PacketQueue<Packet>& vrx = *rx_[kVrxLane];
        const std::uint32_t words = vrx.words_for_bits(pkt.bits());
        if (vrx.can_accept(words)) {
            trace("loopback", t, pkt.id);
            vrx.enqueue(std::move(pkt), words, t);
            schedule_ipi(t + 2 * kAsicCyclePs);
        } else {
            vrx.fifo().record_drop();
            lanes_[kVrxLane].drops[static_cast<int>(DropReason::kRxOverflow)]++;
            count_drop(DropReason::kRxOverflow);
        }
    } else {
        totals_.delivered++;
        totals_.delivered_bytes += pkt.frame.size();
        lanes_[lane].delivered++;
        lanes_[lane].delivered_bytes += pkt.frame.size();
        if (in_window(t)) lanes_[lane].window_tx_bits += pkt.bits();
        if (pkt.device_id) {
            slot_metrics_[pkt.device_id->value].latencies_ps.push_back(t - pkt.arrival_time);
        }
        trace("delivered", t, pkt.id);
        if (on_delivery) on_delivery(lane, pkt);
    }
    if (q.visible_head(t) != nullptr) {
        tx_check(lane, t);
    } else if (!q.empty()) {
        push_event(q.head_visible_at(), EventKind::kFifoService, lane, kSvcTxCheck);
    }
}

void Engine::count_drop(DropReason reason) {
    totals_.dropped++;
    totals_.drops[static_cast<int>(reason)]++;
}

void Engine::clear_slot_packets(int slot_id) {
    SlotState& slot = slots_[slot_id];
    std::uint64_t lost = slot.in->clear() + slot.out->clear();
    if (slot.current) {
        slot.current.reset();
        ++lost;
    }
    if (slot.stalled) {
        slot.stalled.reset();
        ++lost;
    }
    slot_metrics_[slot_id].drops[static_cast<int>(DropReason::kReconfig)] += lost;
    for (std::uint64_t i = 0; i < lost; ++i) count_drop(DropReason::kReconfig);
}

void Engine::instantiate(int slot_id, const std::string& spec_name, double rate_scale) {
    const PipelineSpec* spec = scenario_.find_pipeline(spec_name);
    if (spec == nullptr) {
        throw std::invalid_argument("unknown pipeline spec: " + spec_name);
    }
    SlotState& slot = slots_[slot_id];
    slot.instance = std::make_unique<VsInstance>(
        *spec, DeviceId{static_cast<std::uint8_t>(slot_id)});
    slot.status = SlotStatus::kActive;
    slot.rate_scale = rate_scale;
    slot.busy_until = now_;
    slot.pending_spec.clear();
    if (!slot.in->empty()) {
        push_event(std::max(now_, slot.in->head_visible_at()), EventKind::kFifoService, slot_id,
                   kSvcIntake);
    }
}

void Engine::apply_schedule_entry(int index, SimTime t) {
    // The management channel fits one frame per ASIC cycle; later frames wait.
    if (t < ctrl_free_at_) {
        push_event(ctrl_free_at_, EventKind::kControlFrame, index);
        return;
    }
    ctrl_free_at_ = t + kAsicCyclePs;
    const ReconfigAction& action = scenario_.schedule[index];
    ReconfigCheck check;
    switch (action.kind) {
        case ReconfigAction::Kind::kDeploy:
            check = partial_reconfigure(action.slot, action.spec_name);
            break;
        case ReconfigAction::Kind::kUndeploy:
            check = partial_reconfigure(action.slot, "");
            break;
        case ReconfigAction::Kind::kFull:
            check = full_reconfigure(action.full_deployments);
            break;
    }
    if (!check.ok && on_event) {
        on_event(t, EventKind::kControlFrame, "rejected: " + check.reason);
    }
}

ReconfigCheck Engine::full_reconfigure(const std::map<int, std::string>& deployments) {
    std::map<int, PipelineSpec> specs;
    for (const auto& [slot, spec_name] : deployments) {
        const PipelineSpec* spec = scenario_.find_pipeline(spec_name);
        if (spec == nullptr) {
            return {false, "unknown pipeline spec: " + spec_name};
        }
        specs.emplace(slot, *spec);
    }
    ReconfigCheck check = check_full_deployment(specs, scenario_.capacity);
    if (!check.ok) return check;
    // The whole shell reprograms: every slot loses its instance, tables, and
    // in-flight packets, deployed again or not.
    const SimTime done_at = now_ + scenario_.policy.full_reconfig_ps;
    for (int s = 0; s < kMaxSlots; ++s) {
        clear_slot_packets(s);
        SlotState& slot = slots_[s];
        slot.instance.reset();
        slot.status = SlotStatus::kReconfiguring;
        slot.service_epoch++;
        auto it = deployments.find(s);
        slot.pending_spec = it == deployments.end() ? "" : it->second;
        slot.reconfig_done_at = done_at;
    }
    push_event(done_at, EventKind::kReconfigDone, -1);
    return {true, ""};
}

ReconfigCheck Engine::partial_reconfigure(int slot_id, const std::string& spec_name) {
    if (slot_id < 0 || slot_id >= kMaxSlots) {
        return {false, "slot out of range"};
    }
    if (scenario_.policy.mode != ReconfigMode::kPartial) {
        return {false, "partial reconfiguration requires partial mode"};
    }
    if (!spec_name.empty()) {
        const PipelineSpec* spec = scenario_.find_pipeline(spec_name);
        if (spec == nullptr) {
            return {false, "unknown pipeline spec: " + spec_name};
        }
        ReconfigCheck check = check_partial_deployment(*spec, scenario_.policy);
        if (!check.ok) return check;
    }
    clear_slot_packets(slot_id);
    SlotState& slot = slots_[slot_id];
    slot.instance.reset();
    slot.status = SlotStatus::kReconfiguring;
    slot.service_epoch++;
    slot.pending_spec = spec_name;
    slot.reconfig_done_at = now_ + scenario_.policy.partial_reconfig_ps;
    push_event(slot.reconfig_done_at, EventKind::kReconfigDone, slot_id);
    return {true, ""};
}

VsInstance* Engine::slot_instance(int slot) {
    if (slot < 0 || slot >= kMaxSlots) return nullptr;
    return slots_[slot].instance.get();
}

bool Engine::slot_reconfiguring(int slot) const {
    if (slot < 0 || slot >= kMaxSlots) return false;
    return slots_[slot].status == SlotStatus::kReconfiguring;
}

ControlFrame Engine::submit(const ControlFrame& frame) {
    const SimTime t = std::max(now_, ctrl_free_at_);
    ctrl_free_at_ = t + kAsicCyclePs;
    return dispatch(frame, *this);
}

bool Engine::deploy(int slot, const std::string& spec_name, std::string* error) {
    ReconfigCheck check;
    if (scenario_.policy.mode == ReconfigMode::kFull) {
        std::map<int, std::string> deployments;
        for (int s = 0; s < kMaxSlots; ++s) {
            if (slots_[s].instance) deployments[s] = slots_[s].instance->spec().name;
            else if (slots_[s].status == SlotStatus::kReconfiguring &&
                     !slots_[s].pending_spec.empty()) {
                deployments[s] = slots_[s].pending_spec;
            }
        }
        deployments[slot] = spec_name;
        check = full_reconfigure(deployments);
    } else {
        check = partial_reconfigure(slot, spec_name);
    }
    if (!check.ok && error != nullptr) *error = check.reason;
    return check.ok;
}

bool Engine::undeploy(int slot, std::string* error) {
    ReconfigCheck check;
    if (scenario_.policy.mode == ReconfigMode::kFull) {
        std::map<int, std::string> deployments;
        for (int s = 0; s < kMaxSlots; ++s) {
            if (s == slot) continue;
            if (slots_[s].instance) deployments[s] = slots_[s].instance->spec().name;
        }
        check = full_reconfigure(deployments);
    } else {
        check = partial_reconfigure(slot, "");
    }
    if (!check.ok && error != nullptr) *error = check.reason;
    return check.ok;
}

const PipelineSpec* Engine::slot_spec(int slot) const {
    if (slot < 0 || slot >= kMaxSlots || !slots_[slot].instance) return nullptr;
    return &slots_[slot].instance->spec();
}

SlotStatus Engine::slot_status(int slot) const { return slots_.at(slot).status; }

const Fifo* Engine::find_fifo(const std::string& fifo_id) const {
    for (int s = 0; s < kMaxSlots; ++s) {
        if (fifo_id == vs_in_fifo_id(s)) return &slots_[s].in->fifo();
        if (fifo_id == vs_out_fifo_id(s)) return &slots_[s].out->fifo();
    }
    for (int lane = 0; lane < kTotalLanes; ++lane) {
        if (rx_[lane] && fifo_id == rx_fifo_id(lane)) return &rx_[lane]->fifo();
        if (tx_[lane] && fifo_id == tx_fifo_id(lane)) return &tx_[lane]->fifo();
    }
    return nullptr;
}

void Engine::trace(const char* label, SimTime t, std::uint64_t pkt_id) {
    if (trace_first_packet && pkt_id == 0) {
        trace_.push_back(HopTrace{label, t});
    }
}

std::uint64_t Engine::window_ns() const {
    return static_cast<std::uint64_t>(scenario_.duration_ps - window_start_) / 1000;
}

namespace {

double window_gbps(std::uint64_t bits, SimTime window_ps) {
    if (window_ps <= 0) return 0.0;
    return static_cast<double>(bits) * 1000.0 / static_cast<double>(window_ps);
}

std::string lane_name(int lane) {
    if (lane == kVrxLane) return "vrx";
    if (lane == kVtxLane) return "vtx";
    return "lane" + std::to_string(lane);
}

}  // namespace

std::string Engine::metrics_csv() const {
    const SimTime window_ps = scenario_.duration_ps - window_start_;
    std::string out;
    char line[512];
    out += "[lanes]\n";
    out += "lane,injected,injected_bytes,delivered,delivered_bytes,rx_gbps,tx_gbps";
    for (int r = 0; r < kDropReasonCount; ++r) {
        out += ",drop_";
        out += to_string(static_cast<DropReason>(r));
    }
    out += "\n";
    for (int lane = 0; lane < kTotalLanes; ++lane) {
        const LaneMetrics& m = lanes_[lane];
        std::snprintf(line, sizeof(line), "%s,%llu,%llu,%llu,%llu,%.4f,%.4f",
                      lane_name(lane).c_str(),
                      static_cast<unsigned long long>(m.injected),
                      static_cast<unsigned long long>(m.injected_bytes),
                      static_cast<unsigned long long>(m.delivered),
                      static_cast<unsigned long long>(m.delivered_bytes),
                      window_gbps(m.window_rx_bits, window_ps),
                      window_gbps(m.window_tx_bits, window_ps));
        out += line;
        for (int r = 0; r < kDropReasonCount; ++r) {
            std::snprintf(line, sizeof(line), ",%llu",
                          static_cast<unsigned long long>(m.drops[r]));
            out += line;
        }
        out += "\n";
    }
    out += "[slots]\n";
    out += "slot,status,spec,processed,emitted,out_gbps,latency_min_ps,latency_mean_ps,"
           "latency_p99_ps,latency_count";
    for (int r = 0; r < kDropReasonCount; ++r) {
        out += ",drop_";
        out += to_string(static_cast<DropReason>(r));
    }
    out += "\n";
    for (int s = 0; s < kMaxSlots; ++s) {
        const SlotMetrics& m = slot_metrics_[s];
        const SlotState& slot = slots_[s];
        const char* status = slot.status == SlotStatus::kActive
                                 ? "active"
                                 : (slot.status == SlotStatus::kEmpty ? "empty" : "reconfiguring");
        const std::string spec_name = slot.instance ? slot.instance->spec().name : "-";
        LatencySummary lat = summarize_latency(m.latencies_ps);
        std::snprintf(line, sizeof(line), "%d,%s,%s,%llu,%llu,%.4f,%lld,%.1f,%lld,%llu", s,
                      status, spec_name.c_str(),
                      static_cast<unsigned long long>(m.processed),
                      static_cast<unsigned long long>(m.emitted),
                      window_gbps(m.window_out_bits, window_ps),
                      static_cast<long long>(lat.min_ps), lat.mean_ps,
                      static_cast<long long>(lat.p99_ps),
                      static_cast<unsigned long long>(lat.count));
        out += line;
        for (int r = 0; r < kDropReasonCount; ++r) {
            std::snprintf(line, sizeof(line), ",%llu",
                          static_cast<unsigned long long>(m.drops[r]));
            out += line;
        }
        out += "\n";
    }
    out += "[fifos]\n";
    out += "fifo_id,depth,width,peak_occupancy,fifo_drops\n";
    auto fifo_row = [&](const Fifo& f) {
        std::snprintf(line, sizeof(line), "%s,%u,%u,%u,%llu\n", f.spec().fifo_id.c_str(),
                      f.spec().depth, f.spec().width, f.state().peak_occupancy,
                      static_cast<unsigned long long>(f.state().drops));
        out += line;
    };
    for (int s = 0; s < kMaxSlots; ++s) {
        fifo_row(slots_[s].in->fifo());
        fifo_row(slots_[s].out->fifo());
    }
    for (int lane = 0; lane < kTotalLanes; ++lane) {
        if (rx_[lane]) fifo_row(rx_[lane]->fifo());
    }
    for (int lane = 0; lane < kTotalLanes; ++lane) {
        if (tx_[lane]) fifo_row(tx_[lane]->fifo());
    }
    out += "[totals]\n";
    out += "injected,delivered,duplicated,dropped,in_flight,conserved\n";
    std::snprintf(line, sizeof(line), "%llu,%llu,%llu,%llu,%llu,%s\n",
                  static_cast<unsigned long long>(totals_.injected),
                  static_cast<unsigned long long>(totals_.delivered),
                  static_cast<unsigned long long>(totals_.duplicated),
                  static_cast<unsigned long long>(totals_.dropped),
                  static_cast<unsigned long long>(totals_.in_flight),
                  totals_.conserved() ? "yes" : "no");
    out += line;
    return out;
}

std::string Engine::summary_text() const {
    const SimTime window_ps = scenario_.duration_ps - window_start_;
    std::uint64_t tx_bits = 0;
    std::uint64_t rx_bits = 0;
    for (const LaneMetrics& m : lanes_) {
        tx_bits += m.window_tx_bits;
        rx_bits += m.window_rx_bits;
    }
    std::string out;
    char line[256];
    out += "scenario: " + scenario_.name + "\n";
    std::snprintf(line, sizeof(line),
                  "duration: %lld ps (measurement window %lld..%lld ps)\n",
                  static_cast<long long>(scenario_.duration_ps),
                  static_cast<long long>(window_start_),
                  static_cast<long long>(scenario_.duration_ps));
    out += line;
    std::snprintf(line, sizeof(line), "injected: %llu packets, %llu bytes\n",
                  static_cast<unsigned long long>(totals_.injected),
                  static_cast<unsigned long long>(totals_.injected_bytes));
    out += line;
    std::snprintf(line, sizeof(line), "delivered: %llu packets, %llu bytes\n",
                  static_cast<unsigned long long>(totals_.delivered),
                  static_cast<unsigned long long>(totals_.delivered_bytes));
    out += line;
    std::snprintf(line, sizeof(line), "duplicated: %llu, dropped: %llu, in_flight: %llu\n",
                  static_cast<unsigned long long>(totals_.duplicated),
                  static_cast<unsigned long long>(totals_.dropped),
                  static_cast<unsigned long long>(totals_.in_flight));
    out += line;
    std::snprintf(line, sizeof(line),
                  "conservation: injected(%llu) + duplicated(%llu) == delivered(%llu) + "
                  "dropped(%llu) + in_flight(%llu) %s\n",
                  static_cast<unsigned long long>(totals_.injected),
                  static_cast<unsigned long long>(totals_.duplicated),
                  static_cast<unsigned long long>(totals_.delivered),
                  static_cast<unsigned long long>(totals_.dropped),
                  static_cast<unsigned long long>(totals_.in_flight),
                  totals_.conserved() ? "OK" : "VIOLATED");
    out += line;
    for (int r = 0; r < kDropReasonCount; ++r) {
        if (totals_.drops[r] == 0) continue;
        std::snprintf(line, sizeof(line), "drop.%s: %llu\n",
                      to_string(static_cast<DropReason>(r)),
                      static_cast<unsigned long long>(totals_.drops[r]));
        out += line;
    }
    std::snprintf(line, sizeof(line), "goodput_gbps: %.2f\n",
                  window_gbps(tx_bits, window_ps));
    out += line;
    std::snprintf(line, sizeof(line), "offered_rx_gbps: %.2f\n",
                  window_gbps(rx_bits, window_ps));
    out += line;

    LayerRates rates;
    rates.phy_lanes = scenario_.lanes;
    std::vector<PipelineSpec> deployment;
    for (const auto& [slot, spec_name] : scenario_.deployments) {
        const PipelineSpec* spec = scenario_.find_pipeline(spec_name);
        if (spec != nullptr) deployment.push_back(*spec);
    }
    BottleneckReport bn = platform_bottleneck(rates, deployment);
    out += "\n";
    out += estimate_report(rates, deployment, scenario_.capacity);
    out += "bottleneck: ";
    for (std::size_t i = 0; i < bn.layers.size(); ++i) {
        if (i > 0) out += "+";
        out += bn.layers[i];
    }
    std::snprintf(line, sizeof(line), " (%.2f Gbps); measured goodput %.2f Gbps\n", bn.gbps,
                  window_gbps(tx_bits, window_ps));
    out += line;
    return out;
}

std::map<int, LatencySummary> Engine::measure_latency() const {
    std::map<int, LatencySummary> result;
    for (int s = 0; s < kMaxSlots; ++s) {
        if (slot_metrics_[s].latencies_ps.empty()) continue;
        result[s] = summarize_latency(slot_metrics_[s].latencies_ps);
    }
    return result;
}

}  // namespace vswsim
