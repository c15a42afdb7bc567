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

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "vswsim/core.hpp"

namespace vswsim {

enum class FifoStorage { kSram, kFlipFlop };

// Geometry and clocking of one on-chip queue.
struct FifoSpec {
    std::string fifo_id;
    std::uint32_t depth = 0;  // words
    std::uint32_t width = 0;  // bits per word
    ClockDomain write_domain;
    ClockDomain read_domain;
    FifoStorage storage = FifoStorage::kSram;

    std::uint64_t capacity_bits() const {
        return static_cast<std::uint64_t>(depth) * width;
    }
};

// Live occupancy counters for one queue.
struct FifoState {
    std::uint32_t occupied_words = 0;
    bool full = false;
    bool empty = true;
    std::uint64_t drops = 0;  // maintained by whichever block owns drop policy
    std::uint32_t peak_occupancy = 0;
};

// Word-granular FIFO accounting. Enqueues are all-or-nothing; a packet of
// B bits occupies ceil(B / width) words.
class Fifo {
  public:
    explicit Fifo(FifoSpec spec);

    const FifoSpec& spec() const { return spec_; }
    const FifoState& state() const { return state_; }

    std::uint32_t words_for_bits(std::uint64_t bits) const;
    std::uint32_t free_words() const { return spec_.depth - state_.occupied_words; }

    bool can_accept(std::uint32_t words) const;
    // Returns false (and leaves the state untouched) when the words do not fit.
    bool enqueue(std::uint32_t words);
    // Grants min(words, occupied) and returns the granted count.
    std::uint32_t dequeue(std::uint32_t words);

    void record_drop() { ++state_.drops; }
    void clear();

  private:
    void refresh_flags();

    FifoSpec spec_;
    FifoState state_;
};

// Fifo plus the queued items themselves. The engine stores packets (or
// packet+metadata bundles) here; word accounting and flag bookkeeping stay
// in the underlying Fifo. Asynchronous clock-domain crossing is modeled as
// a fixed two-read-domain-cycle delay before an enqueued item becomes
// visible to the reader.
template <typename T>
class PacketQueue {
  public:
    explicit PacketQueue(FifoSpec spec) : fifo_(std::move(spec)) {}

    const Fifo& fifo() const { return fifo_; }
    Fifo& fifo() { return fifo_; }

    std::uint32_t words_for_bits(std::uint64_t bits) const {
        return fifo_.words_for_bits(bits);
    }

    bool can_accept(std::uint32_t words) const { return fifo_.can_accept(words); }

    // extra_delay_ps adds fixed transit time (pipeline exit latency) on top
    // of the two-cycle crossing before the reader can see the item.
    bool enqueue(T item, std::uint32_t words, SimTime now, SimTime extra_delay_ps = 0) {
        if (!fifo_.enqueue(words)) {
            return false;
        }
        const SimTime visible =
            now + extra_delay_ps + 2 * fifo_.spec().read_domain.period_ps;
        items_.push_back(Entry{std::move(item), words, visible});
        return true;
    }

    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }

    // Head item, if any and already visible across the clock crossing.
    const T* visible_head(SimTime now) const {
        if (items_.empty() || items_.front().visible_from > now) {
            return nullptr;
        }
        return &items_.front().item;
    }

    // Earliest instant the head becomes readable; -1 when empty.
    SimTime head_visible_at() const {
        return items_.empty() ? -1 : items_.front().visible_from;
    }

    T pop_head() {
        Entry e = std::move(items_.front());
        items_.pop_front();
        fifo_.dequeue(e.words);
        return std::move(e.item);
    }

    // Discards everything; returns the number of items lost.
    std::size_t clear() {
        const std::size_t n = items_.size();
        items_.clear();
        fifo_.clear();
        return n;
    }

  private:
    struct Entry {
        T item;
        std::uint32_t words;
        SimTime visible_from;
    };

    Fifo fifo_;
    std::deque<Entry> items_;
};

// One macro geometry choice plus how many instances of it the plan uses.
struct MacroTile {
    std::uint32_t macro_depth = 0;
    std::uint32_t macro_width = 0;
    std::uint32_t instance_count = 0;
};

enum class TilingFallback { kNone, kFlipFlop };

// Result of mapping one FIFO onto compiled SRAM macros. When the geometry
// is too asymmetric for the memory compiler the storage falls back to
// flip-flops and no macros are used.
struct TilingPlan {
    std::string fifo_id;
    std::vector<MacroTile> macros;
    TilingFallback fallback = TilingFallback::kNone;
    std::uint32_t total_macro_instances = 0;
    std::uint64_t total_bits_provisioned = 0;
    std::uint64_t waste_bits = 0;
    std::uint32_t provisioned_width = 0;
};

// Geometries the SRAM compiler offers. The compiler refuses to generate
// fewer than min_depth addresses, and a requested shape wider than twice
// the widest macro with a depth under twice min_depth is considered too
// asymmetric to tile and is built from flip-flops instead.
struct MacroConstraints {
    std::vector<std::uint32_t> depths = {32, 64, 128, 256};
    std::vector<std::uint32_t> widths = {36, 72, 144};
    std::uint32_t min_depth = 32;
};

MacroConstraints default_macro_constraints();

// Chooses the macro decomposition that minimizes wasted bits while covering
// the requested width and total capacity; ties prefer fewer instances, then
// narrower macros. Throws std::invalid_argument on an empty geometry set.
TilingPlan plan_tiling(const FifoSpec& request, const MacroConstraints& constraints);

// The platform's queue inventory: two 52x289 FIFOs per vS slot (IPI->vS and
// vS->OPI) plus one 66x417 FIFO per RX lane, per TX lane, and per loopback
// port. At the full configuration (26 slots, 32 lanes, 2 loopback ports)
// this comes to 118 FIFOs.
std::vector<FifoSpec> build_inventory(int slot_count, int lane_count = kPhysicalLanes,
                                      int loopback = kLoopbackLanes);

// Names used by build_inventory, also referenced by metrics output.
std::string vs_in_fifo_id(int slot);
std::string vs_out_fifo_id(int slot);
std::string rx_fifo_id(int lane);   // lane 32 is "vrx"
std::string tx_fifo_id(int lane);   // lane 33 is "vtx"

// CSV report: fifo_id, depth, width, storage, macro_geometry, instances,
// provisioned_bits, waste_bits.
std::string tiling_report_csv(const std::vector<FifoSpec>& inventory,
                              const MacroConstraints& constraints);

}  // namespace vswsim
