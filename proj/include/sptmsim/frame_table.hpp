// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "sptmsim/core.hpp"
#include "sptmsim/frame_types.hpp"
#include "sptmsim/tables.hpp"
#include "sptmsim/trace.hpp"

namespace sptmsim {

struct FrameTableEntry {
    uint64_t frame_index = 0;
    FrameType frame_type = FrameType::SPTM_UNTYPED;
    bool in_use = false;
    uint8_t sprr_index = kSprrNone;
};

// Opaque retype parameters; recorded, never interpreted.
struct RetypeParams {
    uint64_t raw = 0;
};

// The monitor's ground truth for physical frames. Single-owner mutable
// store; all mutation is serialized through the simulator loop. The
// in_use flag models the reentrancy guard, not real parallelism.
class FrameTable {
public:
    FrameTable(const RuleTables& rules, Trace& trace, uint64_t frame_count);

    uint64_t frame_count() const { return entries_.size(); }
    bool is_managed(uint64_t frame_index) const { return frame_index < entries_.size(); }

    Outcome<FrameType> frame_type_of(uint64_t frame_index) const;
    const FrameTableEntry* entry(uint64_t frame_index) const;

    uint8_t sprr_index_for_type(FrameType t) const;

    // The full retype pipeline, in order: bounds, new-type bound, in_use
    // acquire, caller-domain rule (skipped for SPTM_UNTYPED frames),
    // previous-type equality, transition mask, type_out hook, retype-flag
    // record, type_in hook, type + SPRR update, in_use release. Any
    // rejection releases in_use and leaves the entry unchanged.
    Status retype(DomainCode caller, uint64_t frame_index, FrameType previous_type,
                  FrameType new_type, RetypeParams params = {});

    // Untracked overload used by gate plumbing where the new type arrives
    // as a raw word and may be out of range.
    Status retype_raw(DomainCode caller, uint64_t frame_index, uint64_t previous_type,
                      uint64_t new_type, RetypeParams params = {});

    std::bitset<64> allowed_retypes(FrameType from) const;

    // Fixture setup: place a frame into a type without consulting the rule
    // tables. Scenario "poke" and tests only; traced so it cannot pass as
    // an enforced transition.
    void set_type_unchecked(uint64_t frame_index, FrameType t);

    const RuleTables& rules() const { return rules_; }

private:
    const RuleTables& rules_;
    Trace& trace_;
    std::vector<FrameTableEntry> entries_;
};

} // namespace sptmsim
