// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/frame_table.hpp"

#include <cassert>

namespace sptmsim {

FrameTable::FrameTable(const RuleTables& rules, Trace& trace, uint64_t frame_count)
    : rules_(rules), trace_(trace) {
    assert(frame_count >= 1);
    entries_.resize(frame_count);
    uint8_t untyped_sprr = rules_.sprr_for_type[static_cast<uint8_t>(FrameType::SPTM_UNTYPED)];
    for (uint64_t i = 0; i < frame_count; ++i) {
        entries_[i].frame_index = i;
        entries_[i].frame_type = FrameType::SPTM_UNTYPED;
        entries_[i].sprr_index = untyped_sprr;
    }
}

Outcome<FrameType> FrameTable::frame_type_of(uint64_t frame_index) const {
    if (!is_managed(frame_index)) return Outcome<FrameType>::fail(Status::UnmanagedFrame);
    return Outcome<FrameType>::success(entries_[frame_index].frame_type);
}

const FrameTableEntry* FrameTable::entry(uint64_t frame_index) const {
    return is_managed(frame_index) ? &entries_[frame_index] : nullptr;
}

uint8_t FrameTable::sprr_index_for_type(FrameType t) const {
    return rules_.sprr_for_type[static_cast<uint8_t>(t)];
}

std::bitset<64> FrameTable::allowed_retypes(FrameType from) const {
    return rules_.retype_allowed[static_cast<uint8_t>(from)];
}

Status FrameTable::retype_raw(DomainCode caller, uint64_t frame_index, uint64_t previous_type,
                              uint64_t new_type, RetypeParams params) {
    auto fail = [&](Status s) {
        trace_.emit(std::string(to_string(caller)), "retype",
                    {{"frame", std::to_string(frame_index)},
                     {"prev", frame_type_name(static_cast<uint8_t>(previous_type & 0xff))},
                     {"new", frame_type_name(static_cast<uint8_t>(new_type & 0xff))}},
                    s);
        return s;
    };

    // (1) the frame must be managed
    if (!is_managed(frame_index)) return fail(Status::UnmanagedFrame);
    // (2) the new type must be at most 62
    if (new_type > kMaxFrameType) return fail(Status::InvalidNewType);

    FrameTableEntry& fte = entries_[frame_index];

    // (3) in_use acquire; a set flag is a panic-equivalent error
    if (fte.in_use) return fail(Status::FrameBusy);
    fte.in_use = true;

    Status s = Status::Ok;
    FrameType current = fte.frame_type;
    const auto& rule = rules_.caller_domain[static_cast<uint8_t>(current)];

    // (4) caller-domain rule; skipped while the frame is SPTM_UNTYPED
    if (current != FrameType::SPTM_UNTYPED && caller != rule.allowed_domain)
        s = Status::CallerDomainDenied;

    // (5) caller-provided previous type must equal the tracked type
    if (s == Status::Ok && previous_type != static_cast<uint64_t>(current))
        s = Status::PreviousTypeMismatch;

    // (6) new type must be in the transition mask for the current type
    if (s == Status::Ok && !rules_.retype_allowed[static_cast<uint8_t>(current)].test(new_type))
        s = Status::TransitionDenied;

    if (s != Status::Ok) {
        fte.in_use = false;
        return fail(s);
    }

    FrameType next = static_cast<FrameType>(new_type);

    // (7) type_out hook for the outgoing type
    if (rules_.hooks[static_cast<uint8_t>(current)].type_out)
        trace_.emit(std::string(to_string(caller)), "type_out_hook",
                    {{"frame", std::to_string(frame_index)},
                     {"type", std::string(to_string(current))}},
                    Status::Ok);

    // (8) retype flag recorded; no behavioral effect
    if (rule.retype_flag != 0)
        trace_.emit(std::string(to_string(caller)), "retype_flag",
                    {{"frame", std::to_string(frame_index)},
                     {"flag", std::to_string(rule.retype_flag)}},
                    Status::Ok);

    // (9) type_in hook for the incoming type
    if (rules_.hooks[new_type].type_in)
        trace_.emit(std::string(to_string(caller)), "type_in_hook",
                    {{"frame", std::to_string(frame_index)},
                     {"type", std::string(to_string(next))},
                     {"params", hex_u64(params.raw)}},
                    Status::Ok);

    // (10)-(12) commit and release
    fte.frame_type = next;
    fte.sprr_index = sprr_index_for_type(next);
    fte.in_use = false;

    trace_.emit(std::string(to_string(caller)), "retype",
                {{"frame", std::to_string(frame_index)},
                 {"prev", std::string(to_string(current))},
                 {"new", std::string(to_string(next))},
                 {"sprr", hex_u64(fte.sprr_index)}},
                Status::Ok);
    return Status::Ok;
}

Status FrameTable::retype(DomainCode caller, uint64_t frame_index, FrameType previous_type,
                          FrameType new_type, RetypeParams params) {
    return retype_raw(caller, frame_index, static_cast<uint64_t>(previous_type),
                      static_cast<uint64_t>(new_type), params);
}

void FrameTable::set_type_unchecked(uint64_t frame_index, FrameType t) {
    assert(is_managed(frame_index));
    FrameTableEntry& fte = entries_[frame_index];
    fte.frame_type = t;
    fte.sprr_index = sprr_index_for_type(t);
    trace_.emit("fixture", "set_type_unchecked",
                {{"frame", std::to_string(frame_index)}, {"type", std::string(to_string(t))}},
                Status::Ok);
}

} // namespace sptmsim
