// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/page_mapper.hpp"

namespace sptmsim {

std::bitset<64> xnu_mappable_set() {
    std::bitset<64> s;
    for (int i = 0; i < 64; ++i)
        if (((kXnuMappableMask >> i) & 1) == 0) s.set(i);
    return s;
}

PageMapper::PageMapper(const FrameTable& frames, Trace& trace, bool relax_sprr)
    : frames_(frames), trace_(trace), relax_sprr_(relax_sprr) {}

Outcome<std::bitset<64>> PageMapper::table_map_set(FrameType table_type) const {
    auto it = frames_.rules().table_maps.find(table_type);
    if (it == frames_.rules().table_maps.end())
        return Outcome<std::bitset<64>>::fail(Status::InvalidTableType);
    return Outcome<std::bitset<64>>::success(it->second.allowed);
}

Status PageMapper::map_page(DomainCode caller, uint64_t ttep, uint64_t va, uint64_t target_frame,
                            PteBits pte) {
    auto finish = [&](Status s) {
        trace_.emit(std::string(to_string(caller)), "map_page",
                    {{"ttep", std::to_string(ttep)},
                     {"va", hex_u64(va)},
                     {"frame", std::to_string(target_frame)},
                     {"pte", hex_u64(pte.raw())}},
                    s);
        return s;
    };

    const FrameTableEntry* table_fte = frames_.entry(ttep);
    const FrameTableEntry* target_fte = frames_.entry(target_frame);
    if (table_fte == nullptr || target_fte == nullptr) return finish(Status::UnmanagedFrame);

    uint8_t target_type = static_cast<uint8_t>(target_fte->frame_type);

    // (1) the global mappable mask; only recovered for the XNU path
    if (caller == DomainCode::XNU && ((kXnuMappableMask >> (target_type & 0x3f)) & 1) != 0)
        return finish(Status::FrameTypeNotMappable);

    // (2) the table frame must be one of the valid table types
    auto rule_it = frames_.rules().table_maps.find(table_fte->frame_type);
    if (rule_it == frames_.rules().table_maps.end()) return finish(Status::InvalidTableType);

    // (3) per-table allowed frame types
    if (!rule_it->second.allowed.test(target_type)) return finish(Status::TableMapDenied);

    // (4) the PTE's SPRR index must agree with the target type's index.
    // Types without a tracked index impose no constraint.
    uint8_t want = frames_.sprr_index_for_type(target_fte->frame_type);
    if (want != kSprrNone && sprr_index_from_pte(pte) != want) {
        if (!relax_sprr_) return finish(Status::SprrIndexDenied);
        trace_.emit(std::string(to_string(caller)), "sprr_check_relaxed",
                    {{"frame", std::to_string(target_frame)},
                     {"want", hex_u64(want)},
                     {"got", hex_u64(sprr_index_from_pte(pte))}},
                    Status::Ok);
    }

    auto& list = mappings_[ttep];
    list.push_back(MappingRecord{ttep, va, target_frame, pte});
    ++total_mappings_;
    return finish(Status::Ok);
}

const std::vector<MappingRecord>& PageMapper::mappings(uint64_t table_frame) const {
    static const std::vector<MappingRecord> kEmpty;
    auto it = mappings_.find(table_frame);
    return it == mappings_.end() ? kEmpty : it->second;
}

} // namespace sptmsim
