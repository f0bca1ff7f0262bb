// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <bitset>
#include <cstdint>
#include <map>
#include <vector>

#include "sptmsim/frame_table.hpp"

namespace sptmsim {

// A frame type is mappable from XNU iff its bit is CLEAR in this mask.
inline constexpr uint64_t kXnuMappableMask = 0x4fffffd1c0fe177eULL;

std::bitset<64> xnu_mappable_set();

struct MappingRecord {
    uint64_t table_frame = 0;
    uint64_t va = 0;
    uint64_t target_frame = 0;
    PteBits pte;
};

// Enforces the page-mapping policy. Never mutates frame types.
class PageMapper {
public:
    PageMapper(const FrameTable& frames, Trace& trace, bool relax_sprr = false);

    // Checks in order: XNU-mappable mask (XNU callers only), valid table
    // type, per-table allowed frame types, SPRR index consistency. With
    // relax_sprr the last check logs a warning instead of failing.
    Status map_page(DomainCode caller, uint64_t ttep, uint64_t va, uint64_t target_frame,
                    PteBits pte);

    Outcome<std::bitset<64>> table_map_set(FrameType table_type) const;

    const std::vector<MappingRecord>& mappings(uint64_t table_frame) const;
    size_t mapping_count() const { return total_mappings_; }

    void set_relax_sprr(bool relax) { relax_sprr_ = relax; }

private:
    const FrameTable& frames_;
    Trace& trace_;
    bool relax_sprr_;
    std::map<uint64_t, std::vector<MappingRecord>> mappings_;
    size_t total_mappings_ = 0;
};

} // namespace sptmsim
