// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
//
// Loader for the rule tables under data/. Files are tab-separated columns,
// one record per line, '#' starts a comment. The loader cross-checks every
// table against the authoritative row counts and value ranges; a mismatch
// is a data error, not something the simulator works around.
#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sptmsim/core.hpp"
#include "sptmsim/frame_types.hpp"

namespace sptmsim {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CallerDomainRule {
    FrameType frame_type{};
    DomainCode allowed_domain{};
    uint32_t retype_flag = 0;
};

struct TypeHooks {
    bool type_out = false;
    bool type_in = false;
};

struct TableMapRule {
    FrameType table_type{};
    uint64_t entry_value = 0;           // numeric value as recorded
    std::bitset<64> allowed;            // from the named list; authoritative
    bool drift = false;                 // numeric value disagrees with the list
};

struct TransitionEntry {
    uint8_t state = 0;
    uint8_t event = 0;
    std::string action;
    uint8_t next_state = 0;
    std::optional<DomainCode> domain;
    uint8_t flag = 0;
    std::string panic; // empty unless the transition logs a panic string
};

struct IommuBootEntry {
    uint8_t iommu_id = 0;
    std::string name;
    uint8_t table_id = 0;
    std::optional<uint8_t> sk_table_id;
    bool unlisted = false;
};

struct TxmSelector {
    uint16_t selector = 0;
    std::string name;
    uint8_t num_input_args = 0;
    uint8_t num_output_args = 0;
};

struct SkRetypeService {
    uint8_t slot = 0;
    std::string kind;
    std::optional<FrameType> current; // nullopt: read dynamically
    FrameType next{};
};

struct ResourceFixtureRow {
    std::string domain;
    std::string name;
    std::string type;
};

// Bounds enforced by the monitor core function.
inline constexpr uint8_t kMaxEvent = 14;
inline constexpr uint8_t kMaxState = 22;

// Everything the simulator needs from data/, loaded once and immutable.
class RuleTables {
public:
    static RuleTables load(const std::string& dir);

    // frame typing
    std::array<CallerDomainRule, kNumFrameTypes> caller_domain;
    std::array<std::bitset<64>, kNumFrameTypes> retype_allowed;
    std::array<TypeHooks, kNumFrameTypes> hooks;
    std::array<uint8_t, kNumFrameTypes> sprr_for_type{};

    // page mapping
    std::map<FrameType, TableMapRule> table_maps;
    bool is_valid_table_type(FrameType t) const { return table_maps.count(t) != 0; }

    // SPRR permissions
    SprrPermissionTable sprr_permissions;

    // monitor state machine
    std::vector<TransitionEntry> transitions;
    const TransitionEntry* transition(uint8_t state, uint8_t event) const;

    // fixtures
    std::vector<IommuBootEntry> iommu_boot;
    std::map<uint8_t, std::string> iommu_names;
    std::vector<TxmSelector> txm_selectors;
    const TxmSelector* txm_selector(uint16_t id) const;
    const TxmSelector* txm_selector_by_name(std::string_view name) const;
    std::vector<std::string> xnuproxy_commands; // index == command id
    std::vector<SkRetypeService> sk_retype_services;
    std::vector<ResourceFixtureRow> resources;

    std::string source_dir;

private:
    std::array<int16_t, (kMaxState + 1) * (kMaxEvent + 1)> transition_index_{};
    void build_transition_index();
};

// Shared low-level parsing helpers (also used by table dumps).
std::vector<std::vector<std::string>> read_tsv(const std::string& path);
uint64_t parse_u64(const std::string& field, const std::string& context);

} // namespace sptmsim
