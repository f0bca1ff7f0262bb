// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/tables.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sptmsim {

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> items;
    size_t start = 0;
    while (start <= s.size()) {
        size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            items.push_back(s.substr(start));
            break;
        }
        items.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return items;
}

FrameType require_frame_type(const std::string& name, const std::string& context) {
    auto t = frame_type_from_string(name);
    if (!t) throw DataError(context + ": unknown frame type '" + name + "'");
    return *t;
}

void require_columns(const std::vector<std::string>& row, size_t n, const std::string& context) {
    if (row.size() != n)
        throw DataError(context + ": expected " + std::to_string(n) + " columns, got " +
                        std::to_string(row.size()));
}

} // namespace

std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(split_tabs(line));
    }
    return rows;
}

uint64_t parse_u64(const std::string& field, const std::string& context) {
    char* end = nullptr;
    uint64_t v = std::strtoull(field.c_str(), &end, 0);
    if (end == field.c_str() || *end != '\0')
        throw DataError(context + ": bad number '" + field + "'");
    return v;
}

const TransitionEntry* RuleTables::transition(uint8_t state, uint8_t event) const {
    if (state > kMaxState || event > kMaxEvent) return nullptr;
    int16_t idx = transition_index_[state * (kMaxEvent + 1) + event];
    return idx < 0 ? nullptr : &transitions[idx];
}

void RuleTables::build_transition_index() {
    transition_index_.fill(-1);
    for (size_t i = 0; i < transitions.size(); ++i) {
        const auto& t = transitions[i];
        size_t slot = t.state * (kMaxEvent + 1) + t.event;
        if (transition_index_[slot] >= 0)
            throw DataError("state_transitions.tsv: duplicate cell");
        transition_index_[slot] = static_cast<int16_t>(i);
    }
}

RuleTables RuleTables::load(const std::string& dir) {
    RuleTables rt;
    rt.source_dir = dir;

    // frame_types.tsv: value/name pairs must match the compiled enum.
    {
        auto rows = read_tsv(dir + "/frame_types.tsv");
        if (rows.size() != kNumFrameTypes)
            throw DataError("frame_types.tsv: expected 63 rows");
        for (const auto& row : rows) {
            require_columns(row, 2, "frame_types.tsv");
            uint64_t value = parse_u64(row[0], "frame_types.tsv");
            auto t = require_frame_type(row[1], "frame_types.tsv");
            if (static_cast<uint64_t>(t) != value)
                throw DataError("frame_types.tsv: value mismatch for " + row[1]);
        }
    }

    // caller_domains.tsv
    {
        auto rows = read_tsv(dir + "/caller_domains.tsv");
        if (rows.size() != kNumFrameTypes)
            throw DataError("caller_domains.tsv: expected one rule per frame type");
        std::array<bool, kNumFrameTypes> seen{};
        for (const auto& row : rows) {
            require_columns(row, 4, "caller_domains.tsv");
            CallerDomainRule rule;
            rule.frame_type = require_frame_type(row[1], "caller_domains.tsv");
            if (static_cast<uint64_t>(rule.frame_type) != parse_u64(row[0], "caller_domains.tsv"))
                throw DataError("caller_domains.tsv: id/name mismatch for " + row[1]);
            uint64_t d = parse_u64(row[2], "caller_domains.tsv");
            if (d >= kMaxDomains) throw DataError("caller_domains.tsv: bad domain");
            rule.allowed_domain = static_cast<DomainCode>(d);
            rule.retype_flag = static_cast<uint32_t>(parse_u64(row[3], "caller_domains.tsv"));
            uint8_t idx = static_cast<uint8_t>(rule.frame_type);
            if (seen[idx]) throw DataError("caller_domains.tsv: duplicate row " + row[1]);
            seen[idx] = true;
            rt.caller_domain[idx] = rule;
        }
    }

    // retype_transitions.tsv
    {
        auto rows = read_tsv(dir + "/retype_transitions.tsv");
        if (rows.size() != kNumFrameTypes)
            throw DataError("retype_transitions.tsv: expected one row per frame type");
        std::array<bool, kNumFrameTypes> seen{};
        for (const auto& row : rows) {
            require_columns(row, 2, "retype_transitions.tsv");
            auto from = require_frame_type(row[0], "retype_transitions.tsv");
            uint8_t idx = static_cast<uint8_t>(from);
            if (seen[idx]) throw DataError("retype_transitions.tsv: duplicate row " + row[0]);
            seen[idx] = true;
            std::bitset<64> allowed;
            if (row[1] == "*") {
                for (uint8_t t = 0; t < kNumFrameTypes; ++t) allowed.set(t);
            } else if (row[1] != "-") {
                for (const auto& name : split_commas(row[1]))
                    allowed.set(static_cast<uint8_t>(
                        require_frame_type(name, "retype_transitions.tsv")));
            }
            rt.retype_allowed[idx] = allowed;
        }
    }

    // type_hooks.tsv
    {
        auto rows = read_tsv(dir + "/type_hooks.tsv");
        for (const auto& row : rows) {
            require_columns(row, 4, "type_hooks.tsv");
            auto t = require_frame_type(row[1], "type_hooks.tsv");
            if (static_cast<uint64_t>(t) != parse_u64(row[0], "type_hooks.tsv"))
                throw DataError("type_hooks.tsv: id/name mismatch for " + row[1]);
            rt.hooks[static_cast<uint8_t>(t)] = TypeHooks{
                parse_u64(row[2], "type_hooks.tsv") != 0,
                parse_u64(row[3], "type_hooks.tsv") != 0,
            };
        }
    }

    // sprr_for_type.tsv
    {
        auto rows = read_tsv(dir + "/sprr_for_type.tsv");
        if (rows.size() != kNumFrameTypes)
            throw DataError("sprr_for_type.tsv: expected one row per frame type");
        for (const auto& row : rows) {
            require_columns(row, 3, "sprr_for_type.tsv");
            auto t = require_frame_type(row[1], "sprr_for_type.tsv");
            uint64_t idx = parse_u64(row[2], "sprr_for_type.tsv");
            if (idx > 0xf && idx != kSprrNone)
                throw DataError("sprr_for_type.tsv: bad index for " + row[1]);
            rt.sprr_for_type[static_cast<uint8_t>(t)] = static_cast<uint8_t>(idx);
        }
    }

    // sprr_permissions.tsv
    {
        auto rows = read_tsv(dir + "/sprr_permissions.tsv");
        for (const auto& row : rows) {
            require_columns(row, 5, "sprr_permissions.tsv");
            SprrPermissionRow r;
            r.index = static_cast<uint8_t>(parse_u64(row[0], "sprr_permissions.tsv"));
            r.el0 = perm_triple_from_string(row[1]);
            r.el2 = perm_triple_from_string(row[2]);
            r.gl2 = perm_triple_from_string(row[3]);
            r.usage = row[4];
            rt.sprr_permissions.add_row(r);
        }
        if (rt.sprr_permissions.row_count() != 9)
            throw DataError("sprr_permissions.tsv: expected 9 populated rows");
    }

    // table_maps.tsv: the named list is authoritative; the numeric entry
    // value is cross-checked and must be flagged "drift" where it
    // disagrees. An unflagged mismatch aborts the load.
    {
        auto rows = read_tsv(dir + "/table_maps.tsv");
        for (const auto& row : rows) {
            require_columns(row, 5, "table_maps.tsv");
            TableMapRule rule;
            rule.table_type = require_frame_type(row[1], "table_maps.tsv");
            if (static_cast<uint64_t>(rule.table_type) != parse_u64(row[0], "table_maps.tsv"))
                throw DataError("table_maps.tsv: id/name mismatch for " + row[1]);
            rule.entry_value = parse_u64(row[2], "table_maps.tsv");
            if (row[3] == "*") {
                rule.allowed.set(); // all 64 codes, sentinel included
            } else if (row[3] != "-") {
                for (const auto& name : split_commas(row[3]))
                    rule.allowed.set(
                        static_cast<uint8_t>(require_frame_type(name, "table_maps.tsv")));
            }
            rule.drift = row[4] == "drift";
            bool consistent = std::bitset<64>(rule.entry_value) == rule.allowed;
            if (consistent == rule.drift)
                throw DataError("table_maps.tsv: value_status wrong for " + row[1]);
            rt.table_maps[rule.table_type] = rule;
        }
        if (rt.table_maps.size() != 10)
            throw DataError("table_maps.tsv: expected the 10 valid table types");
    }

    // state_transitions.tsv
    {
        auto rows = read_tsv(dir + "/state_transitions.tsv");
        for (const auto& row : rows) {
            require_columns(row, 7, "state_transitions.tsv");
            TransitionEntry e;
            e.state = static_cast<uint8_t>(parse_u64(row[0], "state_transitions.tsv"));
            e.event = static_cast<uint8_t>(parse_u64(row[1], "state_transitions.tsv"));
            if (e.state > 0x16 || e.event > 0xe)
                throw DataError("state_transitions.tsv: out-of-range cell");
            e.action = row[2];
            if (e.action.empty() || e.action == "-")
                throw DataError("state_transitions.tsv: populated cell without action");
            e.next_state = static_cast<uint8_t>(parse_u64(row[3], "state_transitions.tsv"));
            if (e.next_state > 0x16)
                throw DataError("state_transitions.tsv: bad next state");
            if (row[4] != "-") {
                uint64_t d = parse_u64(row[4], "state_transitions.tsv");
                if (d >= kMaxDomains) throw DataError("state_transitions.tsv: bad domain");
                e.domain = static_cast<DomainCode>(d);
            }
            e.flag = row[5] == "-"
                         ? 0
                         : static_cast<uint8_t>(parse_u64(row[5], "state_transitions.tsv"));
            if (row[6] != "-") e.panic = row[6];
            rt.transitions.push_back(std::move(e));
        }
        if (rt.transitions.size() != 63)
            throw DataError("state_transitions.tsv: expected 63 populated cells");
    }
    rt.build_transition_index();

    // iommu_ids.tsv + iommu_boot.tsv
    {
        for (const auto& row : read_tsv(dir + "/iommu_ids.tsv")) {
            require_columns(row, 2, "iommu_ids.tsv");
            rt.iommu_names[static_cast<uint8_t>(parse_u64(row[0], "iommu_ids.tsv"))] = row[1];
        }
        for (const auto& row : read_tsv(dir + "/iommu_boot.tsv")) {
            require_columns(row, 5, "iommu_boot.tsv");
            IommuBootEntry e;
            e.iommu_id = static_cast<uint8_t>(parse_u64(row[0], "iommu_boot.tsv"));
            e.name = row[1];
            e.table_id = static_cast<uint8_t>(parse_u64(row[2], "iommu_boot.tsv"));
            if (row[3] != "-")
                e.sk_table_id = static_cast<uint8_t>(parse_u64(row[3], "iommu_boot.tsv"));
            e.unlisted = row[4] == "unlisted";
            if (!e.unlisted && rt.iommu_names.count(e.iommu_id) == 0)
                throw DataError("iommu_boot.tsv: id " + row[0] + " not in iommu_ids.tsv");
            rt.iommu_boot.push_back(std::move(e));
        }
    }

    // txm_selectors.tsv
    {
        for (const auto& row : read_tsv(dir + "/txm_selectors.tsv")) {
            require_columns(row, 4, "txm_selectors.tsv");
            TxmSelector s;
            s.selector = static_cast<uint16_t>(parse_u64(row[0], "txm_selectors.tsv"));
            s.name = row[1];
            s.num_input_args = static_cast<uint8_t>(parse_u64(row[2], "txm_selectors.tsv"));
            s.num_output_args = static_cast<uint8_t>(parse_u64(row[3], "txm_selectors.tsv"));
            if (s.num_input_args > 7 || s.num_output_args > 6)
                throw DataError("txm_selectors.tsv: arg count out of range for " + s.name);
            rt.txm_selectors.push_back(std::move(s));
        }
        if (rt.txm_selectors.size() != 40)
            throw DataError("txm_selectors.tsv: expected 40 selectors");
    }

    // xnuproxy_commands.tsv
    {
        auto rows = read_tsv(dir + "/xnuproxy_commands.tsv");
        rt.xnuproxy_commands.resize(rows.size());
        for (const auto& row : rows) {
            require_columns(row, 2, "xnuproxy_commands.tsv");
            uint64_t id = parse_u64(row[0], "xnuproxy_commands.tsv");
            if (id >= rows.size()) throw DataError("xnuproxy_commands.tsv: non-contiguous ids");
            rt.xnuproxy_commands[id] = row[1];
        }
        if (rt.xnuproxy_commands.size() != 20)
            throw DataError("xnuproxy_commands.tsv: expected 20 commands");
    }

    // sk_retype_services.tsv
    {
        for (const auto& row : read_tsv(dir + "/sk_retype_services.tsv")) {
            require_columns(row, 4, "sk_retype_services.tsv");
            SkRetypeService s;
            s.slot = static_cast<uint8_t>(parse_u64(row[0], "sk_retype_services.tsv"));
            s.kind = row[1];
            if (row[2] != "-") s.current = require_frame_type(row[2], "sk_retype_services.tsv");
            s.next = require_frame_type(row[3], "sk_retype_services.tsv");
            rt.sk_retype_services.push_back(std::move(s));
        }
        if (rt.sk_retype_services.size() != 8)
            throw DataError("sk_retype_services.tsv: expected 8 service rows");
    }

    // resources.tsv
    {
        for (const auto& row : read_tsv(dir + "/resources.tsv")) {
            require_columns(row, 3, "resources.tsv");
            rt.resources.push_back(ResourceFixtureRow{row[0], row[1], row[2]});
        }
    }

    return rt;
}

const TxmSelector* RuleTables::txm_selector(uint16_t id) const {
    for (const auto& s : txm_selectors)
        if (s.selector == id) return &s;
    return nullptr;
}

const TxmSelector* RuleTables::txm_selector_by_name(std::string_view name) const {
    for (const auto& s : txm_selectors)
        if (s.name == name) return &s;
    return nullptr;
}

} // namespace sptmsim
