// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/core.hpp"

#include <array>

namespace sptmsim {

namespace {
constexpr std::array<std::string_view, 5> kDomainNames = {"SPTM", "XNU", "TXM", "SK", "XNU_HIB"};
constexpr std::array<std::string_view, 12> kTableNames = {
    "XNU_BOOTSTRAP", "TXM_BOOTSTRAP", "SK_BOOTSTRAP", "T8110_DART_XNU", "T8110_DART_SK", "SART",
    "NVME",          "UAT",           "SHART",        "RESERVED",       "HIB",           "INVALID"};

constexpr uint64_t kEndpointMask = 0xffffffffULL;
constexpr uint64_t kTableShift = 32;
constexpr uint64_t kDomainShift = 48;
} // namespace

std::string_view to_string(DomainCode d) { return kDomainNames[static_cast<uint8_t>(d)]; }

std::optional<DomainCode> domain_from_string(std::string_view name) {
    for (uint8_t i = 0; i < kDomainNames.size(); ++i)
        if (kDomainNames[i] == name) return static_cast<DomainCode>(i);
    return std::nullopt;
}

std::string dispatch_table_name(uint8_t table) {
    if (table < kTableNames.size()) return std::string(kTableNames[table]);
    if (table == kControlReturnToCaller) return "CONTROL_FD";
    if (table == kControlFe) return "CONTROL_FE";
    if (table == kControlFf) return "CONTROL_FF";
    return "TABLE_" + std::to_string(table);
}

Outcome<DispatchTarget> encode_dispatch_target(DomainCode domain, uint8_t table,
                                               EndpointId endpoint) {
    if (static_cast<uint8_t>(domain) >= kMaxDomains)
        return Outcome<DispatchTarget>::fail(Status::FieldOverflow);
    DispatchTarget t;
    t.domain = domain;
    t.table = table;
    t.endpoint = endpoint;
    t.raw = static_cast<uint64_t>(endpoint) | (static_cast<uint64_t>(table) << kTableShift) |
            (static_cast<uint64_t>(domain) << kDomainShift);
    return Outcome<DispatchTarget>::success(t);
}

DispatchTarget make_target(DomainCode domain, uint8_t table, EndpointId endpoint) {
    return encode_dispatch_target(domain, table, endpoint).value;
}

DispatchTarget decode_dispatch_target(uint64_t raw) {
    DispatchTarget t;
    t.raw = raw;
    t.endpoint = static_cast<EndpointId>(raw & kEndpointMask);
    t.table = static_cast<uint8_t>((raw >> kTableShift) & 0xff);
    t.domain = static_cast<DomainCode>((raw >> kDomainShift) & 0xff);
    t.reserved_bits = raw & ((0xffULL << 40) | (0xffULL << 56));
    return t;
}

uint64_t PteBits::raw() const {
    // Field placement follows the translation-table block entry: AP at
    // bits 6..7, PXN at 53, UXN at 54.
    return (static_cast<uint64_t>(ap & 0x3) << 6) | (static_cast<uint64_t>(pxn) << 53) |
           (static_cast<uint64_t>(uxn) << 54);
}

PteBits PteBits::from_raw(uint64_t raw) {
    PteBits b;
    b.ap = static_cast<uint8_t>((raw >> 6) & 0x3);
    b.pxn = (raw >> 53) & 1;
    b.uxn = (raw >> 54) & 1;
    return b;
}

uint8_t sprr_index_from_pte(PteBits bits) {
    return static_cast<uint8_t>((bits.pxn << 3) | (bits.uxn << 2) | (bits.ap & 0x3));
}

std::string_view to_string(PrivLevel l) {
    switch (l) {
    case PrivLevel::EL0: return "EL0";
    case PrivLevel::EL2: return "EL2";
    case PrivLevel::GL2: return "GL2";
    }
    return "?";
}

std::optional<PrivLevel> priv_level_from_string(std::string_view name) {
    if (name == "EL0") return PrivLevel::EL0;
    if (name == "EL2") return PrivLevel::EL2;
    if (name == "GL2") return PrivLevel::GL2;
    return std::nullopt;
}

std::string PermTriple::str() const {
    std::string s;
    s += r ? 'r' : '-';
    s += w ? 'w' : '-';
    s += x ? 'x' : '-';
    return s;
}

PermTriple perm_triple_from_string(std::string_view s) {
    PermTriple t;
    if (s.size() == 3) {
        t.r = s[0] == 'r';
        t.w = s[1] == 'w';
        t.x = s[2] == 'x';
    }
    return t;
}

void SprrPermissionTable::add_row(SprrPermissionRow row) {
    auto& slot = rows_[row.index & 0xf];
    if (!slot) ++count_;
    slot = std::move(row);
}

PermTriple SprrPermissionTable::resolve(uint8_t index, PrivLevel level) const {
    const auto& slot = rows_[index & 0xf];
    if (!slot) return PermTriple{}; // no access
    switch (level) {
    case PrivLevel::EL0: return slot->el0;
    case PrivLevel::EL2: return slot->el2;
    case PrivLevel::GL2: return slot->gl2;
    }
    return PermTriple{};
}

const SprrPermissionRow* SprrPermissionTable::row(uint8_t index) const {
    const auto& slot = rows_[index & 0xf];
    return slot ? &*slot : nullptr;
}

} // namespace sptmsim
