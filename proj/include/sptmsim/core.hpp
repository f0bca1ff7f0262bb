// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sptmsim/status.hpp"

namespace sptmsim {

enum class DomainCode : uint8_t {
    SPTM = 0,
    XNU = 1,
    TXM = 2,
    SK = 3,
    XNU_HIB = 4,
};
inline constexpr uint8_t kMaxDomains = 5;

std::string_view to_string(DomainCode d);
std::optional<DomainCode> domain_from_string(std::string_view name);

enum class DispatchTableId : uint8_t {
    XNU_BOOTSTRAP = 0,
    TXM_BOOTSTRAP = 1,
    SK_BOOTSTRAP = 2,
    T8110_DART_XNU = 3,
    T8110_DART_SK = 4,
    SART = 5,
    NVME = 6,
    UAT = 7,
    SHART = 8,
    RESERVED = 9,
    HIB = 10,
    INVALID = 11,
};
inline constexpr uint8_t kNumDispatchTables = 12;

// Table-field values that select control functions instead of a table.
inline constexpr uint8_t kControlReturnToCaller = 0xFD;
inline constexpr uint8_t kControlFe = 0xFE;
inline constexpr uint8_t kControlFf = 0xFF;
inline constexpr bool is_control_code(uint8_t table) { return table >= kControlReturnToCaller; }

std::string dispatch_table_name(uint8_t table);

using EndpointId = uint32_t;

// XNU bootstrap table endpoints.
namespace endpoint {
inline constexpr EndpointId LOCKDOWN = 0;
inline constexpr EndpointId RETYPE = 1;
inline constexpr EndpointId MAP_PAGE = 2;
inline constexpr EndpointId GUEST_DISPATCH = 27;
inline constexpr EndpointId GUEST_EXIT = 28;
inline constexpr EndpointId HIB_BEGIN = 30;
inline constexpr EndpointId IOFILTER_PROTECTED_WRITE = 33;
} // namespace endpoint

// The 64-bit gate-call word. Endpoint in bits 0..31, dispatch table in
// bits 32..39, domain in bits 40..47 are reserved-zero, domain in bits
// 48..55, bits 56..63 reserved-zero.
struct DispatchTarget {
    DomainCode domain = DomainCode::SPTM;
    uint8_t table = 0; // DispatchTableId value or a control code
    EndpointId endpoint = 0;
    uint64_t raw = 0;
    // Nonzero reserved bits survive decode and are surfaced here.
    uint64_t reserved_bits = 0;

    bool has_reserved_bits() const { return reserved_bits != 0; }
};

Outcome<DispatchTarget> encode_dispatch_target(DomainCode domain, uint8_t table,
                                               EndpointId endpoint);
DispatchTarget decode_dispatch_target(uint64_t raw);

// Convenience for targets built from enum values known to be in range.
DispatchTarget make_target(DomainCode domain, uint8_t table, EndpointId endpoint);

// PTE permission-relevant bits.
struct PteBits {
    uint8_t ap = 0; // 2 bits
    bool uxn = false;
    bool pxn = false;

    uint64_t raw() const;
    static PteBits from_raw(uint64_t raw);
};

// 4-bit SPRR index composed as PXN:UXN:AP[1]:AP[0], PXN most significant.
uint8_t sprr_index_from_pte(PteBits bits);

inline constexpr uint8_t kSprrNone = 0xff;

enum class PrivLevel : uint8_t { EL0, EL2, GL2 };
std::string_view to_string(PrivLevel l);
std::optional<PrivLevel> priv_level_from_string(std::string_view name);

struct PermTriple {
    bool r = false, w = false, x = false;
    std::string str() const;
    bool operator==(const PermTriple&) const = default;
};
PermTriple perm_triple_from_string(std::string_view s);

struct SprrPermissionRow {
    uint8_t index = 0;
    PermTriple el0, el2, gl2;
    std::string usage;
};

// The populated SPRR rows; unlisted indexes resolve to no access at every
// level. Total over index x level.
class SprrPermissionTable {
public:
    void add_row(SprrPermissionRow row);
    PermTriple resolve(uint8_t index, PrivLevel level) const;
    const SprrPermissionRow* row(uint8_t index) const;
    size_t row_count() const { return count_; }

private:
    std::array<std::optional<SprrPermissionRow>, 16> rows_{};
    size_t count_ = 0;
};

} // namespace sptmsim
