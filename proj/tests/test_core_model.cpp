// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include <random>

#include "doctest.h"
#include "sptmsim/core.hpp"
#include "test_util.hpp"

using namespace sptmsim;

TEST_CASE("dispatch target encoding") {
    auto sk = encode_dispatch_target(DomainCode::SK, 0, 0);
    REQUIRE(sk.ok());
    CHECK(sk.value.raw == 0x0003000000000000ULL);

    auto zero = encode_dispatch_target(DomainCode::SPTM, 0, 0);
    REQUIRE(zero.ok());
    CHECK(zero.value.raw == 0x0ULL);

    auto txm = encode_dispatch_target(DomainCode::TXM, 0, 5);
    REQUIRE(txm.ok());
    CHECK(txm.value.raw == 0x0002000000000005ULL);
    CHECK((txm.value.raw >> 32) == 0x00020000u);
}

TEST_CASE("dispatch target decoding") {
    DispatchTarget t = decode_dispatch_target(0x0500000002ULL);
    CHECK(t.domain == DomainCode::SPTM);
    CHECK(t.table == 5);
    CHECK(t.endpoint == 2);
    CHECK_FALSE(t.has_reserved_bits());

    t = decode_dispatch_target(0x0);
    CHECK(t.domain == DomainCode::SPTM);
    CHECK(t.table == 0);
    CHECK(t.endpoint == 0);

    t = decode_dispatch_target(0x00FF00000000ULL);
    CHECK(t.table == 0xFF);
    CHECK(is_control_code(t.table));

    // Reserved bits survive decode and are flagged, not rejected.
    t = decode_dispatch_target(0x1ULL << 40);
    CHECK(t.has_reserved_bits());
    CHECK(t.reserved_bits == (0x1ULL << 40));
}

TEST_CASE("dispatch target round-trip") {
    std::mt19937_64 rng(0x5eed);
    for (int i = 0; i < 2000; ++i) {
        auto domain = static_cast<DomainCode>(rng() % kMaxDomains);
        auto table = static_cast<uint8_t>(rng() % 256);
        auto endpoint = static_cast<EndpointId>(rng());
        auto enc = encode_dispatch_target(domain, table, endpoint);
        REQUIRE(enc.ok());
        DispatchTarget dec = decode_dispatch_target(enc.value.raw);
        CHECK(dec.domain == domain);
        CHECK(dec.table == table);
        CHECK(dec.endpoint == endpoint);
        CHECK(dec.reserved_bits == 0);
    }
}

namespace {
// Table-free recomputation of the index: walk the bit positions one at a
// time instead of composing shifted fields.
uint8_t sprr_index_oracle(PteBits b) {
    uint8_t idx = 0;
    if (b.ap & 0x1) idx += 1;
    if (b.ap & 0x2) idx += 2;
    if (b.uxn) idx += 4;
    if (b.pxn) idx += 8;
    return idx;
}
} // namespace

TEST_CASE("sprr index from pte bits") {
    CHECK(sprr_index_from_pte(PteBits{0, false, false}) == 0);
    CHECK(sprr_index_from_pte(PteBits{3, true, true}) == 15);

    // Full 16-entry truth table against the independent composition.
    for (uint8_t ap = 0; ap < 4; ++ap)
        for (int uxn = 0; uxn < 2; ++uxn)
            for (int pxn = 0; pxn < 2; ++pxn) {
                PteBits b{ap, uxn != 0, pxn != 0};
                CHECK(sprr_index_from_pte(b) == sprr_index_oracle(b));
            }

    // All four bits independent: 16 distinct indexes.
    std::array<bool, 16> seen{};
    for (uint8_t ap = 0; ap < 4; ++ap)
        for (int uxn = 0; uxn < 2; ++uxn)
            for (int pxn = 0; pxn < 2; ++pxn)
                seen[sprr_index_from_pte(PteBits{ap, uxn != 0, pxn != 0})] = true;
    for (bool s : seen) CHECK(s);
}

TEST_CASE("pte raw round-trip") {
    for (uint8_t ap = 0; ap < 4; ++ap)
        for (int uxn = 0; uxn < 2; ++uxn)
            for (int pxn = 0; pxn < 2; ++pxn) {
                PteBits b{ap, uxn != 0, pxn != 0};
                PteBits r = PteBits::from_raw(b.raw());
                CHECK(r.ap == b.ap);
                CHECK(r.uxn == b.uxn);
                CHECK(r.pxn == b.pxn);
            }
}

TEST_CASE("sprr permission resolution") {
    const auto& table = sptmsim::testing::rules().sprr_permissions;

    CHECK(table.resolve(1, PrivLevel::GL2).str() == "rw-");
    CHECK(table.resolve(1, PrivLevel::EL2).str() == "r--");
    CHECK(table.resolve(2, PrivLevel::EL0).str() == "---");

    // Index 1 (page tables) is writable only at GL2.
    CHECK(table.resolve(1, PrivLevel::GL2).w);
    CHECK_FALSE(table.resolve(1, PrivLevel::EL2).w);
    CHECK_FALSE(table.resolve(1, PrivLevel::EL0).w);

    // Total over index x level: every lookup resolves.
    for (uint8_t idx = 0; idx < 16; ++idx)
        for (PrivLevel l : {PrivLevel::EL0, PrivLevel::EL2, PrivLevel::GL2}) {
            PermTriple t = table.resolve(idx, l);
            if (table.row(idx) == nullptr) CHECK(t.str() == "---");
        }
    CHECK(table.row_count() == 9);
}
