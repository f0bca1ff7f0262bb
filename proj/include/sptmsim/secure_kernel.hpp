// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

#include "sptmsim/dispatcher.hpp"
#include "sptmsim/frame_table.hpp"

namespace sptmsim {

// Pointer alignment applied to GL0 SVC #0 requests: low 6 bits and the
// upper 32 bits cleared.
inline constexpr uint64_t kGl0PointerMask = 0x00000000ffffffc0ULL;

struct Gl0ServiceRequest {
    uint64_t raw_pointer = 0;
    uint64_t pointed_word = 0; // word the aligned pointer references
    uint64_t arg0 = 0;
    uint64_t arg1 = 0;

    uint64_t aligned_pointer() const { return raw_pointer & kGl0PointerMask; }
    uint8_t selector() const { return static_cast<uint8_t>(pointed_word >> 58); }
};

// GL1 secure-kernel model: monitor-facing calls, dynamic dispatch
// registration, the GL0 SVC service table, and shared-memory retyping.
class SecureKernel {
public:
    SecureKernel(const RuleTables& rules, Trace& trace, FrameTable& frames,
                 Dispatcher& dispatcher);

    // Registers both dispatch functions via the HVC self-registration
    // path (SK_BOOTSTRAP endpoint 0). Requires the SK boot window.
    Status boot(MonitorState& monitor);

    // Endpoint 0 transfers control to GL0 (xnuproxy); endpoint 1 answers
    // with the boot-info record.
    Status sk_dispatch(uint8_t function_id, uint64_t endpoint);

    Status sk_svc0(const Gl0ServiceRequest& request);

    // Mirrors the recovered retype helper: only SK_DEFAULT frames move,
    // anything else is a false return without mutation.
    bool sk_retype_to_shared(uint64_t frame_index, bool writable);

    Status sk_retype_service(std::string_view kind, uint64_t frame_index);
    Status sk_retype_service_slot(uint8_t slot, uint64_t frame_index);

    GateHandler dispatch_function(uint8_t function_id);

    // Wired by the world to the GL0 request broker.
    void set_gl0_entry(std::function<Status()> fn) { gl0_entry_ = std::move(fn); }

    bool booted() const { return booted_; }
    uint64_t bootinfo_word() const { return 0x5b00; }

    // The recovered table has no bound; 64 slots cover the 6-bit selector.
    static constexpr size_t kGl0ServiceSlots = 64;

private:
    Status run_retype_service(const SkRetypeService& svc, uint64_t frame_index);

    const RuleTables& rules_;
    Trace& trace_;
    FrameTable& frames_;
    Dispatcher& dispatcher_;
    std::function<Status()> gl0_entry_;
    std::array<const SkRetypeService*, kGl0ServiceSlots> gl0_services_{};
    bool booted_ = false;
};

} // namespace sptmsim
