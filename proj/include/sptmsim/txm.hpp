// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sptmsim/dispatcher.hpp"
#include "sptmsim/frame_table.hpp"

namespace sptmsim {

// Unsupported-selector status answered for the reserved band.
inline constexpr uint64_t kTxmStatusUnsupported = 0x26;
inline constexpr uint16_t kTxmReservedBandFirst = 0x2e;
inline constexpr uint16_t kTxmReservedBandLast = 0x33;

struct TxmCall {
    uint16_t selector = 0;
    bool failure_fatal = false;
    bool failure_silent = false;
    bool skip_logs = false;
    std::vector<uint64_t> inputs;
    std::vector<uint64_t> outputs;
    uint64_t return_code = 0;
};

struct TxmThreadStack {
    uint64_t stack_id = 0;
    uint64_t backing_frame = 0;
};

// Trusted-execution-monitor model: boot registration, the kernel-call
// convention, and the selector registry. Selector handlers are audit
// stubs; code-signing semantics are out of scope.
class TxmMonitor {
public:
    TxmMonitor(const RuleTables& rules, Trace& trace, FrameTable& frames, Dispatcher& dispatcher);

    // Registers both dispatch functions through the SVC gate and sweeps
    // the configured rx region into TXM_RW frames. The monitor must be in
    // the TXM boot window when this runs.
    Status boot(MonitorState& monitor, uint64_t rx_first_frame, uint64_t rx_frame_count);

    // The kernel-call convention: slot 0 carries the thread stack's
    // backing frame, slots 1..7 the declared inputs.
    Status txm_kernel_call(TxmCall& call, const TxmThreadStack& stack, MonitorState& monitor);

    Outcome<TxmSelector> selector_lookup(uint16_t selector) const;
    Outcome<TxmSelector> selector_lookup(std::string_view name) const;

    GateHandler dispatch_function(uint8_t function_id);

    bool booted() const { return booted_; }

private:
    HandlerResult handle_kernel_call(const GateCall& call);

    const RuleTables& rules_;
    Trace& trace_;
    FrameTable& frames_;
    Dispatcher& dispatcher_;
    bool booted_ = false;
};

} // namespace sptmsim
