// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/txm.hpp"

namespace sptmsim {

namespace {
// TXM_BOOTSTRAP endpoints.
constexpr EndpointId kEpTypeRxRegion = 1;
constexpr EndpointId kEpRegisterDispatchTable = 2;
} // namespace

TxmMonitor::TxmMonitor(const RuleTables& rules, Trace& trace, FrameTable& frames,
                       Dispatcher& dispatcher)
    : rules_(rules), trace_(trace), frames_(frames), dispatcher_(dispatcher) {}

Status TxmMonitor::boot(MonitorState& monitor, uint64_t rx_first_frame,
                        uint64_t rx_frame_count) {
    // Both dispatch functions, then the rx-region sweep, all through the
    // SVC #0 gate against the TXM bootstrap table.
    const DispatchTarget reg_target =
        make_target(DomainCode::SPTM, static_cast<uint8_t>(DispatchTableId::TXM_BOOTSTRAP),
                    kEpRegisterDispatchTable);

    CallRegs regs;
    regs[0] = 0; // TXM_dispatch_function_0
    regs[1] = 0x2; // XNU may call
    DispatchOutcome out = dispatcher_.svc_call(0, reg_target, regs, monitor);
    if (out.status != Status::Ok) return out.status;

    regs[0] = 1; // TXM_dispatch_function_1
    regs[1] = 0x1; // SPTM may call
    out = dispatcher_.svc_call(0, reg_target, regs, monitor);
    if (out.status != Status::Ok) return out.status;

    if (rx_frame_count > 0) {
        const DispatchTarget sweep_target =
            make_target(DomainCode::SPTM, static_cast<uint8_t>(DispatchTableId::TXM_BOOTSTRAP),
                        kEpTypeRxRegion);
        CallRegs sweep;
        sweep[0] = rx_first_frame;
        sweep[1] = rx_frame_count;
        sweep[2] = static_cast<uint64_t>(FrameType::TXM_RW);
        out = dispatcher_.svc_call(0, sweep_target, sweep, monitor);
        if (out.status != Status::Ok) return out.status;
    }

    booted_ = true;
    trace_.emit("TXM", "txm_boot",
                {{"rx_first", std::to_string(rx_first_frame)},
                 {"rx_count", std::to_string(rx_frame_count)}},
                Status::Ok);
    return Status::Ok;
}

Outcome<TxmSelector> TxmMonitor::selector_lookup(uint16_t selector) const {
    const TxmSelector* s = rules_.txm_selector(selector);
    if (s == nullptr) return Outcome<TxmSelector>::fail(Status::SelectorUnknown);
    return Outcome<TxmSelector>::success(*s);
}

Outcome<TxmSelector> TxmMonitor::selector_lookup(std::string_view name) const {
    const TxmSelector* s = rules_.txm_selector_by_name(name);
    if (s == nullptr) return Outcome<TxmSelector>::fail(Status::SelectorUnknown);
    return Outcome<TxmSelector>::success(*s);
}

HandlerResult TxmMonitor::handle_kernel_call(const GateCall& call) {
    uint16_t selector = static_cast<uint16_t>(call.target.endpoint);
    uint64_t stack_frame = call.regs[0];

    auto fte = frames_.frame_type_of(stack_frame);
    if (!fte.ok() || fte.value != FrameType::TXM_THREAD_STACK) {
        trace_.emit("TXM", "txm_dispatch", {{"selector", std::to_string(selector)}},
                    Status::StackInvalid);
        return HandlerResult{Status::StackInvalid, 0};
    }

    if (selector >= kTxmReservedBandFirst && selector <= kTxmReservedBandLast) {
        trace_.emit("TXM", "txm_dispatch", {{"selector", std::to_string(selector)}},
                    "Unsupported");
        return HandlerResult{Status::Ok, kTxmStatusUnsupported};
    }

    const TxmSelector* s = rules_.txm_selector(selector);
    if (s == nullptr) {
        trace_.emit("TXM", "txm_dispatch", {{"selector", std::to_string(selector)}},
                    Status::SelectorUnknown);
        return HandlerResult{Status::SelectorUnknown, 0};
    }

    // Audit stub: the call surface is modeled, the signing semantics are
    // not.
    trace_.emit("TXM", "txm_dispatch",
                {{"selector", s->name},
                 {"inputs", std::to_string(s->num_input_args)},
                 {"outputs", std::to_string(s->num_output_args)}},
                Status::Ok);
    return HandlerResult{Status::Ok, 0};
}

GateHandler TxmMonitor::dispatch_function(uint8_t function_id) {
    if (function_id == 0)
        return [this](const GateCall& call) { return handle_kernel_call(call); };
    return [this](const GateCall& call) {
        trace_.emit("TXM", "txm_dispatch_internal",
                    {{"endpoint", std::to_string(call.target.endpoint)}}, Status::Ok);
        return HandlerResult{Status::Ok, 0};
    };
}

Status TxmMonitor::txm_kernel_call(TxmCall& call, const TxmThreadStack& stack,
                                   MonitorState& monitor) {
    const TxmSelector* s = rules_.txm_selector(call.selector);
    bool reserved =
        call.selector >= kTxmReservedBandFirst && call.selector <= kTxmReservedBandLast;
    if (s == nullptr && !reserved) return Status::SelectorUnknown;
    if (s != nullptr && call.inputs.size() != s->num_input_args) return Status::ArgCountMismatch;

    CallRegs regs;
    regs[0] = stack.backing_frame;
    for (size_t i = 0; i < call.inputs.size() && i < 7; ++i) regs[i + 1] = call.inputs[i];

    const DispatchTarget target = make_target(DomainCode::TXM, 0, call.selector);
    DispatchOutcome out = dispatcher_.genter(DomainCode::XNU, target, regs, monitor);
    if (out.status != Status::Ok) return out.status;

    call.return_code = out.ret;
    call.outputs.assign(s != nullptr ? s->num_output_args : 0, 0);
    if (!call.skip_logs)
        trace_.emit("XNU", "txm_kernel_call",
                    {{"selector", s != nullptr ? s->name : std::to_string(call.selector)},
                     {"ret", hex_u64(call.return_code)}},
                    Status::Ok);
    return Status::Ok;
}

} // namespace sptmsim
