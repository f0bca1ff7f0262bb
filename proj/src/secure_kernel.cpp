// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/secure_kernel.hpp"

namespace sptmsim {

namespace {
// SK_BOOTSTRAP endpoints.
constexpr EndpointId kEpRegisterDispatchTable = 0;
} // namespace

SecureKernel::SecureKernel(const RuleTables& rules, Trace& trace, FrameTable& frames,
                           Dispatcher& dispatcher)
    : rules_(rules), trace_(trace), frames_(frames), dispatcher_(dispatcher) {
    for (const auto& svc : rules_.sk_retype_services)
        if (svc.slot < kGl0ServiceSlots) gl0_services_[svc.slot] = &svc;
}

Status SecureKernel::boot(MonitorState& monitor) {
    const DispatchTarget reg_target = make_target(
        DomainCode::SPTM, static_cast<uint8_t>(DispatchTableId::SK_BOOTSTRAP),
        kEpRegisterDispatchTable);

    CallRegs regs;
    regs[0] = 0; // SPTM_dispatch_function_0
    regs[1] = 0x2; // XNU may call
    DispatchOutcome out = dispatcher_.hvc_call(reg_target, regs, monitor);
    if (out.status != Status::Ok) return out.status;

    regs[0] = 1; // SPTM_dispatch_function_1
    regs[1] = 0x1; // SPTM may call
    out = dispatcher_.hvc_call(reg_target, regs, monitor);
    if (out.status != Status::Ok) return out.status;

    booted_ = true;
    trace_.emit("SK", "sk_boot", {}, Status::Ok);
    return Status::Ok;
}

Status SecureKernel::sk_dispatch(uint8_t function_id, uint64_t endpoint) {
    if (endpoint >= 2) {
        trace_.emit("SK", "sk_dispatch",
                    {{"function", std::to_string(function_id)},
                     {"endpoint", std::to_string(endpoint)}},
                    Status::InvalidEndpoint);
        return Status::InvalidEndpoint;
    }
    if (endpoint == 1) {
        trace_.emit("SK", "sk_dispatch",
                    {{"function", std::to_string(function_id)},
                     {"endpoint", "EXCLAVES_BOOTINFO"},
                     {"bootinfo", hex_u64(bootinfo_word())}},
                    Status::ReturnToCaller);
        return Status::ReturnToCaller;
    }
    // EXCLAVES_ENTER: hand control to GL0 via ERET.
    trace_.emit("SK", "sk_dispatch",
                {{"function", std::to_string(function_id)}, {"endpoint", "EXCLAVES_ENTER"}},
                Status::EnterGl0);
    Status gl0 = gl0_entry_ ? gl0_entry_() : Status::Ok;
    trace_.emit("SK", "gl0_return", {{"status", std::string(to_string(gl0))}}, Status::Ok);
    return gl0 == Status::Ok ? Status::EnterGl0 : gl0;
}

GateHandler SecureKernel::dispatch_function(uint8_t function_id) {
    return [this, function_id](const GateCall& call) {
        Status s = sk_dispatch(function_id, call.target.endpoint);
        // Control outcomes are successful gate traversals.
        if (s == Status::ReturnToCaller || s == Status::EnterGl0)
            return HandlerResult{s, function_id == 0 && call.target.endpoint == 1
                                        ? bootinfo_word()
                                        : 0};
        return HandlerResult{s, 0};
    };
}

Status SecureKernel::sk_svc0(const Gl0ServiceRequest& request) {
    uint64_t aligned = request.aligned_pointer();
    if (aligned == 0) {
        trace_.emit("SK", "sk_svc0", {{"ptr", hex_u64(request.raw_pointer)}},
                    Status::ContextRestore);
        return Status::ContextRestore;
    }
    uint8_t selector = request.selector();
    const SkRetypeService* svc =
        selector < kGl0ServiceSlots ? gl0_services_[selector] : nullptr;
    if (svc == nullptr) {
        trace_.emit("SK", "sk_svc0",
                    {{"ptr", hex_u64(aligned)}, {"selector", std::to_string(selector)}},
                    Status::UnknownService);
        return Status::UnknownService;
    }
    trace_.emit("SK", "sk_svc0",
                {{"ptr", hex_u64(aligned)},
                 {"selector", std::to_string(selector)},
                 {"service", svc->kind}},
                Status::Ok);
    return run_retype_service(*svc, request.arg0);
}

Status SecureKernel::run_retype_service(const SkRetypeService& svc, uint64_t frame_index) {
    FrameType previous;
    if (svc.current) {
        previous = *svc.current;
    } else {
        auto t = frames_.frame_type_of(frame_index);
        if (!t.ok()) return t.status;
        previous = t.value;
    }
    return frames_.retype(DomainCode::SK, frame_index, previous, svc.next);
}

Status SecureKernel::sk_retype_service(std::string_view kind, uint64_t frame_index) {
    for (const auto& svc : rules_.sk_retype_services)
        if (svc.kind == kind) return run_retype_service(svc, frame_index);
    return Status::UnknownService;
}

Status SecureKernel::sk_retype_service_slot(uint8_t slot, uint64_t frame_index) {
    const SkRetypeService* svc = slot < kGl0ServiceSlots ? gl0_services_[slot] : nullptr;
    if (svc == nullptr) return Status::UnknownService;
    return run_retype_service(*svc, frame_index);
}

bool SecureKernel::sk_retype_to_shared(uint64_t frame_index, bool writable) {
    auto t = frames_.frame_type_of(frame_index);
    if (!t.ok() || t.value != FrameType::SK_DEFAULT) {
        trace_.emit("SK", "retype_to_shared",
                    {{"frame", std::to_string(frame_index)}, {"mapped", "0"}}, Status::Ok);
        return false;
    }
    FrameType next = writable ? FrameType::SK_SHARED_RW : FrameType::SK_SHARED_RO;
    frames_.retype(DomainCode::SK, frame_index, FrameType::SK_DEFAULT, next);
    trace_.emit("SK", "retype_to_shared",
                {{"frame", std::to_string(frame_index)},
                 {"new", std::string(to_string(next))},
                 {"mapped", "1"}},
                Status::Ok);
    return true;
}

} // namespace sptmsim
