// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/dispatcher.hpp"

namespace sptmsim {

namespace {
std::string domain_or_dash(const std::optional<DomainCode>& d) {
    return d ? std::string(to_string(*d)) : "-";
}
} // namespace

Dispatcher::Dispatcher(const RuleTables& rules, Trace& trace) : rules_(rules), trace_(trace) {}

Status Dispatcher::register_dispatch_table(const DispatchRegistration& reg,
                                           DomainCode caller_domain) {
    Detail detail = {{"table", dispatch_table_name(reg.table_id)},
                     {"entry", reg.label},
                     {"perms", hex_u64(reg.permissions)}};
    if (is_control_code(reg.table_id)) {
        trace_.emit(std::string(to_string(caller_domain)), "register_dispatch_table",
                    std::move(detail), Status::ControlCodeReserved);
        return Status::ControlCodeReserved;
    }
    auto key = std::make_pair(static_cast<uint8_t>(caller_domain), reg.table_id);
    if (core_.count(key) != 0) {
        trace_.emit(std::string(to_string(caller_domain)), "register_dispatch_table",
                    std::move(detail), Status::DuplicateRegistration);
        return Status::DuplicateRegistration;
    }
    core_.emplace(key, reg);
    trace_.emit(std::string(to_string(caller_domain)), "register_dispatch_table",
                std::move(detail), Status::Ok);
    return Status::Ok;
}

Status Dispatcher::register_iommu(IommuRegistration reg, std::string label, GateHandler handler) {
    if (reg.iommu_id > 7) {
        trace_.emit("SPTM", "register_iommu", {{"iommu", std::to_string(reg.iommu_id)}},
                    Status::UnknownIommu);
        return Status::UnknownIommu;
    }
    // NVME admits {TXM, SK}; every other IOMMU admits XNU only.
    reg.permissions = reg.iommu_id == 2 ? 0x12 : 0x02;
    reg.unlisted = rules_.iommu_names.count(reg.iommu_id) == 0;

    DispatchRegistration dr;
    dr.table_id = reg.table_id;
    dr.label = std::move(label);
    dr.permissions = reg.permissions;
    dr.handler = std::move(handler);
    Status s = register_dispatch_table(dr, DomainCode::SPTM);
    if (s != Status::Ok) return s;

    iommus_.push_back(reg);
    trace_.emit("SPTM", "register_iommu",
                {{"iommu", std::to_string(reg.iommu_id)},
                 {"table", dispatch_table_name(reg.table_id)},
                 {"perms", hex_u64(reg.permissions)},
                 {"listed", reg.unlisted ? "no" : "yes"}},
                Status::Ok);
    return Status::Ok;
}

Status Dispatcher::register_special(DomainCode domain, uint8_t function_id, std::string label,
                                    uint8_t permissions, GateHandler handler) {
    auto key = std::make_pair(static_cast<uint8_t>(domain), function_id);
    Detail detail = {{"domain", std::string(to_string(domain))},
                     {"function", std::to_string(function_id)},
                     {"entry", label},
                     {"perms", hex_u64(permissions)}};
    if (special_.count(key) != 0) {
        trace_.emit(std::string(to_string(domain)), "register_special_dispatch",
                    std::move(detail), Status::DuplicateRegistration);
        return Status::DuplicateRegistration;
    }
    DispatchRegistration reg;
    reg.table_id = function_id;
    reg.label = std::move(label);
    reg.permissions = permissions;
    reg.handler = std::move(handler);
    special_.emplace(key, std::move(reg));
    trace_.emit(std::string(to_string(domain)), "register_special_dispatch", std::move(detail),
                Status::Ok);
    return Status::Ok;
}

Outcome<uint8_t> Dispatcher::event_for_genter(const DispatchTarget& target) const {
    switch (target.domain) {
    case DomainCode::SPTM: {
        if (target.table == 0) {
            uint8_t ep = static_cast<uint8_t>(target.endpoint & 0xff);
            if (ep == 0x1b) return Outcome<uint8_t>::success(0xc);
            if (ep == 0x1c) return Outcome<uint8_t>::success(0xd);
            if (ep == 0x1e) return Outcome<uint8_t>::success(0xe);
        }
        return Outcome<uint8_t>::success(kEventDefault);
    }
    case DomainCode::TXM: return Outcome<uint8_t>::success(kEventEnterTxm);
    case DomainCode::SK: return Outcome<uint8_t>::success(kEventEnterSk);
    case DomainCode::XNU:
    case DomainCode::XNU_HIB:
    default: return Outcome<uint8_t>::fail(Status::UnroutableDomain);
    }
}

const DispatchRegistration* Dispatcher::core_registration(DomainCode domain,
                                                          uint8_t table_id) const {
    auto it = core_.find({static_cast<uint8_t>(domain), table_id});
    return it == core_.end() ? nullptr : &it->second;
}

const DispatchRegistration* Dispatcher::special_registration(DomainCode domain,
                                                             uint8_t function_id) const {
    auto it = special_.find({static_cast<uint8_t>(domain), function_id});
    return it == special_.end() ? nullptr : &it->second;
}

DispatchOutcome Dispatcher::step_state(MonitorState& monitor, uint8_t event,
                                       const GateCall& call) {
    DispatchOutcome out;
    uint8_t state_before = monitor.current_state;

    auto finish = [&](Status s) {
        Detail detail = {{"event", hex_u64(event)},
                         {"state", hex_u64(state_before)},
                         {"next", hex_u64(monitor.current_state)},
                         {"caller", domain_or_dash(monitor.caller_domain)},
                         {"target", hex_u64(call.target.raw)}};
        if (out.transition != nullptr) {
            detail.emplace_back("action", out.transition->action);
            if (!out.transition->panic.empty())
                detail.emplace_back("panic", out.transition->panic);
        }
        if (out.handler != nullptr) detail.emplace_back("entry", out.handler->label);
        trace_.emit("SPTM", "step_state", std::move(detail), s);
        out.status = s;
        return out;
    };

    if (event > kMaxEvent) return finish(Status::InvalidEvent);
    if (monitor.current_state > kMaxState) return finish(Status::InvalidState);

    const TransitionEntry* entry = rules_.transition(monitor.current_state, event);
    if (entry == nullptr) return finish(Status::ForbiddenTransition);
    out.transition = entry;

    // The transition table, not the caller, decides the caller-domain
    // field. Entries without a domain leave it unchanged.
    if (entry->domain) monitor.caller_domain = *entry->domain;

    if (entry->flag & 1) {
        const DispatchRegistration* reg;
        if (call.target.domain == DomainCode::SPTM || call.target.domain == DomainCode::XNU)
            reg = core_registration(call.target.domain, call.target.table);
        else
            reg = special_registration(call.target.domain, call.target.table);
        if (reg == nullptr) return finish(Status::NoHandlerRegistered);
        if (!monitor.caller_domain ||
            ((reg->permissions >> static_cast<uint8_t>(*monitor.caller_domain)) & 1) == 0)
            return finish(Status::PermissionDenied);
        out.handler = reg;
    }

    monitor.current_state = entry->next_state;
    return finish(Status::Ok);
}

DispatchOutcome Dispatcher::control_function(uint8_t code, MonitorState& monitor) {
    DispatchOutcome out;
    switch (code) {
    case kControlReturnToCaller: out.status = Status::ReturnToCaller; break;
    case kControlFe: out.status = Status::ContextRestore; break;
    default: out.status = Status::ExceptionStateSaved; break;
    }
    trace_.emit("SPTM", "control_function",
                {{"code", hex_u64(code)}, {"caller", domain_or_dash(monitor.caller_domain)}},
                out.status);
    return out;
}

DispatchOutcome Dispatcher::dispatch_gate(uint8_t event, const DispatchTarget& target,
                                          const CallRegs& regs, MonitorState& monitor) {
    GateCall call{target, regs, monitor.caller_domain.value_or(DomainCode::SPTM)};
    DispatchOutcome out = step_state(monitor, event, call);
    if (out.status != Status::Ok) return out;

    if (out.handler != nullptr && out.handler->handler) {
        call.caller_domain = monitor.caller_domain.value_or(call.caller_domain);
        HandlerResult hr = out.handler->handler(call);
        out.status = hr.status;
        out.ret = hr.ret;
        // Completion returns control to the interrupted context.
        GateCall ret_call{target, regs, call.caller_domain};
        step_state(monitor, kEventReturn, ret_call);
    }
    return out;
}

DispatchOutcome Dispatcher::genter(DomainCode caller, const DispatchTarget& target,
                                   const CallRegs& regs, MonitorState& monitor) {
    trace_.emit(std::string(to_string(caller)), "genter", {{"x16", hex_u64(target.raw)}},
                Status::Ok);
    auto event = event_for_genter(target);
    if (!event.ok()) {
        trace_.emit(std::string(to_string(caller)), "genter_unroutable",
                    {{"x16", hex_u64(target.raw)}}, event.status);
        DispatchOutcome out;
        out.status = event.status;
        return out;
    }
    return dispatch_gate(event.value, target, regs, monitor);
}

DispatchOutcome Dispatcher::svc_call(uint16_t imm, const DispatchTarget& target,
                                     const CallRegs& regs, MonitorState& monitor) {
    DispatchOutcome out;
    switch (imm) {
    case 37:
        monitor.interrupts_masked = false;
        trace_.emit("SPTM", "svc_interrupts", {{"imm", "37"}, {"masked", "0"}}, Status::Ok);
        out.status = Status::ReturnToCaller;
        return out;
    case 38:
        monitor.interrupts_masked = true;
        trace_.emit("SPTM", "svc_interrupts", {{"imm", "38"}, {"masked", "1"}}, Status::Ok);
        out.status = Status::ReturnToCaller;
        return out;
    case 0:
        if (is_control_code(target.table)) return control_function(target.table, monitor);
        return dispatch_gate(kEventDefault, target, regs, monitor);
    default:
        // Unhandled immediates fall into the wait-for-event loop.
        trace_.emit("SPTM", "svc_hang", {{"imm", std::to_string(imm)}}, Status::Hang);
        out.status = Status::Hang;
        return out;
    }
}

DispatchOutcome Dispatcher::hvc_call(const DispatchTarget& target, const CallRegs& regs,
                                     MonitorState& monitor) {
    if (is_control_code(target.table)) return control_function(target.table, monitor);
    return dispatch_gate(kEventDefault, target, regs, monitor);
}

} // namespace sptmsim
