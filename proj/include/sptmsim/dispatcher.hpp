// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "sptmsim/core.hpp"
#include "sptmsim/tables.hpp"
#include "sptmsim/trace.hpp"

namespace sptmsim {

// Argument block carried by a gate call, up to eight words.
struct CallRegs {
    std::array<uint64_t, 8> regs{};
    uint64_t& operator[](size_t i) { return regs[i]; }
    uint64_t operator[](size_t i) const { return regs[i]; }
};

struct GateCall {
    DispatchTarget target;
    CallRegs regs;
    DomainCode caller_domain = DomainCode::SPTM;
};

struct HandlerResult {
    Status status = Status::Ok;
    uint64_t ret = 0;
};

using GateHandler = std::function<HandlerResult(const GateCall&)>;

struct DispatchRegistration {
    uint8_t table_id = 0;
    std::string label;      // handler reference in traces
    uint8_t permissions = 0; // bit d set => domain d may call
    GateHandler handler;
};

struct IommuRegistration {
    uint8_t iommu_id = 0;
    uint8_t table_id = 0;
    uint8_t permissions = 0;
    bool unlisted = false;
};

// Per-CPU monitor execution state. The reference simulator runs one.
struct MonitorState {
    uint8_t current_state = 0;
    std::optional<DomainCode> caller_domain;
    bool interrupts_masked = false;
};

// Internal event ids with recovered meaning.
inline constexpr uint8_t kEventDefault = 0x2;
inline constexpr uint8_t kEventEnterTxm = 0x3;
inline constexpr uint8_t kEventEnterSk = 0x4;
inline constexpr uint8_t kEventReturn = 0x5;

struct DispatchOutcome {
    Status status = Status::Ok;
    const TransitionEntry* transition = nullptr;
    const DispatchRegistration* handler = nullptr; // set when the flag requested dispatch
    uint64_t ret = 0;                              // handler return word
};

// The monitor call surface: registration structures, gate entries, and
// the internal state machine.
class Dispatcher {
public:
    Dispatcher(const RuleTables& rules, Trace& trace);

    // Boot-time registration, performed from monitor-internal code.
    Status register_dispatch_table(const DispatchRegistration& reg, DomainCode caller_domain);
    Status register_iommu(IommuRegistration reg, std::string label, GateHandler handler);

    // Dynamic registration into the special dispatch structure (SK/TXM).
    Status register_special(DomainCode domain, uint8_t function_id, std::string label,
                            uint8_t permissions, GateHandler handler);

    Outcome<uint8_t> event_for_genter(const DispatchTarget& target) const;

    // Runs one transition. Writes the entry's domain to the caller-domain
    // field before the permission check; state advances only on success.
    DispatchOutcome step_state(MonitorState& monitor, uint8_t event, const GateCall& call);

    DispatchOutcome genter(DomainCode caller, const DispatchTarget& target, const CallRegs& regs,
                           MonitorState& monitor);
    DispatchOutcome svc_call(uint16_t imm, const DispatchTarget& target, const CallRegs& regs,
                             MonitorState& monitor);
    DispatchOutcome hvc_call(const DispatchTarget& target, const CallRegs& regs,
                             MonitorState& monitor);

    const DispatchRegistration* core_registration(DomainCode domain, uint8_t table_id) const;
    const DispatchRegistration* special_registration(DomainCode domain, uint8_t function_id) const;
    const std::map<std::pair<uint8_t, uint8_t>, DispatchRegistration>& core_registry() const {
        return core_;
    }
    const std::map<std::pair<uint8_t, uint8_t>, DispatchRegistration>& special_registry() const {
        return special_;
    }
    const std::vector<IommuRegistration>& iommu_registrations() const { return iommus_; }

private:
    DispatchOutcome control_function(uint8_t code, MonitorState& monitor);
    DispatchOutcome dispatch_gate(uint8_t event, const DispatchTarget& target,
                                  const CallRegs& regs, MonitorState& monitor);

    const RuleTables& rules_;
    Trace& trace_;
    // key: (domain, table or function id)
    std::map<std::pair<uint8_t, uint8_t>, DispatchRegistration> core_;
    std::map<std::pair<uint8_t, uint8_t>, DispatchRegistration> special_;
    std::vector<IommuRegistration> iommus_;
};

} // namespace sptmsim
