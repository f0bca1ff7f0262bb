// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <memory>
#include <string>

#include "sptmsim/dispatcher.hpp"
#include "sptmsim/exclave_resources.hpp"
#include "sptmsim/frame_table.hpp"
#include "sptmsim/page_mapper.hpp"
#include "sptmsim/secure_kernel.hpp"
#include "sptmsim/tightbeam.hpp"
#include "sptmsim/txm.hpp"
#include "sptmsim/xnuproxy.hpp"

namespace sptmsim {

struct WorldConfig {
    uint64_t frame_count = 64;
    bool hibernation = false;
    bool strict_firmware = false;
    bool relax_sprr = false;
    Tightbeam::Mode tightbeam_mode = Tightbeam::Mode::Kernel;
    // Frames swept to TXM_RW during the TXM boot rx-region pass.
    uint64_t txm_rx_first_frame = 8;
    uint64_t txm_rx_frame_count = 4;
};

// Composes every subsystem into one deterministic simulated machine and
// owns the boot choreography.
class World {
public:
    explicit World(const RuleTables& rules, WorldConfig config = {});

    // Monitor-side boot: bootstrap + IOMMU dispatch registrations, the
    // TXM and SK boot windows, then the handoff into the runtime state.
    Status boot();

    // Exclaves-side boot: xnuproxy setup and resource enumeration,
    // driven from the given thread.
    Status exclaves_boot(SimThread& thread);

    DispatchOutcome genter_from_xnu(const DispatchTarget& target, const CallRegs& regs = {});
    DispatchOutcome svc_from_txm(uint16_t imm, const DispatchTarget& target,
                                 const CallRegs& regs = {});
    Status svc_from_gl0(const Gl0ServiceRequest& request);
    DispatchOutcome hvc_from_sk(const DispatchTarget& target, const CallRegs& regs = {});

    SimThread& thread(uint64_t thread_id);
    TaskRecord& task(uint64_t task_id);
    TaskRecord& add_task(uint64_t task_id, std::string label, bool is_launchd, bool is_kernel,
                         std::set<std::string, std::less<>> entitlements);

    bool booted() const { return booted_; }

    Trace trace;
    const RuleTables& rules;
    WorldConfig config;
    FrameTable frames;
    PageMapper mapper;
    Dispatcher dispatcher;
    MonitorState monitor;
    TxmMonitor txm;
    SecureKernel sk;
    XnuProxy xnuproxy;
    ExclaveResources resources;
    Tightbeam tightbeam;

private:
    void install_sptm_tables();
    void wire_modules();
    HandlerResult xnu_bootstrap_endpoint(const GateCall& call);
    HandlerResult txm_bootstrap_endpoint(const GateCall& call);
    HandlerResult sk_bootstrap_endpoint(const GateCall& call);

    bool booted_ = false;
    std::map<uint64_t, SimThread> threads_;
    std::map<uint64_t, TaskRecord> tasks_;
    SimThread* gate_thread_ = nullptr; // thread bound to the in-flight gate call
};

} // namespace sptmsim
