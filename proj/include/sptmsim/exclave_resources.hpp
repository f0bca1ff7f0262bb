// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <bitset>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sptmsim/trace.hpp"
#include "sptmsim/xnuproxy.hpp"

namespace sptmsim {

inline constexpr size_t kResourceNameMax = 128;
inline constexpr size_t kConclaveServiceMax = 192;

namespace entitlement {
inline constexpr std::string_view kKernelDomain = "com.apple.private.exclaves.kernel-domain";
inline constexpr std::string_view kConclaveSpawn = "com.apple.private.exclaves.conclave-spawn";
inline constexpr std::string_view kConclaveHost = "com.apple.private.exclaves.conclave-host";
} // namespace entitlement

inline constexpr std::string_view kKernelDomainName = "com.apple.kernel";

enum class ResourceKind : uint8_t {
    CONCLAVE_MANAGER,
    NOTIFICATION,
    SERVICE,
    NAMED_BUFFER,
    ARBITRATED_AUDIO_BUFFER,
    SENSOR,
    SHARED_MEMORY,
    ARBITRATED_AUDIO_MEMORY,
};
std::string_view to_string(ResourceKind k);
std::optional<ResourceKind> resource_kind_from_string(std::string_view name);

enum class ConclaveState : uint8_t {
    NONE = 0,
    ATTACHED = 1,
    RUNNING = 2,
    STOPPED = 3,
    SUSPENDED = 4,
};
enum class ConclaveRequest : uint8_t {
    NONE = 0,
    LAUNCH = 1,
    SUSPEND = 2,
    STOP = 4,
};
std::string_view to_string(ConclaveState s);
std::string_view to_string(ConclaveRequest r);

// Requested lifecycle moves. Resume reuses the SUSPEND request code; the
// request table carries no resume value.
enum class LifecycleRequest : uint8_t { Launch, Suspend, Resume, Stop };
std::string_view to_string(LifecycleRequest r);
std::optional<LifecycleRequest> lifecycle_request_from_string(std::string_view name);
ConclaveRequest request_code(LifecycleRequest r);

struct ConclaveRecord {
    ConclaveState state = ConclaveState::NONE;
    ConclaveRequest request = ConclaveRequest::NONE;
    bool active_downcall = false;
    bool active_stopcall = false;
    bool active_detach = false;
    std::optional<uint64_t> control_connection; // tightbeam connection id
    std::optional<uint64_t> task;
    std::optional<uint64_t> downcall_thread;
    std::bitset<kConclaveServiceMax> service_bits;
};

struct ExclaveResource {
    std::string domain;
    std::string name;
    ResourceKind kind = ResourceKind::SERVICE;
    uint64_t res_id = 0;
    uint32_t use_count = 0;
    std::optional<uint64_t> port;
    bool active = false;
    bool connected = false;

    // kind-specific payloads
    std::optional<ConclaveRecord> conclave;
    uint64_t sensor_start_count = 0;
    std::vector<uint64_t> notification_listeners;
};

struct TaskRecord {
    uint64_t task_id = 0;
    std::string label;
    std::set<std::string, std::less<>> entitlements;
    bool is_launchd = false;
    bool is_kernel = false;
    std::optional<uint64_t> conclave; // manager resource id

    bool has_entitlement(std::string_view e) const { return entitlements.count(e) != 0; }
};

struct PortRecord {
    uint64_t port_id = 0;
    uint64_t resource_id = 0;
    uint32_t send_rights = 0;
};

enum class TrapOperation : uint8_t {
    BOOT,
    SENSOR_CREATE,
    AUDIO_BUFFER_CREATE,
    NAMED_BUFFER_CREATE,
    NOTIFICATION_RESOURCE_LOOKUP,
    ENDPOINT_CALL,
};
std::string_view to_string(TrapOperation op);
std::optional<TrapOperation> trap_operation_from_string(std::string_view name);

struct TrapResult {
    Status status = Status::Ok;
    uint64_t port_name = 0;
    uint64_t tag = 0;
    uint64_t error_word = 0;
};

// Exclave resource registry, domain scoping, conclave lifecycle,
// entitlement checks, and the user-facing control-trap surface. The
// registry is immutable after resource_init.
class ExclaveResources {
public:
    ExclaveResources(const RuleTables& rules, Trace& trace, XnuProxy& proxy);

    // Walks RESOURCE_INFO until exhaustion, creating domains and
    // resources, running kind-specific init, then populating conclave
    // service bitmaps and allocating a kernel-object port per resource.
    Status resource_init(SimThread& thread);

    Outcome<uint64_t> lookup_service(std::string_view domain, std::string_view name) const;
    ExclaveResource* find_resource(uint64_t res_id);
    const ExclaveResource* find_resource(uint64_t res_id) const;
    ExclaveResource* find_in_domain(std::string_view domain, std::string_view name);

    Status conclave_attach(TaskRecord& task, const TaskRecord& caller, uint64_t manager_res_id);
    Status conclave_transition(uint64_t manager_res_id, LifecycleRequest request);

    Outcome<uint64_t> create_port_name(uint64_t res_id, uint64_t ipc_space);

    TrapResult exclaves_ctl_trap(TaskRecord& task, SimThread& thread, TrapOperation op,
                                 const std::string& identifier, std::vector<uint8_t>& buffer);

    bool booted() const { return booted_; }
    void set_strict_firmware(bool strict) { strict_firmware_ = strict; }

    // Conclave control connections are created through this hook at init.
    using ControlConnectionFactory = std::function<Outcome<uint64_t>(uint64_t res_id)>;
    void set_control_connection_factory(ControlConnectionFactory f) {
        control_factory_ = std::move(f);
    }
    // Invoked when a conclave stops, to terminate its IPC.
    void set_connection_closer(std::function<void(uint64_t)> f) {
        connection_closer_ = std::move(f);
    }

    const std::map<std::string, std::vector<uint64_t>, std::less<>>& domain_table() const {
        return domains_;
    }
    const std::deque<ExclaveResource>& all_resources() const { return resources_; }

    // Conclave state consulted on tightbeam sends to a manager's control
    // connection.
    Status conclave_ipc_guard(uint64_t manager_res_id) const;

private:
    Status init_one(const ResourceInfo& info);
    const PortRecord* port_for_resource(uint64_t res_id) const;

    const RuleTables& rules_;
    Trace& trace_;
    XnuProxy& proxy_;
    bool booted_ = false;
    bool strict_firmware_ = false;

    std::deque<ExclaveResource> resources_;
    std::map<std::string, std::vector<uint64_t>, std::less<>> domains_; // name -> res ids
    std::map<uint64_t, size_t> by_id_;

    std::map<uint64_t, PortRecord> ports_; // port_id -> record
    std::map<std::pair<uint64_t, uint64_t>, uint64_t> port_names_; // (space, port) -> name
    std::map<uint64_t, uint64_t> space_name_counts_;
    uint64_t next_port_id_ = 1;

    ControlConnectionFactory control_factory_;
    std::function<void(uint64_t)> connection_closer_;
};

} // namespace sptmsim
