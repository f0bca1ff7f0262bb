// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/exclave_resources.hpp"

#include <algorithm>

namespace sptmsim {

namespace {
constexpr std::array<std::pair<ResourceKind, std::string_view>, 8> kKindNames = {{
    {ResourceKind::CONCLAVE_MANAGER, "CONCLAVE_MANAGER"},
    {ResourceKind::NOTIFICATION, "NOTIFICATION"},
    {ResourceKind::SERVICE, "SERVICE"},
    {ResourceKind::NAMED_BUFFER, "NAMED_BUFFER"},
    {ResourceKind::ARBITRATED_AUDIO_BUFFER, "ARBITRATED_AUDIO_BUFFER"},
    {ResourceKind::SENSOR, "SENSOR"},
    {ResourceKind::SHARED_MEMORY, "SHARED_MEMORY"},
    {ResourceKind::ARBITRATED_AUDIO_MEMORY, "ARBITRATED_AUDIO_MEMORY"},
}};

constexpr std::array<std::pair<TrapOperation, std::string_view>, 6> kOpNames = {{
    {TrapOperation::BOOT, "BOOT"},
    {TrapOperation::SENSOR_CREATE, "SENSOR_CREATE"},
    {TrapOperation::AUDIO_BUFFER_CREATE, "AUDIO_BUFFER_CREATE"},
    {TrapOperation::NAMED_BUFFER_CREATE, "NAMED_BUFFER_CREATE"},
    {TrapOperation::NOTIFICATION_RESOURCE_LOOKUP, "NOTIFICATION_RESOURCE_LOOKUP"},
    {TrapOperation::ENDPOINT_CALL, "ENDPOINT_CALL"},
}};
} // namespace

std::string_view to_string(ResourceKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "?";
}

std::optional<ResourceKind> resource_kind_from_string(std::string_view name) {
    for (const auto& [kind, n] : kKindNames)
        if (n == name) return kind;
    return std::nullopt;
}

std::string_view to_string(ConclaveState s) {
    switch (s) {
    case ConclaveState::NONE: return "NONE";
    case ConclaveState::ATTACHED: return "ATTACHED";
    case ConclaveState::RUNNING: return "RUNNING";
    case ConclaveState::STOPPED: return "STOPPED";
    case ConclaveState::SUSPENDED: return "SUSPENDED";
    }
    return "?";
}

std::string_view to_string(ConclaveRequest r) {
    switch (r) {
    case ConclaveRequest::NONE: return "CONCLAVE_R_NONE";
    case ConclaveRequest::LAUNCH: return "CONCLAVE_R_LAUNCH_REQUESTED";
    case ConclaveRequest::SUSPEND: return "CONCLAVE_R_SUSPEND_REQUESTED";
    case ConclaveRequest::STOP: return "CONCLAVE_R_STOP_REQUESTED";
    }
    return "?";
}

std::string_view to_string(LifecycleRequest r) {
    switch (r) {
    case LifecycleRequest::Launch: return "launch";
    case LifecycleRequest::Suspend: return "suspend";
    case LifecycleRequest::Resume: return "resume";
    case LifecycleRequest::Stop: return "stop";
    }
    return "?";
}

std::optional<LifecycleRequest> lifecycle_request_from_string(std::string_view name) {
    if (name == "launch") return LifecycleRequest::Launch;
    if (name == "suspend") return LifecycleRequest::Suspend;
    if (name == "resume") return LifecycleRequest::Resume;
    if (name == "stop") return LifecycleRequest::Stop;
    return std::nullopt;
}

ConclaveRequest request_code(LifecycleRequest r) {
    switch (r) {
    case LifecycleRequest::Launch: return ConclaveRequest::LAUNCH;
    case LifecycleRequest::Suspend: return ConclaveRequest::SUSPEND;
    // The request table has no resume code; resume reuses SUSPEND.
    case LifecycleRequest::Resume: return ConclaveRequest::SUSPEND;
    case LifecycleRequest::Stop: return ConclaveRequest::STOP;
    }
    return ConclaveRequest::NONE;
}

std::string_view to_string(TrapOperation op) {
    for (const auto& [o, name] : kOpNames)
        if (o == op) return name;
    return "?";
}

std::optional<TrapOperation> trap_operation_from_string(std::string_view name) {
    for (const auto& [o, n] : kOpNames)
        if (n == name) return o;
    return std::nullopt;
}

ExclaveResources::ExclaveResources(const RuleTables& rules, Trace& trace, XnuProxy& proxy)
    : rules_(rules), trace_(trace), proxy_(proxy) {}

Status ExclaveResources::init_one(const ResourceInfo& info) {
    if (info.name.size() > kResourceNameMax) return Status::InvalidArgument;
    auto kind = resource_kind_from_string(info.type);
    if (!kind) return Status::InvalidArgument;

    auto& domain_list = domains_[info.domain]; // ensure-or-create the domain

    // res_id must be unique within its domain.
    for (uint64_t existing : domain_list)
        if (existing == info.res_id) return Status::DuplicateResourceId;

    ExclaveResource res;
    res.domain = info.domain;
    res.name = info.name;
    res.kind = *kind;
    res.res_id = info.res_id;
    res.active = true;

    switch (res.kind) {
    case ResourceKind::SERVICE: {
        size_t services_in_domain = 0;
        for (uint64_t id : domain_list) {
            const ExclaveResource* r = find_resource(id);
            if (r != nullptr && r->kind == ResourceKind::SERVICE) ++services_in_domain;
        }
        if (services_in_domain + 1 > kConclaveServiceMax) return Status::TooManyServices;
        break;
    }
    case ResourceKind::NOTIFICATION:
        res.notification_listeners.clear();
        break;
    case ResourceKind::CONCLAVE_MANAGER: {
        res.conclave.emplace();
        if (control_factory_) {
            auto conn = control_factory_(res.res_id);
            if (!conn.ok()) return conn.status;
            res.conclave->control_connection = conn.value;
            res.connected = true;
        }
        break;
    }
    default: break;
    }

    resources_.push_back(std::move(res));
    by_id_[info.res_id] = resources_.size() - 1;
    domain_list.push_back(info.res_id);
    trace_.emit("XNU", "resource_registered",
                {{"domain", info.domain},
                 {"name", info.name},
                 {"type", info.type},
                 {"id", std::to_string(info.res_id)}},
                Status::Ok);
    return Status::Ok;
}

Status ExclaveResources::resource_init(SimThread& thread) {
    for (uint64_t index = 0;; ++index) {
        ProxyMessage msg;
        msg.cmd = proxy_cmd::RESOURCE_INFO;
        msg.request_index = index;
        Status s = proxy_.proxy_send(msg, thread);
        if (s != Status::Ok) return s;
        if (msg.resource.end_marker) break;
        s = init_one(msg.resource);
        if (s != Status::Ok) return s;
    }

    // Populate each conclave's service bitmap with the ids of services
    // sharing the conclave's domain. Managers live in com.apple.kernel
    // and are named after the domain they manage.
    for (auto& res : resources_) {
        if (res.kind != ResourceKind::CONCLAVE_MANAGER) continue;
        auto it = domains_.find(res.name);
        if (it == domains_.end()) continue;
        for (uint64_t id : it->second) {
            const ExclaveResource* r = find_resource(id);
            if (r == nullptr || r->kind != ResourceKind::SERVICE) continue;
            if (r->res_id >= kConclaveServiceMax) return Status::TooManyServices;
            res.conclave->service_bits.set(r->res_id);
        }
        trace_.emit("XNU", "conclave_services",
                    {{"conclave", res.name},
                     {"count", std::to_string(res.conclave->service_bits.count())}},
                    Status::Ok);
    }

    // Every resource gets a kernel-object port.
    for (auto& res : resources_) {
        PortRecord port;
        port.port_id = next_port_id_++;
        port.resource_id = res.res_id;
        res.port = port.port_id;
        ports_[port.port_id] = port;
    }

    booted_ = true;
    trace_.emit("XNU", "resource_init",
                {{"domains", std::to_string(domains_.size())},
                 {"resources", std::to_string(resources_.size())}},
                Status::Ok);
    return Status::Ok;
}

Outcome<uint64_t> ExclaveResources::lookup_service(std::string_view domain,
                                                   std::string_view name) const {
    auto it = domains_.find(domain);
    if (it == domains_.end()) return Outcome<uint64_t>::fail(Status::NotFound);
    // Duplicated names stay distinct records; lookup returns the first
    // registered.
    for (uint64_t id : it->second) {
        const ExclaveResource* r = find_resource(id);
        if (r != nullptr && r->name == name) return Outcome<uint64_t>::success(id);
    }
    return Outcome<uint64_t>::fail(Status::NotFound);
}

ExclaveResource* ExclaveResources::find_resource(uint64_t res_id) {
    auto it = by_id_.find(res_id);
    return it == by_id_.end() ? nullptr : &resources_[it->second];
}

const ExclaveResource* ExclaveResources::find_resource(uint64_t res_id) const {
    auto it = by_id_.find(res_id);
    return it == by_id_.end() ? nullptr : &resources_[it->second];
}

ExclaveResource* ExclaveResources::find_in_domain(std::string_view domain,
                                                  std::string_view name) {
    auto id = lookup_service(domain, name);
    return id.ok() ? find_resource(id.value) : nullptr;
}

Status ExclaveResources::conclave_attach(TaskRecord& task, const TaskRecord& caller,
                                         uint64_t manager_res_id) {
    ExclaveResource* manager = find_resource(manager_res_id);
    if (manager == nullptr || !manager->conclave.has_value()) return Status::NotFound;

    auto finish = [&](Status s) {
        trace_.emit(task.label, "conclave_attach",
                    {{"conclave", manager->name}, {"caller", caller.label}}, s);
        return s;
    };

    // Only launchd and spawn-entitled tasks may attach a conclave.
    if (!caller.is_launchd && !caller.has_entitlement(entitlement::kConclaveSpawn))
        return finish(Status::CallerNotEntitled);
    // The target task must be a conclave host or spawn-entitled itself.
    if (!task.has_entitlement(entitlement::kConclaveHost) &&
        !task.has_entitlement(entitlement::kConclaveSpawn))
        return finish(Status::TargetNotEntitled);
    if (manager->conclave->state != ConclaveState::NONE || task.conclave.has_value())
        return finish(Status::AlreadyAttached);

    manager->conclave->task = task.task_id;
    manager->conclave->state = ConclaveState::ATTACHED;
    task.conclave = manager_res_id;
    return finish(Status::Ok);
}

Status ExclaveResources::conclave_transition(uint64_t manager_res_id, LifecycleRequest request) {
    ExclaveResource* manager = find_resource(manager_res_id);
    if (manager == nullptr || !manager->conclave.has_value()) return Status::NotFound;
    ConclaveRecord& c = *manager->conclave;

    ConclaveState from = c.state;
    std::optional<ConclaveState> to;
    switch (request) {
    case LifecycleRequest::Launch:
        if (from == ConclaveState::ATTACHED) to = ConclaveState::RUNNING;
        break;
    case LifecycleRequest::Suspend:
        if (from == ConclaveState::RUNNING) to = ConclaveState::SUSPENDED;
        break;
    case LifecycleRequest::Resume:
        // Inferred edge: the state figure shows suspended conclaves
        // returning to RUNNING even though no resume request code exists.
        if (from == ConclaveState::SUSPENDED) to = ConclaveState::RUNNING;
        break;
    case LifecycleRequest::Stop:
        if (from == ConclaveState::RUNNING || from == ConclaveState::SUSPENDED)
            to = ConclaveState::STOPPED;
        break;
    }

    if (!to) {
        trace_.emit("XNU", "conclave_transition",
                    {{"conclave", manager->name},
                     {"from", std::string(to_string(from))},
                     {"request", std::string(to_string(request))}},
                    Status::IllegalTransition);
        return Status::IllegalTransition;
    }

    c.request = request_code(request);
    trace_.emit("XNU", "conclave_transition",
                {{"conclave", manager->name},
                 {"from", std::string(to_string(from))},
                 {"request", std::string(to_string(c.request))},
                 {"to", std::string(to_string(*to))}},
                Status::Ok);
    c.state = *to;
    c.request = ConclaveRequest::NONE;

    if (c.state == ConclaveState::STOPPED && c.control_connection.has_value()) {
        if (connection_closer_) connection_closer_(*c.control_connection);
        trace_.emit("XNU", "conclave_ipc_terminated", {{"conclave", manager->name}},
                    Status::Ok);
    }
    return Status::Ok;
}

Status ExclaveResources::conclave_ipc_guard(uint64_t manager_res_id) const {
    const ExclaveResource* manager = find_resource(manager_res_id);
    if (manager == nullptr || !manager->conclave.has_value()) return Status::Ok;
    switch (manager->conclave->state) {
    case ConclaveState::STOPPED: return Status::ConnectionClosed;
    case ConclaveState::SUSPENDED: return Status::ConclaveNotRunning;
    default: return Status::Ok;
    }
}

Outcome<uint64_t> ExclaveResources::create_port_name(uint64_t res_id, uint64_t ipc_space) {
    ExclaveResource* res = find_resource(res_id);
    if (res == nullptr || !res->port.has_value())
        return Outcome<uint64_t>::fail(Status::PortInvalid);
    if (res->use_count == 0) return Outcome<uint64_t>::fail(Status::UseCountZero);

    PortRecord& port = ports_[*res->port];

    // Arm a send right; if one already existed, the extra use count is
    // released.
    ++port.send_rights;
    if (port.send_rights > 1) --res->use_count;

    auto key = std::make_pair(ipc_space, port.port_id);
    auto it = port_names_.find(key);
    uint64_t name;
    if (it != port_names_.end()) {
        name = it->second;
    } else {
        name = 0x1003 + 0x100 * space_name_counts_[ipc_space]++;
        port_names_[key] = name;
    }
    trace_.emit("XNU", "create_port_name",
                {{"resource", res->name},
                 {"space", std::to_string(ipc_space)},
                 {"name", hex_u64(name)},
                 {"srights", std::to_string(port.send_rights)}},
                Status::Ok);
    return Outcome<uint64_t>::success(name);
}

const PortRecord* ExclaveResources::port_for_resource(uint64_t res_id) const {
    const ExclaveResource* res = find_resource(res_id);
    if (res == nullptr || !res->port.has_value()) return nullptr;
    auto it = ports_.find(*res->port);
    return it == ports_.end() ? nullptr : &it->second;
}

TrapResult ExclaveResources::exclaves_ctl_trap(TaskRecord& task, SimThread& thread,
                                               TrapOperation op, const std::string& identifier,
                                               std::vector<uint8_t>& buffer) {
    TrapResult result;
    auto finish = [&](Status s) {
        trace_.emit(task.label, "exclaves_ctl_trap",
                    {{"op", std::string(to_string(op))}, {"id", identifier}}, s);
        result.status = s;
        return result;
    };

    if (op == TrapOperation::BOOT) return finish(Status::InvalidArgument); // world-level op
    if (!booted_) return finish(Status::NotBooted);

    // Properly entitled tasks operating in the kernel domain, the kernel
    // itself, or tasks with a joined conclave.
    bool entitled = task.is_kernel || task.has_entitlement(entitlement::kKernelDomain) ||
                    task.conclave.has_value();
    if (!entitled) return finish(Status::NotEntitled);

    // The domain a task resolves resources in: its conclave's domain, or
    // the kernel domain for kernel-domain operators.
    std::string domain{kKernelDomainName};
    if (task.conclave.has_value()) {
        const ExclaveResource* manager = find_resource(*task.conclave);
        if (manager != nullptr) domain = manager->name;
    }

    switch (op) {
    case TrapOperation::SENSOR_CREATE:
    case TrapOperation::AUDIO_BUFFER_CREATE:
    case TrapOperation::NAMED_BUFFER_CREATE:
    case TrapOperation::NOTIFICATION_RESOURCE_LOOKUP: {
        if (op == TrapOperation::NAMED_BUFFER_CREATE && strict_firmware_)
            return finish(Status::ServiceNotSupported);
        auto id = lookup_service(domain, identifier);
        if (!id.ok()) return finish(Status::NotFound);
        ExclaveResource* res = find_resource(id.value);
        ++res->use_count; // the trap holds a use across the create
        auto name = create_port_name(id.value, task.task_id);
        if (!name.ok()) return finish(name.status);
        result.port_name = name.value;
        if (res->kind == ResourceKind::SENSOR) ++res->sensor_start_count;
        return finish(Status::Ok);
    }
    case TrapOperation::ENDPOINT_CALL: {
        uint64_t endpoint_id = 0;
        try {
            endpoint_id = std::stoull(identifier);
        } catch (...) {
            return finish(Status::InvalidArgument);
        }
        if (endpoint_id >= kConclaveServiceMax) return finish(Status::InvalidArgument);
        if (!task.conclave.has_value()) return finish(Status::InvalidArgument);
        const ExclaveResource* manager = find_resource(*task.conclave);
        if (manager == nullptr || !manager->conclave->service_bits.test(endpoint_id))
            return finish(Status::InvalidArgument);

        // Copy the caller buffer in, perform the call, copy back out.
        uint64_t tag = 0;
        for (size_t i = 0; i < sizeof(uint64_t) && i < buffer.size(); ++i)
            tag |= static_cast<uint64_t>(buffer[i]) << (8 * i);
        auto call = proxy_.endpoint_call(thread, endpoint_id, tag);
        if (!call.ok()) return finish(call.status);
        result.tag = call.value.first;
        result.error_word = call.value.second;
        buffer.resize(sizeof(uint64_t));
        for (size_t i = 0; i < sizeof(uint64_t); ++i)
            buffer[i] = static_cast<uint8_t>(result.tag >> (8 * i));
        return finish(Status::Ok);
    }
    default: return finish(Status::InvalidArgument);
    }
}

} // namespace sptmsim
