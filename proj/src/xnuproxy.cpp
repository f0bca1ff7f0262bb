// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/xnuproxy.hpp"

namespace sptmsim {

namespace {
constexpr uint64_t kMrCountMask = 0x3f;
constexpr uint64_t kCapCountMask = 0x7;
constexpr uint64_t kUnwrappedMask = 0x7;
constexpr uint64_t kLabelMask = 0xffff;
constexpr int kCapShift = 6;
constexpr int kUnwrappedShift = 9;
constexpr int kNonBlockingShift = 12;
constexpr int kLabelShift = 16;
} // namespace

Outcome<uint64_t> pack_tag(const MessageTagFields& f) {
    if (f.mr_count > kMrCountMask || f.cap_count > kCapCountMask || f.unwrapped > kUnwrappedMask)
        return Outcome<uint64_t>::fail(Status::FieldOverflow);
    uint64_t raw = static_cast<uint64_t>(f.mr_count) |
                   (static_cast<uint64_t>(f.cap_count) << kCapShift) |
                   (static_cast<uint64_t>(f.unwrapped) << kUnwrappedShift) |
                   (static_cast<uint64_t>(f.non_blocking) << kNonBlockingShift) |
                   (static_cast<uint64_t>(f.label) << kLabelShift);
    return Outcome<uint64_t>::success(raw);
}

MessageTagFields unpack_tag(uint64_t word) {
    MessageTagFields f;
    f.mr_count = static_cast<uint8_t>(word & kMrCountMask);
    f.cap_count = static_cast<uint8_t>((word >> kCapShift) & kCapCountMask);
    f.unwrapped = static_cast<uint8_t>((word >> kUnwrappedShift) & kUnwrappedMask);
    f.non_blocking = ((word >> kNonBlockingShift) & 1) != 0;
    f.label = static_cast<uint16_t>((word >> kLabelShift) & kLabelMask);
    return f;
}

XnuProxy::XnuProxy(const RuleTables& rules, Trace& trace, Config config)
    : rules_(rules), trace_(trace), config_(config) {}

const std::string& XnuProxy::command_name(uint8_t cmd) const {
    static const std::string kUnknown = "UNKNOWN";
    if (cmd >= rules_.xnuproxy_commands.size()) return kUnknown;
    return rules_.xnuproxy_commands[cmd];
}

Outcome<uint64_t> XnuProxy::allocate_ipc_buffer(SimThread& thread) {
    if (thread.ipc_buffer.has_value()) return Outcome<uint64_t>::fail(Status::AlreadyAllocated);

    ProxyMessage msg;
    msg.cmd = proxy_cmd::CONTEXT_ALLOCATE;
    Status s = proxy_send(msg, thread);
    if (s != Status::Ok) return Outcome<uint64_t>::fail(s);

    IpcBuffer buf;
    buf.mr.assign(config_.mr_words, 0);
    buf.scr.assign(config_.scr_words, 0);
    buf.dcr.assign(config_.dcr_words, 0);
    thread.ipc_buffer = std::move(buf);
    thread.scid = msg.word0;
    trace_.emit("XNU", "ipc_buffer_allocated",
                {{"thread", std::to_string(thread.thread_id)},
                 {"scid", std::to_string(*thread.scid)}},
                Status::Ok);
    return Outcome<uint64_t>::success(*thread.scid);
}

Status XnuProxy::free_context(SimThread& thread) {
    if (!thread.ipc_buffer.has_value()) return Status::InvalidArgument;
    ProxyMessage msg;
    msg.cmd = proxy_cmd::CONTEXT_FREE;
    msg.request_index = thread.scid.value_or(0);
    Status s = proxy_send(msg, thread);
    if (s != Status::Ok) return s;
    // Freed scids stay dead forever; traces remain unambiguous.
    if (thread.scid) dead_scids_.insert(*thread.scid);
    thread.ipc_buffer.reset();
    thread.scid.reset();
    return Status::Ok;
}

Status XnuProxy::proxy_send(ProxyMessage& msg, SimThread& thread) {
    if (!booted_ && msg.cmd != proxy_cmd::SETUP) return Status::NotBooted;

    trace_.emit("XNU", "th_exclaves_state",
                {{"thread", std::to_string(thread.thread_id)}, {"set", "XNUPROXY"}}, Status::Ok);
    thread.flags |= th_flag::XNUPROXY;

    msg.server_id = kXnuproxyScid;
    msg.status = ProxyStatus::Processing;
    trace_.emit("XNU", "xnuproxy_send",
                {{"cmd", "XNUPROXY_CMD_" + command_name(msg.cmd)},
                 {"server_id", std::to_string(msg.server_id)}},
                Status::Ok);

    slot_ = &msg;
    current_thread_ = &thread;
    Status gate = enter_secure_ ? enter_secure_(thread) : secure_step();
    slot_ = nullptr;
    current_thread_ = nullptr;

    thread.flags &= ~th_flag::XNUPROXY;
    trace_.emit("XNU", "th_exclaves_state",
                {{"thread", std::to_string(thread.thread_id)}, {"clear", "XNUPROXY"}},
                Status::Ok);

    if (gate != Status::Ok && gate != Status::EnterGl0) return gate;
    if (msg.status != ProxyStatus::None) return Status::ProxyFailure;
    return Status::Ok;
}

Status XnuProxy::secure_step() {
    // Management command pending in the shared slot?
    if (slot_ != nullptr && slot_->status == ProxyStatus::Processing) {
        Status s = serve_command(*slot_);
        slot_->status = s == Status::Ok ? ProxyStatus::None : ProxyStatus::Processing;
        return s;
    }
    // Otherwise a staged endpoint call on the entering thread.
    if (current_thread_ != nullptr && current_thread_->ipc_buffer.has_value() &&
        current_thread_->ipc_buffer->endpoint_field.has_value()) {
        IpcBuffer& buf = *current_thread_->ipc_buffer;
        uint64_t endpoint = *buf.endpoint_field;
        // Service stub: echo the tag, answer success.
        uint64_t tag = buf.mr[kIpcMrTagSlot];
        buf.mr[kIpcMrTagSlot] = tag;
        buf.mr[kIpcMrRetvalSlot] = 0;
        buf.endpoint_field.reset();
        trace_.emit("xnuproxy", "downcall",
                    {{"endpoint", std::to_string(endpoint)}, {"tag", hex_u64(tag)}}, Status::Ok);
        return Status::Ok;
    }
    trace_.emit("xnuproxy", "secure_step", {{"note", "nothing pending"}}, Status::Ok);
    return Status::Ok;
}

Status XnuProxy::serve_command(ProxyMessage& msg) {
    switch (msg.cmd) {
    case proxy_cmd::SETUP:
        booted_ = true;
        msg.word0 = 0;
        break;
    case proxy_cmd::CONTEXT_ALLOCATE: msg.word0 = next_scid_++; break;
    case proxy_cmd::CONTEXT_FREE: msg.word0 = 0; break;
    case proxy_cmd::RESOURCE_INFO: {
        const auto& fixture = rules_.resources;
        if (msg.request_index < fixture.size()) {
            const auto& row = fixture[msg.request_index];
            msg.resource = ResourceInfo{false, row.domain, row.name, row.type,
                                        msg.request_index + 1};
        } else {
            msg.resource = ResourceInfo{};
        }
        break;
    }
    default:
        // Remaining management commands acknowledge without payload.
        msg.word0 = 0;
        break;
    }
    trace_.emit("xnuproxy", "serve_command",
                {{"cmd", "XNUPROXY_CMD_" + command_name(msg.cmd)}}, Status::Ok);
    return Status::Ok;
}

Outcome<std::pair<uint64_t, uint64_t>> XnuProxy::endpoint_call(SimThread& thread,
                                                               uint64_t endpoint_id,
                                                               uint64_t tag) {
    using Result = Outcome<std::pair<uint64_t, uint64_t>>;
    // Reentering Exclaves is not permitted while a call is in flight.
    if ((thread.flags & (th_flag::RPC | th_flag::XNUPROXY)) != 0)
        return Result::fail(Status::ReentryDenied);
    if (service_resolver_ && !service_resolver_(endpoint_id))
        return Result::fail(Status::ServiceUnknown);

    if (!thread.ipc_buffer.has_value()) {
        auto scid = allocate_ipc_buffer(thread);
        if (!scid.ok()) return Result::fail(scid.status);
    }

    IpcBuffer& buf = *thread.ipc_buffer;
    buf.mr[kIpcMrTagSlot] = tag;
    buf.endpoint_field = endpoint_id;

    thread.flags |= th_flag::RPC;
    trace_.emit("XNU", "endpoint_call",
                {{"thread", std::to_string(thread.thread_id)},
                 {"endpoint", std::to_string(endpoint_id)},
                 {"tag", hex_u64(tag)},
                 {"flag", "RPC"}},
                Status::Ok);

    current_thread_ = &thread;
    Status gate = enter_secure_ ? enter_secure_(thread) : secure_step();
    current_thread_ = nullptr;

    thread.flags &= ~th_flag::RPC;
    trace_.emit("XNU", "endpoint_call_return",
                {{"thread", std::to_string(thread.thread_id)},
                 {"endpoint", std::to_string(endpoint_id)},
                 {"tag", hex_u64(buf.mr[kIpcMrTagSlot])},
                 {"error", hex_u64(buf.mr[kIpcMrRetvalSlot])}},
                Status::Ok);

    if (gate != Status::Ok && gate != Status::EnterGl0) return Result::fail(gate);
    return Result::success({buf.mr[kIpcMrTagSlot], buf.mr[kIpcMrRetvalSlot]});
}

} // namespace sptmsim
