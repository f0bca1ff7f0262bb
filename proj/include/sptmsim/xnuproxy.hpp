// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sptmsim/tables.hpp"
#include "sptmsim/trace.hpp"

namespace sptmsim {

// Thread execution-state flags.
namespace th_flag {
inline constexpr uint32_t RPC = 0x1;
inline constexpr uint32_t UPCALL = 0x2;
inline constexpr uint32_t SCHEDULER_REQUEST = 0x4;
inline constexpr uint32_t XNUPROXY = 0x8;
inline constexpr uint32_t SCHEDULER_CALL = 0x10;
inline constexpr uint32_t STOP_UPCALL_PENDING = 0x20;
} // namespace th_flag
inline constexpr uint32_t kIntStateExecution = 0x1;

struct IpcBuffer {
    std::vector<uint64_t> mr;
    std::vector<uint64_t> scr;
    std::vector<uint64_t> dcr;
    std::optional<uint64_t> endpoint_field;
};
// Slot of the message tag inside mr; the return-value word follows it.
inline constexpr size_t kIpcMrTagSlot = 0;
inline constexpr size_t kIpcMrRetvalSlot = 1;

struct SimThread {
    uint64_t thread_id = 0;
    uint32_t flags = 0;
    uint32_t intstate = 0;
    std::optional<uint64_t> scid;
    std::optional<IpcBuffer> ipc_buffer;
};

// Message tag layout: mr_count 0..5, cap_count 6..8, unwrapped 9..11,
// non_blocking 12, label 16..31.
struct MessageTagFields {
    uint8_t mr_count = 0;   // 6 bits
    uint8_t cap_count = 0;  // 3 bits
    uint8_t unwrapped = 0;  // 3 bits
    bool non_blocking = false;
    uint16_t label = 0;

    bool operator==(const MessageTagFields&) const = default;
};

Outcome<uint64_t> pack_tag(const MessageTagFields& fields);
MessageTagFields unpack_tag(uint64_t word);

enum class ProxyStatus : uint8_t { None = 0, Processing = 1, Upcall = 2 };

namespace proxy_cmd {
inline constexpr uint8_t SETUP = 1;
inline constexpr uint8_t CONTEXT_ALLOCATE = 2;
inline constexpr uint8_t CONTEXT_FREE = 3;
inline constexpr uint8_t RESOURCE_INFO = 6;
} // namespace proxy_cmd

struct ResourceInfo {
    bool end_marker = true;
    std::string domain;
    std::string name;
    std::string type;
    uint64_t res_id = 0;
};

struct ProxyMessage {
    uint8_t cmd = 0;
    uint64_t server_id = 0;
    ProxyStatus status = ProxyStatus::None;
    uint64_t request_index = 0; // RESOURCE_INFO cursor
    uint64_t word0 = 0;         // command-specific response word
    ResourceInfo resource;      // RESOURCE_INFO response
};

// The secure-world request broker: management commands, IPC-buffer
// allocation, scheduling-context ids, and endpoint-call delivery.
class XnuProxy {
public:
    struct Config {
        size_t mr_words = 32;
        size_t scr_words = 8;
        size_t dcr_words = 8;
    };

    XnuProxy(const RuleTables& rules, Trace& trace, Config config = {});

    // World wiring: the sk_enter path and the endpoint-id resolver.
    void set_enter_secure(std::function<Status(SimThread&)> fn) { enter_secure_ = std::move(fn); }
    void set_service_resolver(std::function<bool(uint64_t)> fn) {
        service_resolver_ = std::move(fn);
    }

    void set_booted(bool b) { booted_ = b; }
    bool booted() const { return booted_; }

    Outcome<uint64_t> allocate_ipc_buffer(SimThread& thread);
    Status free_context(SimThread& thread);

    Status proxy_send(ProxyMessage& msg, SimThread& thread);

    // Delivers an endpoint call through the SK enter path and returns the
    // reply tag and the buffer's return-value word.
    Outcome<std::pair<uint64_t, uint64_t>> endpoint_call(SimThread& thread, uint64_t endpoint_id,
                                                         uint64_t tag);

    // GL0-side handling, invoked when the secure kernel hands control to
    // GL0. Serves the pending management command or the thread's staged
    // endpoint call.
    Status secure_step();

    uint64_t xnuproxy_scid() const { return kXnuproxyScid; }
    const std::string& command_name(uint8_t cmd) const;

    static constexpr uint64_t kXnuproxyScid = 0;

private:
    Status serve_command(ProxyMessage& msg);

    const RuleTables& rules_;
    Trace& trace_;
    Config config_;
    bool booted_ = false;
    uint64_t next_scid_ = 1;
    std::set<uint64_t> dead_scids_;
    std::function<Status(SimThread&)> enter_secure_;
    std::function<bool(uint64_t)> service_resolver_;

    // Shared message slot and the thread bound to the in-flight request.
    ProxyMessage* slot_ = nullptr;
    SimThread* current_thread_ = nullptr;
};

} // namespace sptmsim
