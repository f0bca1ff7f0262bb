// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sptmsim/trace.hpp"

namespace sptmsim {

enum class TbTransportKind : uint8_t {
    NULL_TRANSPORT = 1,
    MACH = 2,
    EVE_4 = 4,
    EVE_5 = 5,
    XNU = 7,
    DARWIN = 8,
    UNIX = 9,
    DELEGATED = 10,
    AFK = 11,
};
std::string_view to_string(TbTransportKind k);

enum class TbMessageState : uint8_t {
    UNINITIALIZED = 0,
    PREPARING = 1,
    READY = 2,
    SENT = 3,
    RECEIVED = 4,
};
enum class TbDisposition : uint8_t { QUERY = 1, REPLY = 2 };
std::string_view to_string(TbMessageState s);
std::string_view to_string(TbDisposition d);

struct TbEndpoint {
    uint32_t ep_type = 0;
    uint64_t options = 0;
    uint64_t interface_id = 0;
    uint64_t data = 0; // resource id for XNU transports
    bool valid = false;
};

struct TbTransport {
    TbTransportKind kind = TbTransportKind::NULL_TRANSPORT;
    uint64_t endpoint_data = 0;
    std::string creation_fn; // behavior table reference
    uint64_t tx_buffer_size = 4096;
};

struct TbBuffer {
    uint64_t type_word = 0;
    uint64_t wrapping = 0; // flag word; must be zero at construction
    uint64_t offset = 0;
    uint64_t size = 0;
    std::vector<uint8_t> payload;
};

struct TbMessage {
    uint64_t msg_id = 0;
    TbMessageState state = TbMessageState::UNINITIALIZED;
    TbDisposition disposition = TbDisposition::QUERY;
    uint64_t connection_id = 0;
    uint64_t client_id = 0;
    uint64_t num_caps = 0;
    TbBuffer buffer;
};

struct TbConnection {
    uint64_t conn_id = 0;
    TbTransport transport;
    uint64_t observer_notifications = 0;
    bool has_observer = false;
    bool closed = false;
    // Consulted before every send; conclave control connections bind this
    // to their manager's lifecycle state.
    std::function<Status()> guard;
};

// The Tightbeam IPC framework: endpoints, transports, connections, and
// the message lifecycle over the xnuproxy transport.
class Tightbeam {
public:
    enum class Mode { Kernel, Framework };

    Tightbeam(Trace& trace, Mode mode = Mode::Kernel);

    // Delivery hook; the world binds this to the xnuproxy endpoint-call
    // path. Receives (endpoint resource id, wire tag), returns (reply
    // tag, error word).
    using SendFn = std::function<Outcome<std::pair<uint64_t, uint64_t>>(uint64_t, uint64_t)>;
    void set_send(SendFn fn) { send_ = std::move(fn); }

    void set_mode(Mode m) { mode_ = m; }
    Mode mode() const { return mode_; }

    Outcome<uint64_t> endpoint_create(uint32_t ep_type, uint64_t id, uint64_t options);
    Outcome<uint64_t> connection_create_with_endpoint(uint64_t endpoint_id);
    Status connection_activate(uint64_t conn_id);

    Outcome<uint64_t> message_construct(uint64_t conn_id, uint64_t size, uint64_t option);
    Status message_encode(uint64_t msg_id, const std::vector<uint8_t>& bytes);
    Status message_complete(uint64_t msg_id);

    // Returns the reply message id when a reply is requested.
    Outcome<std::optional<uint64_t>> connection_send_query(uint64_t conn_id, uint64_t msg_id,
                                                           bool want_reply);

    TbEndpoint* endpoint(uint64_t id);
    TbConnection* connection(uint64_t id);
    TbMessage* message(uint64_t id);
    void attach_observer(uint64_t conn_id);
    void set_connection_guard(uint64_t conn_id, std::function<Status()> guard);
    void close_connection(uint64_t conn_id);

private:
    Outcome<TbTransport> transport_for_endpoint(const TbEndpoint& ep) const;

    Trace& trace_;
    Mode mode_;
    SendFn send_;
    std::deque<TbEndpoint> endpoints_;
    std::deque<TbConnection> connections_;
    std::deque<TbMessage> messages_;
};

} // namespace sptmsim
