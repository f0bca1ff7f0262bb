// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/tightbeam.hpp"

namespace sptmsim {

std::string_view to_string(TbTransportKind k) {
    switch (k) {
    case TbTransportKind::NULL_TRANSPORT: return "NULL";
    case TbTransportKind::MACH: return "MACH";
    case TbTransportKind::EVE_4:
    case TbTransportKind::EVE_5: return "EVE";
    case TbTransportKind::XNU: return "XNU";
    case TbTransportKind::DARWIN: return "DARWIN";
    case TbTransportKind::UNIX: return "UNIX";
    case TbTransportKind::DELEGATED: return "DELEGATED";
    case TbTransportKind::AFK: return "AFK";
    }
    return "?";
}

std::string_view to_string(TbMessageState s) {
    switch (s) {
    case TbMessageState::UNINITIALIZED: return "UNINITIALIZED";
    case TbMessageState::PREPARING: return "PREPARING";
    case TbMessageState::READY: return "READY";
    case TbMessageState::SENT: return "SENT";
    case TbMessageState::RECEIVED: return "RECEIVED";
    }
    return "?";
}

std::string_view to_string(TbDisposition d) {
    return d == TbDisposition::QUERY ? "QUERY" : "REPLY";
}

Tightbeam::Tightbeam(Trace& trace, Mode mode) : trace_(trace), mode_(mode) {}

TbEndpoint* Tightbeam::endpoint(uint64_t id) {
    return id < endpoints_.size() ? &endpoints_[id] : nullptr;
}
TbConnection* Tightbeam::connection(uint64_t id) {
    return id < connections_.size() ? &connections_[id] : nullptr;
}
TbMessage* Tightbeam::message(uint64_t id) {
    return id < messages_.size() ? &messages_[id] : nullptr;
}

Outcome<uint64_t> Tightbeam::endpoint_create(uint32_t ep_type, uint64_t id, uint64_t options) {
    TbEndpoint ep;
    ep.ep_type = ep_type;
    ep.options = options;
    ep.data = id;
    ep.valid = true;
    endpoints_.push_back(ep);
    uint64_t handle = endpoints_.size() - 1;
    trace_.emit("tightbeam", "tb_endpoint_create",
                {{"type", std::to_string(ep_type)},
                 {"id", std::to_string(id)},
                 {"options", hex_u64(options)}},
                Status::Ok);
    return Outcome<uint64_t>::success(handle);
}

Outcome<TbTransport> Tightbeam::transport_for_endpoint(const TbEndpoint& ep) const {
    TbTransport t;
    t.endpoint_data = ep.data;

    if (mode_ == Mode::Kernel) {
        // The kernel-side mapping supports only the XNU and AFK kinds.
        switch (ep.ep_type) {
        case 7:
            t.kind = TbTransportKind::XNU;
            t.creation_fn = "tb_xnu_transport_create";
            return Outcome<TbTransport>::success(t);
        case 11:
            t.kind = TbTransportKind::AFK;
            t.creation_fn = "_tb_afk_transport_create";
            return Outcome<TbTransport>::success(t);
        default: return Outcome<TbTransport>::fail(Status::UnsupportedTransport);
        }
    }

    // Framework mode: the full mapping. Kind 7 does not exist here.
    switch (ep.ep_type) {
    case 1:
        t.kind = TbTransportKind::NULL_TRANSPORT;
        t.creation_fn = "_tb_null_transport_create";
        return Outcome<TbTransport>::success(t);
    case 2:
        t.kind = TbTransportKind::MACH;
        t.creation_fn = ep.options == 1 ? "_tb_mach_service_transport_create"
                                        : "_tb_mach_client_transport_create";
        return Outcome<TbTransport>::success(t);
    case 4:
    case 5:
        t.kind = ep.ep_type == 4 ? TbTransportKind::EVE_4 : TbTransportKind::EVE_5;
        t.creation_fn = "_tb_eve_client_transport_create";
        return Outcome<TbTransport>::success(t);
    case 8:
        t.kind = TbTransportKind::DARWIN;
        t.creation_fn = "_tb_darwin_client_transport_create";
        return Outcome<TbTransport>::success(t);
    case 9:
        t.kind = TbTransportKind::UNIX;
        t.creation_fn = ep.options == 1 ? "_tb_unix_service_transport_create_with_endpoint"
                                        : "_tb_unix_client_transport_create_with_endpoint";
        return Outcome<TbTransport>::success(t);
    case 10:
        t.kind = TbTransportKind::DELEGATED;
        t.creation_fn = ep.options == 1 ? "_tb_delegated_service_transport_create"
                                        : "_tb_delegated_client_transport_create";
        return Outcome<TbTransport>::success(t);
    case 11:
        t.kind = TbTransportKind::AFK;
        t.creation_fn = "_tb_afk_transport_create";
        return Outcome<TbTransport>::success(t);
    default: return Outcome<TbTransport>::fail(Status::UnsupportedTransport);
    }
}

Outcome<uint64_t> Tightbeam::connection_create_with_endpoint(uint64_t endpoint_id) {
    TbEndpoint* ep = endpoint(endpoint_id);
    if (ep == nullptr || !ep->valid) return Outcome<uint64_t>::fail(Status::EndpointInvalid);

    auto transport = transport_for_endpoint(*ep);
    if (!transport.ok()) {
        trace_.emit("tightbeam", "tb_connection_create_with_endpoint",
                    {{"type", std::to_string(ep->ep_type)}}, transport.status);
        return Outcome<uint64_t>::fail(transport.status);
    }

    TbConnection conn;
    conn.conn_id = connections_.size();
    conn.transport = transport.value;
    connections_.push_back(std::move(conn));

    // The endpoint has served its purpose and is destroyed.
    ep->valid = false;

    trace_.emit("tightbeam", "tb_connection_create_with_endpoint",
                {{"conn", std::to_string(connections_.back().conn_id)},
                 {"transport", std::string(to_string(connections_.back().transport.kind))},
                 {"endpoint_data", std::to_string(connections_.back().transport.endpoint_data)}},
                Status::Ok);
    return Outcome<uint64_t>::success(connections_.back().conn_id);
}

void Tightbeam::attach_observer(uint64_t conn_id) {
    if (TbConnection* c = connection(conn_id)) c->has_observer = true;
}

void Tightbeam::set_connection_guard(uint64_t conn_id, std::function<Status()> guard) {
    if (TbConnection* c = connection(conn_id)) c->guard = std::move(guard);
}

void Tightbeam::close_connection(uint64_t conn_id) {
    if (TbConnection* c = connection(conn_id)) {
        c->closed = true;
        trace_.emit("tightbeam", "tb_connection_closed", {{"conn", std::to_string(conn_id)}},
                    Status::Ok);
    }
}

Status Tightbeam::connection_activate(uint64_t conn_id) {
    TbConnection* c = connection(conn_id);
    if (c == nullptr) return Status::ConnectionMismatch;
    if (c->has_observer) ++c->observer_notifications;
    // The XNU transport's activation behavior is an empty stub.
    trace_.emit("tightbeam", "tb_connection_activate",
                {{"conn", std::to_string(conn_id)},
                 {"observers_notified", std::to_string(c->observer_notifications)}},
                Status::Ok);
    return Status::Ok;
}

Outcome<uint64_t> Tightbeam::message_construct(uint64_t conn_id, uint64_t size,
                                               uint64_t option) {
    TbConnection* c = connection(conn_id);
    if (c == nullptr) return Outcome<uint64_t>::fail(Status::ConnectionMismatch);

    TbMessage msg;
    msg.msg_id = messages_.size();

    // A preset wrapping flag is fatal in the transport; an error here.
    if (msg.buffer.wrapping != 0) return Outcome<uint64_t>::fail(Status::WrappingNotFalse);
    // Multipart is unsupported at reference scale.
    if (size > c->transport.tx_buffer_size)
        return Outcome<uint64_t>::fail(Status::OversizeWithoutMultipart);

    msg.buffer.size = size;
    msg.disposition = option == 1 ? TbDisposition::REPLY : TbDisposition::QUERY;
    msg.connection_id = conn_id;
    msg.state = TbMessageState::PREPARING;
    messages_.push_back(std::move(msg));

    trace_.emit("tightbeam", "tb_message_construct",
                {{"conn", std::to_string(conn_id)},
                 {"msg", std::to_string(messages_.back().msg_id)},
                 {"size", std::to_string(size)},
                 {"disposition", std::string(to_string(messages_.back().disposition))}},
                Status::Ok);
    return Outcome<uint64_t>::success(messages_.back().msg_id);
}

Status Tightbeam::message_encode(uint64_t msg_id, const std::vector<uint8_t>& bytes) {
    TbMessage* msg = message(msg_id);
    if (msg == nullptr || msg->state != TbMessageState::PREPARING) return Status::WrongState;
    if (msg->buffer.offset + bytes.size() > msg->buffer.size) return Status::BufferOverflow;
    msg->buffer.payload.insert(msg->buffer.payload.end(), bytes.begin(), bytes.end());
    msg->buffer.offset += bytes.size();
    return Status::Ok;
}

Status Tightbeam::message_complete(uint64_t msg_id) {
    TbMessage* msg = message(msg_id);
    if (msg == nullptr || msg->state != TbMessageState::PREPARING) return Status::WrongState;
    // Reply completion mirrors the query path; audited for review.
    msg->state = TbMessageState::READY;
    trace_.emit("tightbeam", "tb_message_complete",
                {{"msg", std::to_string(msg_id)},
                 {"disposition", std::string(to_string(msg->disposition))}},
                Status::Ok);
    return Status::Ok;
}

Outcome<std::optional<uint64_t>> Tightbeam::connection_send_query(uint64_t conn_id,
                                                                  uint64_t msg_id,
                                                                  bool want_reply) {
    using Result = Outcome<std::optional<uint64_t>>;
    TbConnection* c = connection(conn_id);
    TbMessage* msg = message(msg_id);
    if (c == nullptr || msg == nullptr) return Result::fail(Status::ConnectionMismatch);

    auto fail = [&](Status s) {
        trace_.emit("tightbeam", "tb_connection_send_query",
                    {{"conn", std::to_string(conn_id)}, {"msg", std::to_string(msg_id)}}, s);
        return Result::fail(s);
    };

    if (msg->state != TbMessageState::READY) return fail(Status::WrongState);
    if (msg->disposition != TbDisposition::QUERY) return fail(Status::WrongDisposition);
    if (msg->connection_id != conn_id) return fail(Status::ConnectionMismatch);
    if (c->closed) return fail(Status::ConnectionClosed);
    if (c->guard) {
        Status g = c->guard();
        if (g != Status::Ok) return fail(g);
    }

    msg->state = TbMessageState::SENT;

    // Transport-level send. The guard that the message is SENT is
    // redundant with the setter above but mirrors the layering.
    if (msg->state != TbMessageState::SENT) return fail(Status::WrongState);

    uint64_t wire_tag = (((msg->buffer.size + 7) >> 3) & 0x3f) | (msg->buffer.wrapping << 16);
    trace_.emit("tightbeam", "tb_transport_send_message",
                {{"conn", std::to_string(conn_id)},
                 {"endpoint", std::to_string(c->transport.endpoint_data)},
                 {"tag", hex_u64(wire_tag)}},
                Status::Ok);

    if (!send_) return fail(Status::ServiceUnknown);
    auto sent = send_(c->transport.endpoint_data, wire_tag);
    if (!sent.ok()) return fail(sent.status);

    trace_.emit("tightbeam", "tb_connection_send_query",
                {{"conn", std::to_string(conn_id)},
                 {"msg", std::to_string(msg_id)},
                 {"reply_tag", hex_u64(sent.value.first)},
                 {"error", hex_u64(sent.value.second)}},
                Status::Ok);

    if (!want_reply) return Result::success(std::nullopt);

    TbMessage reply;
    reply.msg_id = messages_.size();
    reply.state = TbMessageState::RECEIVED;
    reply.disposition = TbDisposition::REPLY;
    reply.connection_id = conn_id;
    reply.buffer.size = (sent.value.first & 0x3f) * 8;
    messages_.push_back(std::move(reply));
    return Result::success(messages_.back().msg_id);
}

} // namespace sptmsim
