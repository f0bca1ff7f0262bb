// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace sptmsim {

// Every outcome any module can produce. Scenario files reference these
// names verbatim in expect= clauses, so renaming a value is a format break.
enum class Status : uint8_t {
    Ok = 0,

    // codec / packing
    FieldOverflow,

    // frame table
    UnmanagedFrame,
    InvalidNewType,
    FrameBusy,
    CallerDomainDenied,
    PreviousTypeMismatch,
    TransitionDenied,

    // page mapper
    FrameTypeNotMappable,
    InvalidTableType,
    TableMapDenied,
    SprrIndexDenied,

    // dispatcher
    DuplicateRegistration,
    ControlCodeReserved,
    UnknownIommu,
    UnroutableDomain,
    InvalidEvent,
    InvalidState,
    ForbiddenTransition,
    PermissionDenied,
    NoHandlerRegistered,

    // terminal / control outcomes (not errors)
    Hang,
    ReturnToCaller,
    ContextRestore,
    ExceptionStateSaved,
    EnterGl0,
    UnknownService,
    NotRecovered,

    // secure kernel
    InvalidEndpoint,

    // txm
    ArgCountMismatch,
    SelectorUnknown,
    StackInvalid,

    // exclave resources
    TooManyServices,
    DuplicateResourceId,
    NotFound,
    CallerNotEntitled,
    TargetNotEntitled,
    AlreadyAttached,
    IllegalTransition,
    PortInvalid,
    UseCountZero,
    NotEntitled,
    InvalidArgument,
    NotBooted,
    ServiceNotSupported,
    ConclaveNotRunning,
    ConnectionClosed,

    // xnuproxy
    AlreadyAllocated,
    ProxyFailure,
    ServiceUnknown,
    ReentryDenied,

    // tightbeam
    AllocationFailure,
    UnsupportedTransport,
    EndpointInvalid,
    WrappingNotFalse,
    OversizeWithoutMultipart,
    BufferOverflow,
    WrongState,
    WrongDisposition,
    ConnectionMismatch,

    // harness
    ParseError,
    StepMismatch,
    UnknownTable,

    // data layer
    DataError,
};

std::string_view to_string(Status s);
std::optional<Status> status_from_string(std::string_view name);

constexpr bool is_ok(Status s) { return s == Status::Ok; }

// A value-or-status pair. value is meaningful only when status == Ok.
template <typename T>
struct Outcome {
    Status status = Status::Ok;
    T value{};

    bool ok() const { return status == Status::Ok; }
    static Outcome fail(Status s) { return Outcome{s, T{}}; }
    static Outcome success(T v) { return Outcome{Status::Ok, std::move(v)}; }
};

} // namespace sptmsim
