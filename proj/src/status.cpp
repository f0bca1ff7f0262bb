// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/status.hpp"

#include <array>

namespace sptmsim {

namespace {
struct Entry {
    Status status;
    std::string_view name;
};

constexpr std::array kNames = {
    Entry{Status::Ok, "OK"},
    Entry{Status::FieldOverflow, "FieldOverflow"},
    Entry{Status::UnmanagedFrame, "UnmanagedFrame"},
    Entry{Status::InvalidNewType, "InvalidNewType"},
    Entry{Status::FrameBusy, "FrameBusy"},
    Entry{Status::CallerDomainDenied, "CallerDomainDenied"},
    Entry{Status::PreviousTypeMismatch, "PreviousTypeMismatch"},
    Entry{Status::TransitionDenied, "TransitionDenied"},
    Entry{Status::FrameTypeNotMappable, "FrameTypeNotMappable"},
    Entry{Status::InvalidTableType, "InvalidTableType"},
    Entry{Status::TableMapDenied, "TableMapDenied"},
    Entry{Status::SprrIndexDenied, "SprrIndexDenied"},
    Entry{Status::DuplicateRegistration, "DuplicateRegistration"},
    Entry{Status::ControlCodeReserved, "ControlCodeReserved"},
    Entry{Status::UnknownIommu, "UnknownIommu"},
    Entry{Status::UnroutableDomain, "UnroutableDomain"},
    Entry{Status::InvalidEvent, "InvalidEvent"},
    Entry{Status::InvalidState, "InvalidState"},
    Entry{Status::ForbiddenTransition, "ForbiddenTransition"},
    Entry{Status::PermissionDenied, "PermissionDenied"},
    Entry{Status::NoHandlerRegistered, "NoHandlerRegistered"},
    Entry{Status::Hang, "Hang"},
    Entry{Status::ReturnToCaller, "ReturnToCaller"},
    Entry{Status::ContextRestore, "ContextRestore"},
    Entry{Status::ExceptionStateSaved, "ExceptionStateSaved"},
    Entry{Status::EnterGl0, "EnterGl0"},
    Entry{Status::UnknownService, "UnknownService"},
    Entry{Status::NotRecovered, "NotRecovered"},
    Entry{Status::InvalidEndpoint, "InvalidEndpoint"},
    Entry{Status::ArgCountMismatch, "ArgCountMismatch"},
    Entry{Status::SelectorUnknown, "SelectorUnknown"},
    Entry{Status::StackInvalid, "StackInvalid"},
    Entry{Status::TooManyServices, "TooManyServices"},
    Entry{Status::DuplicateResourceId, "DuplicateResourceId"},
    Entry{Status::NotFound, "NotFound"},
    Entry{Status::CallerNotEntitled, "CallerNotEntitled"},
    Entry{Status::TargetNotEntitled, "TargetNotEntitled"},
    Entry{Status::AlreadyAttached, "AlreadyAttached"},
    Entry{Status::IllegalTransition, "IllegalTransition"},
    Entry{Status::PortInvalid, "PortInvalid"},
    Entry{Status::UseCountZero, "UseCountZero"},
    Entry{Status::NotEntitled, "NotEntitled"},
    Entry{Status::InvalidArgument, "InvalidArgument"},
    Entry{Status::NotBooted, "NotBooted"},
    Entry{Status::ServiceNotSupported, "ServiceNotSupported"},
    Entry{Status::ConclaveNotRunning, "ConclaveNotRunning"},
    Entry{Status::ConnectionClosed, "ConnectionClosed"},
    Entry{Status::AlreadyAllocated, "AlreadyAllocated"},
    Entry{Status::ProxyFailure, "ProxyFailure"},
    Entry{Status::ServiceUnknown, "ServiceUnknown"},
    Entry{Status::ReentryDenied, "ReentryDenied"},
    Entry{Status::AllocationFailure, "AllocationFailure"},
    Entry{Status::UnsupportedTransport, "UnsupportedTransport"},
    Entry{Status::EndpointInvalid, "EndpointInvalid"},
    Entry{Status::WrappingNotFalse, "WrappingNotFalse"},
    Entry{Status::OversizeWithoutMultipart, "OversizeWithoutMultipart"},
    Entry{Status::BufferOverflow, "BufferOverflow"},
    Entry{Status::WrongState, "WrongState"},
    Entry{Status::WrongDisposition, "WrongDisposition"},
    Entry{Status::ConnectionMismatch, "ConnectionMismatch"},
    Entry{Status::ParseError, "ParseError"},
    Entry{Status::StepMismatch, "StepMismatch"},
    Entry{Status::UnknownTable, "UnknownTable"},
    Entry{Status::DataError, "DataError"},
};
} // namespace

std::string_view to_string(Status s) {
    for (const auto& e : kNames)
        if (e.status == s) return e.name;
    return "?";
}

std::optional<Status> status_from_string(std::string_view name) {
    for (const auto& e : kNames)
        if (e.name == name) return e.status;
    return std::nullopt;
}

} // namespace sptmsim
