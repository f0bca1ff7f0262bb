// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sptmsim/status.hpp"

namespace sptmsim {

using Detail = std::vector<std::pair<std::string, std::string>>;

// One simulator event. Serialization must stay byte-stable for identical
// inputs; details keep their emission order and no record carries wall
// time or addresses.
struct TraceRecord {
    uint64_t seq = 0;
    std::string actor;     // domain name or task label
    std::string operation; // verbatim operation name
    Detail detail;
    std::string outcome;

    std::string to_line() const;
};

class Trace {
public:
    void emit(std::string actor, std::string operation, Detail detail, Status outcome);
    void emit(std::string actor, std::string operation, Detail detail, std::string outcome);

    const std::vector<TraceRecord>& records() const { return records_; }
    size_t size() const { return records_.size(); }
    void clear();

    std::string serialize() const;
    size_t count_operation(std::string_view op) const;
    const TraceRecord* last() const;

private:
    std::vector<TraceRecord> records_;
    uint64_t next_seq_ = 0;
};

std::string hex_u64(uint64_t v);

} // namespace sptmsim
