// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/trace.hpp"

#include <sstream>

namespace sptmsim {

std::string hex_u64(uint64_t v) {
    char buf[19];
    snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string TraceRecord::to_line() const {
    std::string line = "seq=" + std::to_string(seq) + " actor=" + actor + " op=" + operation;
    for (const auto& [k, v] : detail) {
        line += ' ';
        line += k;
        line += '=';
        line += v;
    }
    line += " outcome=" + outcome;
    return line;
}

void Trace::emit(std::string actor, std::string operation, Detail detail, Status outcome) {
    emit(std::move(actor), std::move(operation), std::move(detail),
         std::string(to_string(outcome)));
}

void Trace::emit(std::string actor, std::string operation, Detail detail, std::string outcome) {
    TraceRecord rec;
    rec.seq = next_seq_++;
    rec.actor = std::move(actor);
    rec.operation = std::move(operation);
    rec.detail = std::move(detail);
    rec.outcome = std::move(outcome);
    records_.push_back(std::move(rec));
}

void Trace::clear() {
    records_.clear();
    next_seq_ = 0;
}

std::string Trace::serialize() const {
    std::string out;
    for (const auto& rec : records_) {
        out += rec.to_line();
        out += '\n';
    }
    return out;
}

size_t Trace::count_operation(std::string_view op) const {
    size_t n = 0;
    for (const auto& rec : records_)
        if (rec.operation == op) ++n;
    return n;
}

const TraceRecord* Trace::last() const { return records_.empty() ? nullptr : &records_.back(); }

} // namespace sptmsim
