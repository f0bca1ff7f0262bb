// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <string>

#include "sptmsim/tables.hpp"

namespace sptmsim::testing {

inline const std::string& data_dir() {
    static const std::string dir = SPTMSIM_DATA_DIR;
    return dir;
}

inline const RuleTables& rules() {
    static const RuleTables rt = RuleTables::load(data_dir());
    return rt;
}

} // namespace sptmsim::testing
