// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace sptmsim {

enum class FrameType : uint8_t {
    SPTM_UNTYPED = 0,
    SPTM_UNUSED = 1,
    SPTM_DEFAULT = 2,
    SPTM_RO = 3,
    SPTM_CODE = 4,
    SPTM_TXM_CODE = 5,
    SPTM_XNU_CODE = 6,
    SPTM_XNU_CODE_DBG_RW = 7,
    SPTM_KERNEL_ROOT_TABLE = 8,
    SPTM_PAGE_TABLE = 9,
    SPTM_IOMMU_BOOTSTRAP = 10,
    XNU_DEFAULT = 11,
    XNU_RO = 12,
    XNU_RO_DBG_RW = 13,
    XNU_USER_EXEC = 14,
    XNU_USER_DEBUG = 15,
    XNU_USER_JIT = 16,
    XNU_USER_ROOT_TABLE = 17,
    XNU_SHARED_ROOT_TABLE = 18,
    XNU_PAGE_TABLE = 19,
    XNU_PAGE_TABLE_SHARED = 20,
    XNU_PAGE_TABLE_ROZONE = 21,
    XNU_PAGE_TABLE_COMMPAGE = 22,
    XNU_IOMMU = 23,
    XNU_ROZONE = 24,
    XNU_IO = 25,
    XNU_PROTECTED_IO = 26,
    XNU_COMMPAGE_RW = 27,
    XNU_COMMPAGE_RO = 28,
    XNU_COMMPAGE_RX = 29,
    XNU_TAG_STORAGE = 30,
    XNU_STAGE2_ROOT_TABLE = 31,
    XNU_STAGE2_PAGE_TABLE = 32,
    XNU_KERNEL_RESTRICTED = 33,
    XNU_RESERVED_1 = 34,
    XNU_RESERVED_2 = 35,
    XNU_RESTRICTED_IO = 36,
    XNU_RESTRICTED_IO_TELEMETRY = 37,
    TXM_DEFAULT = 38,
    TXM_RO = 39,
    TXM_RW = 40,
    TXM_CPU_STACK = 41,
    TXM_THREAD_STACK = 42,
    TXM_ADDRESS_SPACE_TABLE = 43,
    TXM_MALLOC_PAGE = 44,
    TXM_FREE_LIST = 45,
    TXM_SLAB_TRUST_CACHE = 46,
    TXM_SLAB_PROFILE = 47,
    TXM_SLAB_CODE_SIGNATURE = 48,
    TXM_SLAB_CODE_REGION = 49,
    TXM_SLAB_ADDRESS_SPACE = 50,
    TXM_BUCKET_1024 = 51,
    TXM_BUCKET_2048 = 52,
    TXM_BUCKET_4096 = 53,
    TXM_BUCKET_8192 = 54,
    TXM_BULK_DATA = 55,
    TXM_BULK_DATA_READ_ONLY = 56,
    TXM_LOG = 57,
    TXM_SEP_SECURE_CHANNEL = 58,
    SK_DEFAULT = 59,
    SK_SHARED_RO = 60,
    SK_SHARED_RW = 61,
    SK_IO = 62,
};

// Assignable frame types are 0..62. 63 is a sentinel that only appears in
// mapping masks.
inline constexpr uint8_t kNumFrameTypes = 63;
inline constexpr uint8_t kMaxFrameType = 62;
inline constexpr uint8_t kUnknownTypeSentinel = 63;

std::string_view to_string(FrameType t);
std::string frame_type_name(uint8_t raw); // handles the sentinel and out-of-range
std::optional<FrameType> frame_type_from_string(std::string_view name);
std::optional<FrameType> frame_type_from_value(uint64_t v);

} // namespace sptmsim
