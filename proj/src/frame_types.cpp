// Copyright 2026 sptmsim contributors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0
#include "sptmsim/frame_types.hpp"

#include <array>
#include <string>

namespace sptmsim {

namespace {
constexpr std::array<std::string_view, 63> kNames = {
    "SPTM_UNTYPED",
    "SPTM_UNUSED",
    "SPTM_DEFAULT",
    "SPTM_RO",
    "SPTM_CODE",
    "SPTM_TXM_CODE",
    "SPTM_XNU_CODE",
    "SPTM_XNU_CODE_DBG_RW",
    "SPTM_KERNEL_ROOT_TABLE",
    "SPTM_PAGE_TABLE",
    "SPTM_IOMMU_BOOTSTRAP",
    "XNU_DEFAULT",
    "XNU_RO",
    "XNU_RO_DBG_RW",
    "XNU_USER_EXEC",
    "XNU_USER_DEBUG",
    "XNU_USER_JIT",
    "XNU_USER_ROOT_TABLE",
    "XNU_SHARED_ROOT_TABLE",
    "XNU_PAGE_TABLE",
    "XNU_PAGE_TABLE_SHARED",
    "XNU_PAGE_TABLE_ROZONE",
    "XNU_PAGE_TABLE_COMMPAGE",
    "XNU_IOMMU",
    "XNU_ROZONE",
    "XNU_IO",
    "XNU_PROTECTED_IO",
    "XNU_COMMPAGE_RW",
    "XNU_COMMPAGE_RO",
    "XNU_COMMPAGE_RX",
    "XNU_TAG_STORAGE",
    "XNU_STAGE2_ROOT_TABLE",
    "XNU_STAGE2_PAGE_TABLE",
    "XNU_KERNEL_RESTRICTED",
    "XNU_RESERVED_1",
    "XNU_RESERVED_2",
    "XNU_RESTRICTED_IO",
    "XNU_RESTRICTED_IO_TELEMETRY",
    "TXM_DEFAULT",
    "TXM_RO",
    "TXM_RW",
    "TXM_CPU_STACK",
    "TXM_THREAD_STACK",
    "TXM_ADDRESS_SPACE_TABLE",
    "TXM_MALLOC_PAGE",
    "TXM_FREE_LIST",
    "TXM_SLAB_TRUST_CACHE",
    "TXM_SLAB_PROFILE",
    "TXM_SLAB_CODE_SIGNATURE",
    "TXM_SLAB_CODE_REGION",
    "TXM_SLAB_ADDRESS_SPACE",
    "TXM_BUCKET_1024",
    "TXM_BUCKET_2048",
    "TXM_BUCKET_4096",
    "TXM_BUCKET_8192",
    "TXM_BULK_DATA",
    "TXM_BULK_DATA_READ_ONLY",
    "TXM_LOG",
    "TXM_SEP_SECURE_CHANNEL",
    "SK_DEFAULT",
    "SK_SHARED_RO",
    "SK_SHARED_RW",
    "SK_IO",
};
} // namespace

std::string_view to_string(FrameType t) { return kNames[static_cast<uint8_t>(t)]; }

std::string frame_type_name(uint8_t raw) {
    if (raw < kNumFrameTypes) return std::string(kNames[raw]);
    if (raw == kUnknownTypeSentinel) return "UNKNOWN_TYPE";
    return "TYPE_" + std::to_string(raw);
}

std::optional<FrameType> frame_type_from_string(std::string_view name) {
    for (uint8_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return static_cast<FrameType>(i);
    return std::nullopt;
}

std::optional<FrameType> frame_type_from_value(uint64_t v) {
    if (v >= kNumFrameTypes) return std::nullopt;
    return static_cast<FrameType>(v);
}

} // namespace sptmsim
