// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_UTIL_CRC32C_H_
#define SCTDB_UTIL_CRC32C_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace sctdb {
namespace crc32c {

// Returns the crc32c of concat(A, data[0,n)) where Extend(init_crc) == crc
// of A. Castagnoli polynomial, software slicing-by-8.
uint32_t Extend(uint32_t init_crc, const char* data, size_t n);

inline uint32_t Value(const char* data, size_t n) { return Extend(0, data, n); }
inline uint32_t Value(std::string_view s) { return Extend(0, s.data(), s.size()); }

}  // namespace crc32c
}  // namespace sctdb

#endif  // SCTDB_UTIL_CRC32C_H_
