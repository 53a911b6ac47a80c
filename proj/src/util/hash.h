// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_UTIL_HASH_H_
#define SCTDB_UTIL_HASH_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>

namespace sctdb {

// 128-bit hash (MurmurHash3 x64 variant). The two halves are independent
// enough for double hashing in bloom filters.
std::pair<uint64_t, uint64_t> Hash128(const char* data, size_t n,
                                      uint64_t seed = 0);

inline std::pair<uint64_t, uint64_t> Hash128(std::string_view s,
                                             uint64_t seed = 0) {
  return Hash128(s.data(), s.size(), seed);
}

inline uint64_t Hash64(std::string_view s, uint64_t seed = 0) {
  return Hash128(s, seed).first;
}

}  // namespace sctdb

#endif  // SCTDB_UTIL_HASH_H_
