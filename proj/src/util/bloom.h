// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Per-block bloom filters over user keys. Double hashing from a 128-bit
// hash, 7 probes. No false negatives by construction.

#ifndef SCTDB_UTIL_BLOOM_H_
#define SCTDB_UTIL_BLOOM_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sctdb {

inline constexpr int kBloomHashes = 7;

// Builds the filter for one block's key set.
std::string BuildBloom(const std::vector<std::string_view>& keys,
                       uint32_t bits_per_key);

// May return true for absent keys (bounded false-positive rate); never
// returns false for a key that was added.
bool BloomMayContain(std::string_view filter, std::string_view key);

}  // namespace sctdb

#endif  // SCTDB_UTIL_BLOOM_H_
