// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "util/bloom.h"

#include "util/hash.h"

namespace sctdb {

std::string BuildBloom(const std::vector<std::string_view>& keys,
                       uint32_t bits_per_key) {
  size_t bits = keys.size() * static_cast<size_t>(bits_per_key);
  if (bits < 64) bits = 64;
  const size_t bytes = (bits + 7) / 8;
  bits = bytes * 8;

  std::string filter(bytes, '\0');
  auto* array = reinterpret_cast<uint8_t*>(filter.data());
  for (std::string_view key : keys) {
    auto [h1, h2] = Hash128(key);
    for (int i = 0; i < kBloomHashes; i++) {
      const uint64_t bit = (h1 + static_cast<uint64_t>(i) * h2) % bits;
      array[bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
    }
  }
  return filter;
}

bool BloomMayContain(std::string_view filter, std::string_view key) {
  if (filter.empty()) return true;  // no filter recorded: cannot prune
  const size_t bits = filter.size() * 8;
  const auto* array = reinterpret_cast<const uint8_t*>(filter.data());
  auto [h1, h2] = Hash128(key);
  for (int i = 0; i < kBloomHashes; i++) {
    const uint64_t bit = (h1 + static_cast<uint64_t>(i) * h2) % bits;
    if ((array[bit / 8] & (1u << (bit % 8))) == 0) return false;
  }
  return true;
}

}  // namespace sctdb
