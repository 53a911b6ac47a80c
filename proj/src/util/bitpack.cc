// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "util/bitpack.h"

#include <cassert>
#include <cstring>

namespace sctdb {

void AppendPackedCodes(const uint32_t* codes, size_t n, uint32_t width,
                       std::string* out) {
  assert(width >= 1 && width <= 32);
  const size_t start = out->size();
  out->resize(start + PackedBytes(n, width), '\0');
  char* dst = out->data() + start;

  uint64_t acc = 0;
  uint32_t acc_bits = 0;
  size_t byte_pos = 0;
  for (size_t i = 0; i < n; i++) {
    assert(width == 32 || codes[i] < (1u << width));
    acc |= static_cast<uint64_t>(codes[i]) << acc_bits;
    acc_bits += width;
    while (acc_bits >= 8) {
      dst[byte_pos++] = static_cast<char>(acc & 0xff);
      acc >>= 8;
      acc_bits -= 8;
    }
  }
  if (acc_bits > 0) {
    dst[byte_pos++] = static_cast<char>(acc & 0xff);
  }
  assert(byte_pos == PackedBytes(n, width));
}

void UnpackCodes(const char* data, size_t n, uint32_t width, uint32_t* out) {
  assert(width >= 1 && width <= 32);
  const uint64_t mask = width == 32 ? ~0u : ((1ull << width) - 1);
  const size_t nbytes = PackedBytes(n, width);

  // Full-speed path while an 8-byte load stays in bounds; tail handled
  // with a buffered copy.
  size_t i = 0;
  for (; i < n; i++) {
    const size_t bit = i * static_cast<size_t>(width);
    const size_t byte = bit >> 3;
    if (byte + 8 > nbytes) break;
    uint64_t word;
    std::memcpy(&word, data + byte, 8);
    out[i] = static_cast<uint32_t>((word >> (bit & 7)) & mask);
  }
  for (; i < n; i++) {
    const size_t bit = i * static_cast<size_t>(width);
    const size_t byte = bit >> 3;
    uint64_t word = 0;
    const size_t avail = nbytes - byte;
    std::memcpy(&word, data + byte, avail < 8 ? avail : 8);
    out[i] = static_cast<uint32_t>((word >> (bit & 7)) & mask);
  }
}

}  // namespace sctdb
