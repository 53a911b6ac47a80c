// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Fixed-width bit packing of 32-bit codes. Code j occupies bitstream
// positions [j*width, (j+1)*width); bit b lives in byte b/8 at in-byte
// position b%8 (LSB first), i.e. little-endian 64-bit word order.

#ifndef SCTDB_UTIL_BITPACK_H_
#define SCTDB_UTIL_BITPACK_H_

#include <cstddef>
#include <cstdint>
#include <string>

namespace sctdb {

inline size_t PackedBytes(size_t count, uint32_t width) {
  return (count * static_cast<size_t>(width) + 7) / 8;
}

// Appends PackedBytes(n, width) bytes to *out. width in [1, 32]; every
// code must fit in width bits.
void AppendPackedCodes(const uint32_t* codes, size_t n, uint32_t width,
                       std::string* out);

// Unpacks n codes into out[0, n). data must hold PackedBytes(n, width).
void UnpackCodes(const char* data, size_t n, uint32_t width, uint32_t* out);

}  // namespace sctdb

#endif  // SCTDB_UTIL_BITPACK_H_
