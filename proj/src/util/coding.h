// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Little-endian fixed-width integer encoding helpers.

#ifndef SCTDB_UTIL_CODING_H_
#define SCTDB_UTIL_CODING_H_

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace sctdb {

inline void EncodeFixed16(char* dst, uint16_t v) { std::memcpy(dst, &v, 2); }
inline void EncodeFixed32(char* dst, uint32_t v) { std::memcpy(dst, &v, 4); }
inline void EncodeFixed64(char* dst, uint64_t v) { std::memcpy(dst, &v, 8); }

inline uint16_t DecodeFixed16(const char* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}
inline uint32_t DecodeFixed32(const char* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}
inline uint64_t DecodeFixed64(const char* p) {
  uint64_t v;
  std::memcpy(&v, p, 8);
  return v;
}

inline void PutFixed16(std::string* dst, uint16_t v) {
  char buf[2];
  EncodeFixed16(buf, v);
  dst->append(buf, 2);
}
inline void PutFixed32(std::string* dst, uint32_t v) {
  char buf[4];
  EncodeFixed32(buf, v);
  dst->append(buf, 4);
}
inline void PutFixed64(std::string* dst, uint64_t v) {
  char buf[8];
  EncodeFixed64(buf, v);
  dst->append(buf, 8);
}

// Cursor-style readers returning false on underrun.
struct ByteReader {
  std::string_view data;
  size_t pos = 0;

  bool Read16(uint16_t* v) {
    if (pos + 2 > data.size()) return false;
    *v = DecodeFixed16(data.data() + pos);
    pos += 2;
    return true;
  }
  bool Read32(uint32_t* v) {
    if (pos + 4 > data.size()) return false;
    *v = DecodeFixed32(data.data() + pos);
    pos += 4;
    return true;
  }
  bool Read64(uint64_t* v) {
    if (pos + 8 > data.size()) return false;
    *v = DecodeFixed64(data.data() + pos);
    pos += 8;
    return true;
  }
  bool ReadBytes(size_t n, std::string_view* out) {
    if (pos + n > data.size()) return false;
    *out = data.substr(pos, n);
    pos += n;
    return true;
  }
};

}  // namespace sctdb

#endif  // SCTDB_UTIL_CODING_H_
