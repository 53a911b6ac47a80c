// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_TYPES_H_
#define SCTDB_TYPES_H_

#include <cstdint>
#include <limits>
#include <string>

namespace sctdb {

using SequenceNumber = uint64_t;

// Sequence numbers start at 1; 0 means "before any write".
inline constexpr SequenceNumber kMaxSequence =
    std::numeric_limits<SequenceNumber>::max();

enum class EntryKind : uint8_t {
  kPut = 0,
  kTombstone = 1,
};

// A user key with its version metadata; the unit of ordering everywhere.
// kind == kTombstone implies value is empty.
struct InternalEntry {
  std::string user_key;
  SequenceNumber seq = 0;
  EntryKind kind = EntryKind::kPut;
  std::string value;
};

// Internal ordering: user_key ascending, then seq descending. Byte
// comparisons are unsigned (std::string_view compare is memcmp order).
inline int CompareKeySeq(std::string_view a_key, SequenceNumber a_seq,
                         std::string_view b_key, SequenceNumber b_seq) {
  int c = a_key.compare(b_key);
  if (c != 0) return c < 0 ? -1 : 1;
  if (a_seq == b_seq) return 0;
  return a_seq > b_seq ? -1 : 1;  // larger seq sorts first
}

}  // namespace sctdb

#endif  // SCTDB_TYPES_H_
