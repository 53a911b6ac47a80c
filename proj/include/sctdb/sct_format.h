// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Sorted Compressed Table (SCT) file layout. All integers little-endian,
// all blocks 4096 bytes with a trailing crc32c over bytes [0, 4092).
//
//   block 0            header: magic "SCT1", version, key_size,
//                      code_width_bits, value representation
//   key blocks         [row_count u16][keys][seqs u64][kind bits][pad][crc]
//   data blocks        coded:  [row_count u16][packed codes][pad][crc]
//                      plain:  [row_count u16][offsets u16 x (rc+1)]
//                              [value bytes][pad][crc]
//   dict section       [m u32][offsets u32 x (m+1)][value bytes][pad][crc],
//                      spanning whole blocks (coded files only)
//   meta section       per-block descriptors: offset, kind, row range,
//                      first/last key and bloom bits for key blocks
//   footer block       section offsets, entry_count, min/max key, crc,
//                      magic repeated
//
// Keys are fixed width. Rows are sorted by (user_key asc, seq desc). In
// coded files a tombstone row stores the all-ones sentinel at the packed
// width, which never collides with a real code and is never decoded.

#ifndef SCTDB_SCT_FORMAT_H_
#define SCTDB_SCT_FORMAT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sctdb/options.h"
#include "sctdb/types.h"

namespace sctdb {

inline constexpr size_t kBlockSize = 4096;
inline constexpr size_t kBlockPayload = kBlockSize - 4;  // crc at the tail
inline constexpr char kSctMagic[4] = {'S', 'C', 'T', '1'};
inline constexpr uint16_t kSctFormatVersion = 1;

enum class BlockKind : uint8_t {
  kKeyBlock = 0,
  kCodeBlock = 1,
  kMetaBlock = 2,
  kDictBlock = 3,
  kValueBlock = 4,
};

struct BlockMeta {
  uint64_t offset = 0;
  BlockKind kind = BlockKind::kKeyBlock;
  uint32_t start_row = 0;
  uint32_t end_row = 0;        // half-open
  std::string first_key;       // key blocks only
  std::string last_key;
  std::string bloom;           // key blocks only; over user keys in block
};

struct SctDescriptor {
  uint64_t sct_id = 0;
  int level = 0;
  std::string min_key;
  std::string max_key;
  uint64_t entry_count = 0;
  uint64_t file_size_bytes = 0;
  uint32_t dict_entries = 0;       // m
  uint32_t code_width_bits = 0;    // packed width; 0 for plain files
  StorageMode value_repr = StorageMode::kCoded;
  std::string path;
};

// One logical row as surfaced by probes and cursors.
struct EntryRecord {
  std::string user_key;
  SequenceNumber seq = 0;
  EntryKind kind = EntryKind::kPut;
  uint32_t code = 0;    // coded files, kind == kPut
  std::string value;    // plain files, kind == kPut
};

// Fixed row capacities derived from the layout.
inline uint32_t RowsPerKeyBlock(size_t key_size) {
  // 2-byte row count, then r*(key_size+8) + ceil(r/8) <= payload-2.
  const uint64_t budget_bits = static_cast<uint64_t>(kBlockPayload - 2) * 8;
  return static_cast<uint32_t>(budget_bits / (8 * (key_size + 8) + 1));
}

inline uint32_t RowsPerCodeBlock(uint32_t width_bits) {
  const uint64_t budget_bits = static_cast<uint64_t>(kBlockPayload - 2) * 8;
  uint64_t rows = budget_bits / width_bits;
  return static_cast<uint32_t>(rows > 65535 ? 65535 : rows);
}

// Size estimate for an output file, used when dividing a merged sequence
// into file-sized subsequences. distinct_bytes is the running byte total
// of the distinct values in the subsequence (zero for plain files, where
// value_bytes carries the raw payload instead).
uint64_t EstimateSctBytes(const Options& options, uint64_t rows,
                          uint64_t distinct_values, uint64_t distinct_bytes,
                          uint64_t value_bytes, StorageMode mode);

}  // namespace sctdb

#endif  // SCTDB_SCT_FORMAT_H_
