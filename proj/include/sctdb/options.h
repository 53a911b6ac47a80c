// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_OPTIONS_H_
#define SCTDB_OPTIONS_H_

#include <cstddef>
#include <cstdint>

namespace sctdb {

// Storage representation of values in table files.
//  kCoded: values replaced by order-preserving dictionary codes, bit-packed;
//          the per-file dictionary is embedded and memory-resident.
//  kPlain: raw value bytes, no dictionary. Baseline mode for comparisons.
enum class StorageMode : uint8_t {
  kCoded = 0,
  kPlain = 1,
};

struct Options {
  // Fixed user key width in bytes. All keys must have exactly this length.
  size_t key_size = 16;

  // Target size of one table file (F). Compaction and flush split output
  // so each file stays at or below this, give or take one block.
  uint64_t file_size = 32ull << 20;

  // Size ratio between adjacent levels (T). Level l >= 1 holds up to
  // file_size * ratio^l bytes.
  uint32_t level_size_ratio = 10;

  // Number of on-disk levels. Level max_levels - 1 is the bottom.
  uint32_t max_levels = 5;

  // Active memtable is frozen once its key+value payload reaches this.
  uint64_t memtable_capacity = 8ull << 20;

  // Writers stall while level 0 holds at least this many files.
  uint32_t l0_stall_files = 8;

  // A level-0 -> level-1 compaction is scheduled at this many L0 files.
  uint32_t l0_compact_trigger = 4;

  // Bloom filter sizing for key blocks.
  uint32_t bloom_bits_per_key = 10;

  // Upper bound on a single value's size. Bounds dictionary entries and
  // keeps every value representable inside one 4 KiB block in plain mode.
  size_t max_value_size = 4080;

  StorageMode mode = StorageMode::kCoded;

  // When false, flush and compaction run inline on the writer thread as
  // soon as they are triggered. Deterministic; used by tests and the
  // single-threaded bench mode.
  bool background_jobs = true;

  // Range scans covering more than this many key blocks of one file load
  // the file's data sections in a single bulk read.
  uint32_t bulk_read_blocks = 16;

  // Capacity in bytes of level l (l >= 1).
  uint64_t LevelCapacity(uint32_t level) const {
    uint64_t c = file_size;
    for (uint32_t i = 0; i < level; i++) c *= level_size_ratio;
    return c;
  }

  bool Valid() const {
    return key_size >= 1 && key_size <= 1024 && file_size >= (16 << 10) &&
           level_size_ratio >= 2 && max_levels >= 2 && max_levels <= 16 &&
           memtable_capacity >= (4 << 10) && l0_stall_files >= 1 &&
           l0_compact_trigger >= 1 && bloom_bits_per_key >= 1 &&
           bloom_bits_per_key <= 64 && max_value_size <= 4080;
  }
};

}  // namespace sctdb

#endif  // SCTDB_OPTIONS_H_
