// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_STATS_H_
#define SCTDB_STATS_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <string>

namespace sctdb {

// Process-wide instrumentation counters. Cheap relaxed atomics; tests take
// snapshots and assert on deltas (e.g. the zero-decode compaction check).
struct Counters {
  std::atomic<uint64_t> dict_decodes{0};
  std::atomic<uint64_t> dict_build_cmps{0};
  std::atomic<uint64_t> dict_merge_cmps{0};
  std::atomic<uint64_t> dict_encode_cmps{0};

  std::atomic<uint64_t> bloom_block_skips{0};
  std::atomic<uint64_t> bloom_block_hits{0};
  std::atomic<uint64_t> point_file_probes{0};
  std::atomic<uint64_t> blocks_read{0};
  std::atomic<uint64_t> bulk_reads{0};

  std::atomic<uint64_t> filter_codes_tested{0};
  std::atomic<uint64_t> filter_value_bytes{0};
  std::atomic<uint64_t> filter_rows_scanned{0};

  std::atomic<uint64_t> flush_bytes_written{0};
  std::atomic<uint64_t> flush_count{0};
  std::atomic<uint64_t> compaction_bytes_read{0};
  std::atomic<uint64_t> compaction_bytes_written{0};
  std::atomic<uint64_t> compaction_rows_in{0};
  std::atomic<uint64_t> compaction_rows_out{0};
  std::atomic<uint64_t> compaction_jobs{0};
  std::atomic<uint64_t> compaction_wall_us{0};
  std::atomic<uint64_t> stall_wall_us{0};
  std::atomic<uint64_t> stall_events{0};

  static Counters& Get();
};

// Plain-value copy of all counters, for deltas in tests and reports.
struct CounterSnapshot {
  uint64_t dict_decodes = 0;
  uint64_t dict_build_cmps = 0;
  uint64_t dict_merge_cmps = 0;
  uint64_t dict_encode_cmps = 0;
  uint64_t bloom_block_skips = 0;
  uint64_t bloom_block_hits = 0;
  uint64_t point_file_probes = 0;
  uint64_t blocks_read = 0;
  uint64_t bulk_reads = 0;
  uint64_t filter_codes_tested = 0;
  uint64_t filter_value_bytes = 0;
  uint64_t filter_rows_scanned = 0;
  uint64_t flush_bytes_written = 0;
  uint64_t flush_count = 0;
  uint64_t compaction_bytes_read = 0;
  uint64_t compaction_bytes_written = 0;
  uint64_t compaction_rows_in = 0;
  uint64_t compaction_rows_out = 0;
  uint64_t compaction_jobs = 0;
  uint64_t compaction_wall_us = 0;
  uint64_t stall_wall_us = 0;
  uint64_t stall_events = 0;

  static CounterSnapshot Take();
  CounterSnapshot Delta(const CounterSnapshot& earlier) const;
  std::map<std::string, uint64_t> ToMap() const;
};

inline void CounterAdd(std::atomic<uint64_t>& c, uint64_t n) {
  c.fetch_add(n, std::memory_order_relaxed);
}

}  // namespace sctdb

#endif  // SCTDB_STATS_H_
