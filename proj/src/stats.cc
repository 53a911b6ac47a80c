// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/stats.h"

namespace sctdb {

Counters& Counters::Get() {
  static Counters instance;
  return instance;
}

namespace {
inline uint64_t Load(const std::atomic<uint64_t>& a) {
  return a.load(std::memory_order_relaxed);
}
}  // namespace

CounterSnapshot CounterSnapshot::Take() {
  const Counters& c = Counters::Get();
  CounterSnapshot s;
  s.dict_decodes = Load(c.dict_decodes);
  s.dict_build_cmps = Load(c.dict_build_cmps);
  s.dict_merge_cmps = Load(c.dict_merge_cmps);
  s.dict_encode_cmps = Load(c.dict_encode_cmps);
  s.bloom_block_skips = Load(c.bloom_block_skips);
  s.bloom_block_hits = Load(c.bloom_block_hits);
  s.point_file_probes = Load(c.point_file_probes);
  s.blocks_read = Load(c.blocks_read);
  s.bulk_reads = Load(c.bulk_reads);
  s.filter_codes_tested = Load(c.filter_codes_tested);
  s.filter_value_bytes = Load(c.filter_value_bytes);
  s.filter_rows_scanned = Load(c.filter_rows_scanned);
  s.flush_bytes_written = Load(c.flush_bytes_written);
  s.flush_count = Load(c.flush_count);
  s.compaction_bytes_read = Load(c.compaction_bytes_read);
  s.compaction_bytes_written = Load(c.compaction_bytes_written);
  s.compaction_rows_in = Load(c.compaction_rows_in);
  s.compaction_rows_out = Load(c.compaction_rows_out);
  s.compaction_jobs = Load(c.compaction_jobs);
  s.compaction_wall_us = Load(c.compaction_wall_us);
  s.stall_wall_us = Load(c.stall_wall_us);
  s.stall_events = Load(c.stall_events);
  return s;
}

CounterSnapshot CounterSnapshot::Delta(const CounterSnapshot& earlier) const {
  CounterSnapshot d;
  d.dict_decodes = dict_decodes - earlier.dict_decodes;
  d.dict_build_cmps = dict_build_cmps - earlier.dict_build_cmps;
  d.dict_merge_cmps = dict_merge_cmps - earlier.dict_merge_cmps;
  d.dict_encode_cmps = dict_encode_cmps - earlier.dict_encode_cmps;
  d.bloom_block_skips = bloom_block_skips - earlier.bloom_block_skips;
  d.bloom_block_hits = bloom_block_hits - earlier.bloom_block_hits;
  d.point_file_probes = point_file_probes - earlier.point_file_probes;
  d.blocks_read = blocks_read - earlier.blocks_read;
  d.bulk_reads = bulk_reads - earlier.bulk_reads;
  d.filter_codes_tested = filter_codes_tested - earlier.filter_codes_tested;
  d.filter_value_bytes = filter_value_bytes - earlier.filter_value_bytes;
  d.filter_rows_scanned = filter_rows_scanned - earlier.filter_rows_scanned;
  d.flush_bytes_written = flush_bytes_written - earlier.flush_bytes_written;
  d.flush_count = flush_count - earlier.flush_count;
  d.compaction_bytes_read = compaction_bytes_read - earlier.compaction_bytes_read;
  d.compaction_bytes_written =
      compaction_bytes_written - earlier.compaction_bytes_written;
  d.compaction_rows_in = compaction_rows_in - earlier.compaction_rows_in;
  d.compaction_rows_out = compaction_rows_out - earlier.compaction_rows_out;
  d.compaction_jobs = compaction_jobs - earlier.compaction_jobs;
  d.compaction_wall_us = compaction_wall_us - earlier.compaction_wall_us;
  d.stall_wall_us = stall_wall_us - earlier.stall_wall_us;
  d.stall_events = stall_events - earlier.stall_events;
  return d;
}

std::map<std::string, uint64_t> CounterSnapshot::ToMap() const {
  return {
      {"dict.decodes", dict_decodes},
      {"dict.build_string_cmps", dict_build_cmps},
      {"dict.merge_string_cmps", dict_merge_cmps},
      {"dict.encode_string_cmps", dict_encode_cmps},
      {"bloom.block_skips", bloom_block_skips},
      {"bloom.block_hits", bloom_block_hits},
      {"point.file_probes", point_file_probes},
      {"io.blocks_read", blocks_read},
      {"io.bulk_reads", bulk_reads},
      {"filter.codes_tested", filter_codes_tested},
      {"filter.value_bytes", filter_value_bytes},
      {"filter.rows_scanned", filter_rows_scanned},
      {"flush.bytes_written", flush_bytes_written},
      {"flush.count", flush_count},
      {"compaction.bytes_read", compaction_bytes_read},
      {"compaction.bytes_written", compaction_bytes_written},
      {"compaction.rows_in", compaction_rows_in},
      {"compaction.rows_out", compaction_rows_out},
      {"compaction.jobs", compaction_jobs},
      {"compaction.wall_us", compaction_wall_us},
      {"stall.wall_us", stall_wall_us},
      {"stall.events", stall_events},
  };
}

}  // namespace sctdb
