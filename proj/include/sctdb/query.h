// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Read operations over a pinned view of the engine: point and range
// lookups, and value filtering evaluated directly on code columns.

#ifndef SCTDB_QUERY_H_
#define SCTDB_QUERY_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sctdb/memtable.h"
#include "sctdb/options.h"
#include "sctdb/predicate.h"
#include "sctdb/sct_reader.h"
#include "sctdb/status.h"
#include "sctdb/types.h"

namespace sctdb {

// Everything a read needs, pinned: shared ownership keeps memtables and
// files alive for the duration of the operation or snapshot.
struct ReadView {
  SequenceNumber read_seq = 0;
  // Newest first: active memtable, then frozen ones young to old.
  std::vector<std::shared_ptr<const Memtable>> memtables;
  // levels[0] newest file first; deeper levels sorted by key range.
  std::vector<std::vector<std::shared_ptr<const SctFile>>> levels;
};

struct FilterStats {
  uint64_t rows_scanned = 0;
  uint64_t codes_tested = 0;
  uint64_t value_bytes_touched = 0;
  uint64_t decodes = 0;
  uint64_t files_scanned = 0;
  std::vector<uint64_t> per_level_us;
};

struct FilterResult {
  // Latest visible version of each qualifying key, ascending by key.
  std::vector<std::pair<std::string, std::string>> rows;
  FilterStats stats;
};

Status PointLookup(const Options& options, const ReadView& view,
                   std::string_view key, std::string* value, bool* found);

// Latest visible versions with key in [key_low, key_high), ascending.
Status RangeLookup(const Options& options, const ReadView& view,
                   std::string_view key_low, std::string_view key_high,
                   std::vector<std::pair<std::string, std::string>>* out);

// Evaluates p against the latest visible version of every key. Coded
// files are scanned on their 32-bit code lanes in L1-sized chunks after a
// per-file predicate-to-interval transformation; only matching winners are
// decoded. Files whose interval is empty still contribute key presence for
// stale-version elimination but skip their code columns.
Status Filter(const Options& options, const ReadView& view,
              const ValuePredicate& p, FilterResult* out);

// Scan kernel: sets bit j of out when lo <= codes[j] < hi. Processes
// fixed 4096-lane chunks (16 KiB, L1-sized); exposed for equivalence
// tests against the scalar path.
void ScanCodesToBitmap(const uint32_t* codes, size_t n, uint32_t lo,
                       uint32_t hi, std::vector<uint64_t>* out);

inline constexpr size_t kScanChunkCodes = 4096;

}  // namespace sctdb

#endif  // SCTDB_QUERY_H_
