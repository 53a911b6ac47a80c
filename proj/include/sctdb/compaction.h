// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Leveling compaction. The primary path (kCodeRemap) never materializes a
// surviving value: rows are merged by key, each output file's dictionary
// is rebuilt by merging the input dictionaries over the codes actually
// used, and every row's code is rewritten through an O(1) remap table.
// String work is confined to the dictionary merge.

#ifndef SCTDB_COMPACTION_H_
#define SCTDB_COMPACTION_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sctdb/options.h"
#include "sctdb/sct_reader.h"
#include "sctdb/status.h"
#include "sctdb/types.h"

namespace sctdb {

// One row of the merged sequence. Views point into the source cursors and
// are valid only until the stream advances.
struct MergedRow {
  std::string_view key;
  SequenceNumber seq = 0;
  EntryKind kind = EntryKind::kPut;
  uint32_t code = 0;         // coded sources, kind == kPut
  std::string_view value;    // plain sources, kind == kPut
  uint32_t source = 0;       // index into the job's inputs
};

// k-way merge over sorted table cursors with version garbage collection:
// once a version with seq <= oldest_snapshot_seq has been seen for a key,
// every older version of that key is invisible to all live snapshots and
// is dropped. A tombstone clearing the same boundary is itself dropped at
// the bottom level, where nothing older can exist below.
class MergeStream {
 public:
  MergeStream(std::vector<std::shared_ptr<const SctFile>> inputs,
              SequenceNumber oldest_snapshot_seq, bool bottom_level);

  // False at end of stream. Check status() afterwards.
  bool Next(MergedRow* row);
  Status status() const { return status_; }
  uint64_t rows_in() const { return rows_in_; }

 private:
  bool PopSmallest(MergedRow* row);

  std::vector<std::shared_ptr<const SctFile>> files_;
  std::vector<SctFile::Cursor> cursors_;
  SequenceNumber oldest_snapshot_;
  bool bottom_level_;

  // The winning cursor is advanced lazily on the next Next() call so the
  // returned row's views stay alive in between.
  int pending_advance_ = -1;

  std::string current_key_;
  SequenceNumber last_pop_seq_ = 0;
  bool have_key_ = false;
  bool drop_rest_of_key_ = false;
  uint64_t rows_in_ = 0;
  Status status_;
};

enum class CompactionAlgo {
  // Merge in the code domain via dictionary merge + remap table; zero
  // value decodes on surviving rows.
  kCodeRemap,
  // Baseline pipeline shape: decode every surviving value, merge on
  // strings, rebuild each output dictionary from the raw values and
  // re-encode. Same outputs as kCodeRemap, measured cost is higher.
  kDecodeReencode,
  // Raw-layout mode: values are carried and written as plain bytes.
  kPlainRows,
};

struct CompactionJob {
  std::vector<std::shared_ptr<const SctFile>> inputs;
  int target_level = 1;
  bool bottom_level = false;
  SequenceNumber oldest_snapshot_seq = kMaxSequence;
  uint64_t output_budget = 0;  // per-file byte budget (F); 0 = options value
  std::string out_dir;
  // Yields the id (and thus file name) for each output table.
  std::function<uint64_t()> allocate_id;
};

struct CompactionResult {
  std::vector<std::shared_ptr<SctFile>> files;
  uint64_t rows_in = 0;
  uint64_t rows_out = 0;
  uint64_t bytes_read = 0;
  uint64_t bytes_written = 0;
  // Value-domain string comparisons performed by this job (dictionary
  // build + merge + encode counter deltas).
  uint64_t string_comparisons = 0;
  uint64_t wall_us = 0;
};

Status RunCompaction(const Options& options, const CompactionJob& job,
                     CompactionAlgo algo, CompactionResult* result);

}  // namespace sctdb

#endif  // SCTDB_COMPACTION_H_
