// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/compaction.h"

#include <cassert>
#include <unordered_set>

#include "sctdb/dictionary.h"
#include "sctdb/sct_writer.h"
#include "sctdb/stats.h"
#include "util/env.h"

namespace sctdb {

MergeStream::MergeStream(std::vector<std::shared_ptr<const SctFile>> inputs,
                         SequenceNumber oldest_snapshot_seq, bool bottom_level)
    : files_(std::move(inputs)),
      oldest_snapshot_(oldest_snapshot_seq),
      bottom_level_(bottom_level) {
  cursors_.reserve(files_.size());
  for (const auto& f : files_) {
    cursors_.emplace_back(f);
    cursors_.back().SeekToFirst();
  }
}

bool MergeStream::PopSmallest(MergedRow* row) {
  if (pending_advance_ >= 0) {
    cursors_[pending_advance_].Next();
    pending_advance_ = -1;
  }
  // Inputs are few (one upper file or a handful of L0 files plus the
  // overlapping next-level run); a linear scan beats heap bookkeeping.
  int best = -1;
  for (size_t i = 0; i < cursors_.size(); i++) {
    auto& c = cursors_[i];
    if (!c.Valid()) {
      if (!c.status().ok()) {
        status_ = c.status();
        return false;
      }
      continue;
    }
    if (best < 0 ||
        CompareKeySeq(c.key(), c.seq(), cursors_[best].key(),
                      cursors_[best].seq()) < 0) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) return false;

  auto& c = cursors_[best];
  row->key = c.key();
  row->seq = c.seq();
  row->kind = c.kind();
  row->source = static_cast<uint32_t>(best);
  if (files_[best]->mode() == StorageMode::kCoded) {
    row->code = c.code();
    row->value = {};
  } else {
    row->code = 0;
    row->value = row->kind == EntryKind::kPut ? c.value() : std::string_view{};
  }
  return true;
}

bool MergeStream::Next(MergedRow* row) {
  for (;;) {
    if (!PopSmallest(row)) return false;
    rows_in_++;
    pending_advance_ = static_cast<int>(row->source);

    // Inputs must form a strictly increasing merged order.
    if (have_key_ &&
        CompareKeySeq(current_key_, last_pop_seq_, row->key, row->seq) >= 0) {
      status_ = Status::UnsortedInput("merged inputs out of order");
      return false;
    }

    const bool new_key = !have_key_ || row->key != current_key_;
    if (new_key) {
      current_key_.assign(row->key);
      have_key_ = true;
      drop_rest_of_key_ = false;
    }
    last_pop_seq_ = row->seq;

    const bool shadowed = drop_rest_of_key_;
    if (row->seq <= oldest_snapshot_) drop_rest_of_key_ = true;

    if (shadowed) continue;
    if (row->kind == EntryKind::kTombstone && bottom_level_ &&
        row->seq <= oldest_snapshot_) {
      continue;  // physical delete: the tombstone met its owner
    }
    return true;
  }
}

namespace {

// Accumulates the rows of one output file. Keys and plain values are
// copied into flat buffers so the batch owns everything it holds.
struct RowBatch {
  std::string keys;
  std::vector<SequenceNumber> seqs;
  std::vector<uint8_t> kinds;
  std::vector<uint32_t> codes;
  std::vector<uint32_t> sources;
  std::string value_bytes;
  std::vector<uint64_t> value_offsets;  // n+1 when tracking values

  // Distinct tracking for the output-size estimate.
  std::vector<std::vector<bool>> used;  // kCodeRemap: per source
  uint64_t distinct_count = 0;
  uint64_t distinct_bytes = 0;
  std::unordered_set<std::string_view> distinct_values;  // naive path

  size_t size = 0;
  size_t key_size = 0;

  void Clear(size_t n_sources, const CompactionJob& job) {
    keys.clear();
    seqs.clear();
    kinds.clear();
    codes.clear();
    sources.clear();
    value_bytes.clear();
    value_offsets.assign(1, 0);
    used.assign(n_sources, {});
    for (size_t i = 0; i < n_sources; i++) {
      if (job.inputs[i]->mode() == StorageMode::kCoded) {
        used[i].assign(job.inputs[i]->dict().size(), false);
      }
    }
    distinct_count = 0;
    distinct_bytes = 0;
    distinct_values.clear();
    size = 0;
  }

  std::string_view key_at(size_t i) const {
    return std::string_view(keys).substr(i * key_size, key_size);
  }
  std::string_view value_at(size_t i) const {
    return std::string_view(value_bytes)
        .substr(value_offsets[i], value_offsets[i + 1] - value_offsets[i]);
  }
};

}  // namespace

Status RunCompaction(const Options& options, const CompactionJob& job,
                     CompactionAlgo algo, CompactionResult* result) {
  const uint64_t t0 = NowMicros();
  const CounterSnapshot before = CounterSnapshot::Take();

  for (const auto& in : job.inputs) {
    const bool coded = in->mode() == StorageMode::kCoded;
    if (algo == CompactionAlgo::kPlainRows && coded) {
      return Status::InvalidArgument("plain compaction over coded inputs");
    }
    if (algo != CompactionAlgo::kPlainRows && !coded) {
      return Status::InvalidArgument("coded compaction over plain inputs");
    }
  }

  const uint64_t budget =
      job.output_budget == 0 ? options.file_size : job.output_budget;
  const StorageMode out_mode = algo == CompactionAlgo::kPlainRows
                                   ? StorageMode::kPlain
                                   : StorageMode::kCoded;

  if (!job.allocate_id) {
    return Status::InvalidArgument("compaction job needs an id allocator");
  }
  MergeStream stream(job.inputs, job.oldest_snapshot_seq, job.bottom_level);

  RowBatch batch;
  batch.key_size = options.key_size;
  batch.Clear(job.inputs.size(), job);

  result->files.clear();
  result->rows_out = 0;
  result->bytes_written = 0;

  auto estimate = [&]() -> uint64_t {
    if (out_mode == StorageMode::kPlain) {
      return EstimateSctBytes(options, batch.seqs.size(), 0, 0,
                              batch.value_bytes.size(), StorageMode::kPlain);
    }
    return EstimateSctBytes(options, batch.seqs.size(), batch.distinct_count,
                            batch.distinct_bytes, 0, StorageMode::kCoded);
  };

  auto flush_batch = [&]() -> Status {
    const size_t n = batch.seqs.size();
    if (n == 0) return Status::OK();
    const uint64_t next_id = job.allocate_id();
    const std::string path =
        job.out_dir + "/sct_" + std::to_string(next_id) + ".sct";

    Status s;
    if (algo == CompactionAlgo::kCodeRemap) {
      // Rebuild this file's dictionary from the sources over the codes in
      // use, then rewrite rows through the O(1) remap table. No surviving
      // value is ever decoded here.
      std::vector<DictionarySource> sources(job.inputs.size());
      for (size_t i = 0; i < job.inputs.size(); i++) {
        sources[i].sct_id = job.inputs[i]->id();
        sources[i].dict = &job.inputs[i]->dict();
        sources[i].used = batch.used[i];
      }
      DictionaryMergeResult merge;
      s = MergeDictionaries(sources, &merge);
      if (!s.ok()) return s;

      SctWriter writer(options, path, next_id, &merge.merged);
      for (size_t i = 0; i < n; i++) {
        const EntryKind kind = static_cast<EntryKind>(batch.kinds[i]);
        const uint32_t code =
            kind == EntryKind::kPut
                ? merge.remap.Remap(batch.sources[i], batch.codes[i])
                : 0;
        s = writer.Add(batch.key_at(i), batch.seqs[i], kind, code);
        if (!s.ok()) return s;
      }
      s = writer.Finish();
      if (!s.ok()) return s;
      result->bytes_written += writer.descriptor().file_size_bytes;
    } else if (algo == CompactionAlgo::kDecodeReencode) {
      // Heavy pipeline: the dictionary is rebuilt by sorting the raw value
      // multiset, then every row is re-encoded by binary search.
      std::vector<std::string> raw;
      raw.reserve(n);
      for (size_t i = 0; i < n; i++) {
        if (static_cast<EntryKind>(batch.kinds[i]) == EntryKind::kPut) {
          raw.emplace_back(batch.value_at(i));
        }
      }
      Dictionary dict = Dictionary::Build(std::move(raw));
      SctWriter writer(options, path, next_id, &dict);
      for (size_t i = 0; i < n; i++) {
        const EntryKind kind = static_cast<EntryKind>(batch.kinds[i]);
        uint32_t code = 0;
        if (kind == EntryKind::kPut) {
          auto c = dict.Encode(batch.value_at(i));
          if (!c.has_value()) return Status::NotInDomain();
          code = *c;
        }
        s = writer.Add(batch.key_at(i), batch.seqs[i], kind, code);
        if (!s.ok()) return s;
      }
      s = writer.Finish();
      if (!s.ok()) return s;
      result->bytes_written += writer.descriptor().file_size_bytes;
    } else {
      SctWriter writer(options, path, next_id, nullptr);
      for (size_t i = 0; i < n; i++) {
        const EntryKind kind = static_cast<EntryKind>(batch.kinds[i]);
        s = writer.AddPlain(batch.key_at(i), batch.seqs[i], kind,
                            kind == EntryKind::kPut ? batch.value_at(i)
                                                    : std::string_view{});
        if (!s.ok()) return s;
      }
      s = writer.Finish();
      if (!s.ok()) return s;
      result->bytes_written += writer.descriptor().file_size_bytes;
    }

    std::shared_ptr<SctFile> out_file;
    s = SctFile::Open(options, path, next_id, &out_file);
    if (!s.ok()) return s;
    result->files.push_back(std::move(out_file));
    result->rows_out += n;
    batch.Clear(job.inputs.size(), job);
    return Status::OK();
  };

  MergedRow row;
  std::string prev_key;
  bool have_prev = false;
  while (stream.Next(&row)) {
    const bool new_key = !have_prev || row.key != prev_key;
    if (new_key && !batch.seqs.empty() && estimate() >= budget) {
      Status s = flush_batch();
      if (!s.ok()) return s;
    }
    if (new_key) {
      prev_key.assign(row.key);
      have_prev = true;
    }

    batch.keys.append(row.key);
    batch.seqs.push_back(row.seq);
    batch.kinds.push_back(static_cast<uint8_t>(row.kind));
    batch.sources.push_back(row.source);
    batch.codes.push_back(row.code);

    if (row.kind == EntryKind::kPut) {
      if (algo == CompactionAlgo::kCodeRemap) {
        auto& used = batch.used[row.source];
        if (!used[row.code]) {
          used[row.code] = true;
          batch.distinct_count++;
          batch.distinct_bytes +=
              job.inputs[row.source]->dict().ValueSize(row.code);
        }
        batch.value_offsets.push_back(batch.value_bytes.size());
      } else if (algo == CompactionAlgo::kDecodeReencode) {
        // The naive pipeline decodes every surviving value.
        std::string_view v = job.inputs[row.source]->dict().Decode(row.code);
        batch.value_bytes.append(v);
        batch.value_offsets.push_back(batch.value_bytes.size());
        auto [it, inserted] = batch.distinct_values.insert(v);
        if (inserted) {
          batch.distinct_count++;
          batch.distinct_bytes += v.size();
        }
      } else {
        batch.value_bytes.append(row.value);
        batch.value_offsets.push_back(batch.value_bytes.size());
      }
    } else {
      batch.value_offsets.push_back(batch.value_bytes.size());
    }
  }
  if (!stream.status().ok()) return stream.status();
  Status s = flush_batch();
  if (!s.ok()) return s;

  result->rows_in = stream.rows_in();
  result->bytes_read = 0;
  for (const auto& in : job.inputs) {
    result->bytes_read += in->descriptor().file_size_bytes;
  }
  const CounterSnapshot after = CounterSnapshot::Take();
  const CounterSnapshot d = after.Delta(before);
  result->string_comparisons =
      d.dict_build_cmps + d.dict_merge_cmps + d.dict_encode_cmps;
  result->wall_us = NowMicros() - t0;

  Counters& g = Counters::Get();
  CounterAdd(g.compaction_bytes_read, result->bytes_read);
  CounterAdd(g.compaction_bytes_written, result->bytes_written);
  CounterAdd(g.compaction_rows_in, result->rows_in);
  CounterAdd(g.compaction_rows_out, result->rows_out);
  CounterAdd(g.compaction_jobs, 1);
  CounterAdd(g.compaction_wall_us, result->wall_us);
  return Status::OK();
}

}  // namespace sctdb
