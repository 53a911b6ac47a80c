// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/query.h"

#include <algorithm>
#include <cassert>

#include "sctdb/stats.h"
#include "util/env.h"

namespace sctdb {

namespace {

// One ordered source feeding the cross-level merge: a memtable iterator or
// a table cursor. Rows newer than the read sequence are skipped here so
// the merge only ever sees visible versions.
struct MergeSource {
  // Exactly one of these is active.
  std::unique_ptr<Memtable::Iterator> mem;
  std::unique_ptr<SctFile::Cursor> cur;
  const Memtable* memtable = nullptr;
  std::shared_ptr<const SctFile> file;
  SequenceNumber read_seq = 0;

  bool Valid() const { return mem ? mem->Valid() : cur->Valid(); }
  std::string_view key() const { return mem ? mem->key() : cur->key(); }
  SequenceNumber seq() const { return mem ? mem->seq() : cur->seq(); }
  EntryKind kind() const { return mem ? mem->kind() : cur->kind(); }

  void SkipInvisible() {
    while (Valid() && seq() > read_seq) Advance();
  }
  void Advance() {
    if (mem) {
      mem->Next();
    } else {
      cur->Next();
    }
  }
  void Next() {
    Advance();
    SkipInvisible();
  }
};

int SmallestSource(const std::vector<std::unique_ptr<MergeSource>>& sources) {
  int best = -1;
  for (size_t i = 0; i < sources.size(); i++) {
    if (!sources[i]->Valid()) continue;
    if (best < 0 ||
        CompareKeySeq(sources[i]->key(), sources[i]->seq(),
                      sources[best]->key(), sources[best]->seq()) < 0) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

bool Overlaps(const SctFile& f, std::string_view lo, std::string_view hi,
              bool hi_open) {
  const auto& d = f.descriptor();
  if (!lo.empty() && d.max_key < lo) return false;
  if (!hi.empty()) {
    if (hi_open ? d.min_key >= hi : d.min_key > hi) return false;
  }
  return true;
}

}  // namespace

Status PointLookup(const Options& options, const ReadView& view,
                   std::string_view key, std::string* value, bool* found) {
  (void)options;
  *found = false;
  for (const auto& mt : view.memtables) {
    switch (mt->Get(key, view.read_seq, value)) {
      case Memtable::GetResult::kFound:
        *found = true;
        return Status::OK();
      case Memtable::GetResult::kTombstone:
        return Status::OK();
      case Memtable::GetResult::kNotFound:
        break;
    }
  }

  for (size_t level = 0; level < view.levels.size(); level++) {
    for (const auto& file : view.levels[level]) {
      const auto& d = file->descriptor();
      if (key < d.min_key || key > d.max_key) continue;
      bool f = false;
      EntryRecord rec;
      Status s = file->PointProbe(key, view.read_seq, &f, &rec);
      if (!s.ok()) return s;
      if (!f) continue;
      if (rec.kind == EntryKind::kTombstone) return Status::OK();
      if (file->mode() == StorageMode::kCoded) {
        value->assign(file->dict().Decode(rec.code));
      } else {
        value->assign(rec.value);
      }
      *found = true;
      return Status::OK();
    }
  }
  return Status::OK();
}

Status RangeLookup(const Options& options, const ReadView& view,
                   std::string_view key_low, std::string_view key_high,
                   std::vector<std::pair<std::string, std::string>>* out) {
  out->clear();
  if (key_low >= key_high) return Status::OK();

  std::vector<std::unique_ptr<MergeSource>> sources;
  for (const auto& mt : view.memtables) {
    auto src = std::make_unique<MergeSource>();
    src->mem = std::make_unique<Memtable::Iterator>(mt->NewIterator());
    src->mem->Seek(key_low, kMaxSequence);
    src->memtable = mt.get();
    src->read_seq = view.read_seq;
    src->SkipInvisible();
    sources.push_back(std::move(src));
  }
  for (const auto& level : view.levels) {
    for (const auto& file : level) {
      if (!Overlaps(*file, key_low, key_high, /*hi_open=*/true)) continue;
      // Long scans load the whole file once instead of block at a time.
      const auto& kbs = file->key_blocks();
      size_t span = 0;
      for (const auto& b : kbs) {
        if (b.last_key >= key_low && b.first_key < key_high) span++;
      }
      if (span > options.bulk_read_blocks) {
        Status s = file->BulkLoad();
        if (!s.ok()) return s;
      }
      auto src = std::make_unique<MergeSource>();
      src->cur = std::make_unique<SctFile::Cursor>(file);
      src->cur->Seek(key_low, kMaxSequence);
      src->file = file;
      src->read_seq = view.read_seq;
      src->SkipInvisible();
      if (!src->cur->status().ok()) return src->cur->status();
      sources.push_back(std::move(src));
    }
  }

  std::string current_key;
  bool have_key = false;
  for (;;) {
    const int best = SmallestSource(sources);
    if (best < 0) break;
    MergeSource& src = *sources[best];
    if (src.key() >= key_high) break;

    const bool new_key = !have_key || src.key() != current_key;
    if (new_key) {
      current_key.assign(src.key());
      have_key = true;
      if (src.kind() == EntryKind::kPut) {
        std::string value;
        if (src.mem) {
          value.assign(src.mem->value());
        } else if (src.file->mode() == StorageMode::kCoded) {
          value.assign(src.file->dict().Decode(src.cur->code()));
        } else {
          value.assign(src.cur->value());
        }
        out->emplace_back(current_key, std::move(value));
      }
      // Tombstone winner: the key is elided.
    }
    src.Next();
    if (src.cur && !src.cur->status().ok()) return src.cur->status();
  }
  return Status::OK();
}

void ScanCodesToBitmap(const uint32_t* codes, size_t n, uint32_t lo,
                       uint32_t hi, std::vector<uint64_t>* out) {
  out->assign((n + 63) / 64, 0);
  if (lo >= hi) return;
  const uint32_t base = lo;
  const uint32_t span = hi - lo;  // c in [lo, hi) <=> c - lo < span
  uint64_t* bits = out->data();
  size_t done = 0;
  while (done < n) {
    const size_t chunk = std::min(kScanChunkCodes, n - done);
    const uint32_t* c = codes + done;
    // Branch-free over one 16 KiB chunk; the compiler vectorizes this.
    for (size_t j = 0; j < chunk; j++) {
      const uint64_t hit = (c[j] - base) < span ? 1u : 0u;
      bits[(done + j) >> 6] |= hit << ((done + j) & 63);
    }
    done += chunk;
  }
}

namespace {

struct FileScan {
  std::vector<uint64_t> bitmap;  // row -> predicate verdict
  bool scanned = false;          // false: empty interval, nothing matches

  bool Test(uint64_t row) const {
    if (!scanned) return false;
    return (bitmap[row >> 6] >> (row & 63)) & 1;
  }
};

}  // namespace

Status Filter(const Options& options, const ReadView& view,
              const ValuePredicate& p, FilterResult* out) {
  (void)options;
  out->rows.clear();
  out->stats = FilterStats();
  Status s = p.Validate();
  if (!s.ok()) return s;

  Counters& g = Counters::Get();
  out->stats.per_level_us.assign(view.levels.size(), 0);

  // Phase 1: per-file scan of the value columns. Coded files transform the
  // predicate into a code interval on their own dictionary and test the
  // 32-bit lanes; plain files compare raw bytes.
  std::vector<std::vector<FileScan>> scans(view.levels.size());
  for (size_t level = 0; level < view.levels.size(); level++) {
    const uint64_t t0 = NowMicros();
    scans[level].resize(view.levels[level].size());
    for (size_t fi = 0; fi < view.levels[level].size(); fi++) {
      const auto& file = view.levels[level][fi];
      FileScan& scan = scans[level][fi];
      out->stats.files_scanned++;
      if (file->mode() == StorageMode::kCoded) {
        uint32_t lo = 0, hi = 0;
        s = file->dict().CodeRange(p, &lo, &hi);
        if (!s.ok()) return s;
        if (lo >= hi) continue;  // shadow checks only; skip code column
        std::vector<uint32_t> codes;
        s = file->LoadAllCodes(&codes);
        if (!s.ok()) return s;
        ScanCodesToBitmap(codes.data(), codes.size(), lo, hi, &scan.bitmap);
        scan.scanned = true;
        out->stats.codes_tested += codes.size();
        out->stats.rows_scanned += codes.size();
        out->stats.value_bytes_touched += codes.size() * sizeof(uint32_t);
      } else {
        const uint64_t rows = file->descriptor().entry_count;
        scan.bitmap.assign((rows + 63) / 64, 0);
        SctFile::Cursor cur(file);
        for (cur.SeekToFirst(); cur.Valid(); cur.Next()) {
          if (cur.kind() != EntryKind::kPut) continue;
          const std::string_view v = cur.value();
          out->stats.value_bytes_touched += v.size();
          if (p.Matches(v)) {
            scan.bitmap[cur.row_index() >> 6] |= 1ull << (cur.row_index() & 63);
          }
        }
        if (!cur.status().ok()) return cur.status();
        scan.scanned = true;
        out->stats.rows_scanned += rows;
      }
    }
    out->stats.per_level_us[level] += NowMicros() - t0;
  }

  // Phase 2: cross-level merge discards stale versions. The newest visible
  // version of each key decides inclusion; only matches are decoded.
  std::vector<std::unique_ptr<MergeSource>> sources;
  std::vector<const FileScan*> source_scan;
  for (const auto& mt : view.memtables) {
    auto src = std::make_unique<MergeSource>();
    src->mem = std::make_unique<Memtable::Iterator>(mt->NewIterator());
    src->mem->SeekToFirst();
    src->memtable = mt.get();
    src->read_seq = view.read_seq;
    src->SkipInvisible();
    sources.push_back(std::move(src));
    source_scan.push_back(nullptr);
  }
  for (size_t level = 0; level < view.levels.size(); level++) {
    for (size_t fi = 0; fi < view.levels[level].size(); fi++) {
      const auto& file = view.levels[level][fi];
      auto src = std::make_unique<MergeSource>();
      src->cur = std::make_unique<SctFile::Cursor>(file);
      src->cur->SeekToFirst();
      src->file = file;
      src->read_seq = view.read_seq;
      src->SkipInvisible();
      if (!src->cur->status().ok()) return src->cur->status();
      sources.push_back(std::move(src));
      source_scan.push_back(&scans[level][fi]);
    }
  }

  std::string current_key;
  bool have_key = false;
  for (;;) {
    const int best = SmallestSource(sources);
    if (best < 0) break;
    MergeSource& src = *sources[best];

    const bool new_key = !have_key || src.key() != current_key;
    if (new_key) {
      current_key.assign(src.key());
      have_key = true;
      if (src.kind() == EntryKind::kPut) {
        if (src.mem) {
          const std::string_view v = src.mem->value();
          out->stats.rows_scanned++;
          out->stats.value_bytes_touched += v.size();
          if (p.Matches(v)) {
            out->rows.emplace_back(current_key, std::string(v));
          }
        } else if (source_scan[best]->Test(src.cur->row_index())) {
          std::string value;
          if (src.file->mode() == StorageMode::kCoded) {
            value.assign(src.file->dict().Decode(src.cur->code()));
            out->stats.decodes++;
          } else {
            value.assign(src.cur->value());
          }
          out->rows.emplace_back(current_key, std::move(value));
        }
      }
    }
    src.Next();
    if (src.cur && !src.cur->status().ok()) return src.cur->status();
  }

  CounterAdd(g.filter_codes_tested, out->stats.codes_tested);
  CounterAdd(g.filter_value_bytes, out->stats.value_bytes_touched);
  CounterAdd(g.filter_rows_scanned, out->stats.rows_scanned);
  return Status::OK();
}

}  // namespace sctdb
