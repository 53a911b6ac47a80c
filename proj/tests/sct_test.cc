// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include <doctest.h>

#include <fstream>
#include <random>

#include "sctdb/sct_reader.h"
#include "sctdb/sct_writer.h"
#include "sctdb/stats.h"
#include "testutil.h"
#include "util/bitpack.h"
#include "util/env.h"

namespace sctdb {
namespace {

Options TestOptions() {
  Options o;
  o.key_size = 16;
  return o;
}

std::vector<test::RawRow> RandomRows(std::mt19937_64& rng, size_t n,
                                     size_t key_space, size_t ndv,
                                     double tombstone_frac = 0.1) {
  std::vector<std::string> pool;
  for (size_t i = 0; i < ndv; i++) {
    pool.push_back(test::RandomString(rng, 4, 40));
  }
  std::vector<test::RawRow> rows;
  SequenceNumber seq = 0;
  for (size_t i = 0; i < n; i++) {
    test::RawRow r;
    r.key = test::MakeKey(rng() % key_space);
    r.seq = ++seq;
    if (static_cast<double>(rng() % 1000) < tombstone_frac * 1000) {
      r.kind = EntryKind::kTombstone;
    } else {
      r.kind = EntryKind::kPut;
      r.value = pool[rng() % pool.size()];
    }
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

TEST_CASE("empty row set is an error") {
  test::TempDir dir;
  Options options = TestOptions();
  Dictionary dict = Dictionary::Build({"v"});
  SctWriter writer(options, dir.path() + "/e.sct", 1, &dict);
  CHECK(writer.Finish().IsEmptyFile());
}

TEST_CASE("three rows over m=2 pack into one payload byte") {
  test::TempDir dir;
  Options options = TestOptions();
  Dictionary dict = Dictionary::Build({"aa", "bb"});
  CHECK_EQ(dict.code_width_bits(), 1);

  SctWriter writer(options, dir.path() + "/w.sct", 1, &dict);
  REQUIRE(writer.Add(test::MakeKey(1), 3, EntryKind::kPut, 0).ok());
  REQUIRE(writer.Add(test::MakeKey(2), 2, EntryKind::kPut, 1).ok());
  REQUIRE(writer.Add(test::MakeKey(3), 1, EntryKind::kPut, 0).ok());
  REQUIRE(writer.Finish().ok());

  std::shared_ptr<SctFile> file;
  REQUIRE(SctFile::Open(options, dir.path() + "/w.sct", 1, &file).ok());
  CHECK_EQ(PackedBytes(3, dict.code_width_bits()), 1);
  CHECK_EQ(PackedBytes(3, file->descriptor().code_width_bits), 1);

  std::vector<uint32_t> codes;
  REQUIRE(file->ReadCodeBlock(0, &codes).ok());
  REQUIRE_EQ(codes.size(), 3);
  CHECK_EQ(codes[0], 0);
  CHECK_EQ(codes[1], 1);
  CHECK_EQ(codes[2], 0);
}

TEST_CASE("unsorted input is rejected") {
  test::TempDir dir;
  Options options = TestOptions();
  Dictionary dict = Dictionary::Build({"v"});
  SctWriter writer(options, dir.path() + "/u.sct", 1, &dict);
  REQUIRE(writer.Add(test::MakeKey(2), 5, EntryKind::kPut, 0).ok());
  CHECK(writer.Add(test::MakeKey(1), 6, EntryKind::kPut, 0).IsUnsortedInput());
  // Same key must be seq-descending.
  CHECK(writer.Add(test::MakeKey(2), 7, EntryKind::kPut, 0).IsUnsortedInput());
}

TEST_CASE("code out of dictionary range is rejected") {
  test::TempDir dir;
  Options options = TestOptions();
  Dictionary dict = Dictionary::Build({"v"});
  SctWriter writer(options, dir.path() + "/c.sct", 1, &dict);
  CHECK(writer.Add(test::MakeKey(1), 1, EntryKind::kPut, 1).IsCodeOutOfRange());
}

TEST_CASE("bit-exact round trip of rows, dictionary and metadata") {
  test::TempDir dir;
  Options options = TestOptions();
  std::mt19937_64 rng(41);
  auto rows = RandomRows(rng, 100000, 40000, 500);

  auto file = test::BuildCodedSct(options, dir.path() + "/r.sct", 7, rows);
  CHECK_EQ(file->descriptor().entry_count, rows.size());
  CHECK_EQ(file->descriptor().min_key, rows.front().key);
  CHECK_EQ(file->descriptor().max_key, rows.back().key);

  auto back = test::DecodeAll(file);
  REQUIRE_EQ(back.size(), rows.size());
  CHECK(back == rows);
}

TEST_CASE("second write of read-back rows is byte identical") {
  test::TempDir dir;
  Options options = TestOptions();
  std::mt19937_64 rng(43);
  auto rows = RandomRows(rng, 20000, 8000, 300);
  auto file = test::BuildCodedSct(options, dir.path() + "/a.sct", 1, rows);

  // Rebuild from what the reader surfaces.
  std::vector<EntryRecord> recs;
  REQUIRE(ReadAllRows(file, &recs).ok());
  SctWriter writer(options, dir.path() + "/b.sct", 1, &file->dict());
  for (const auto& r : recs) {
    REQUIRE(writer.Add(r.user_key, r.seq, r.kind, r.code).ok());
  }
  REQUIRE(writer.Finish().ok());

  std::string a, b;
  REQUIRE(ReadFileToString(dir.path() + "/a.sct", &a).ok());
  REQUIRE(ReadFileToString(dir.path() + "/b.sct", &b).ok());
  CHECK(a == b);
}

TEST_CASE("point probe finds the newest visible version") {
  test::TempDir dir;
  Options options = TestOptions();
  std::vector<test::RawRow> rows = {
      {test::MakeKey(5), 9, EntryKind::kPut, "newer"},
      {test::MakeKey(5), 4, EntryKind::kPut, "older"},
      {test::MakeKey(7), 6, EntryKind::kTombstone, ""},
      {test::MakeKey(7), 2, EntryKind::kPut, "dead"},
  };
  auto file = test::BuildCodedSct(options, dir.path() + "/p.sct", 1, rows);

  bool found = false;
  EntryRecord rec;
  REQUIRE(file->PointProbe(test::MakeKey(5), 100, &found, &rec).ok());
  REQUIRE(found);
  CHECK_EQ(file->dict().Decode(rec.code), "newer");

  REQUIRE(file->PointProbe(test::MakeKey(5), 4, &found, &rec).ok());
  REQUIRE(found);
  CHECK_EQ(file->dict().Decode(rec.code), "older");

  REQUIRE(file->PointProbe(test::MakeKey(5), 3, &found, &rec).ok());
  CHECK_FALSE(found);

  REQUIRE(file->PointProbe(test::MakeKey(7), 100, &found, &rec).ok());
  REQUIRE(found);
  CHECK_EQ(rec.kind, EntryKind::kTombstone);

  REQUIRE(file->PointProbe(test::MakeKey(6), 100, &found, &rec).ok());
  CHECK_FALSE(found);
}

TEST_CASE("probe for versions spanning key blocks") {
  test::TempDir dir;
  Options options = TestOptions();
  // One key with enough versions to cross several key blocks.
  std::vector<test::RawRow> rows;
  for (SequenceNumber s = 1; s <= 1000; s++) {
    rows.push_back({test::MakeKey(1), s, EntryKind::kPut,
                    "v" + std::to_string(s % 7)});
  }
  rows.push_back({test::MakeKey(2), 1001, EntryKind::kPut, "tail"});
  auto file = test::BuildCodedSct(options, dir.path() + "/s.sct", 1, rows);
  REQUIRE_GT(file->key_blocks().size(), 1);

  bool found = false;
  EntryRecord rec;
  for (SequenceNumber at : {1ull, 3ull, 170ull, 999ull, 1000ull}) {
    REQUIRE(file->PointProbe(test::MakeKey(1), at, &found, &rec).ok());
    REQUIRE(found);
    CHECK_EQ(rec.seq, at);
  }
}

TEST_CASE("bloom filters prune most absent-key block reads") {
  test::TempDir dir;
  Options options = TestOptions();
  std::mt19937_64 rng(47);
  // Sparse keys so probes for absent keys land inside block key ranges.
  std::vector<test::RawRow> rows;
  SequenceNumber seq = 0;
  for (int i = 0; i < 30000; i++) {
    rows.push_back({test::MakeKey(i * 2), ++seq, EntryKind::kPut, "v"});
  }
  auto file = test::BuildCodedSct(options, dir.path() + "/b.sct", 1, rows);

  const CounterSnapshot before = CounterSnapshot::Take();
  int trials = 0;
  for (int i = 0; i < 20000; i++) {
    bool found = false;
    EntryRecord rec;
    REQUIRE(file->PointProbe(test::MakeKey(i * 2 + 1), kMaxSequence, &found,
                             &rec)
                .ok());
    CHECK_FALSE(found);
    trials++;
  }
  const CounterSnapshot d = CounterSnapshot::Take().Delta(before);
  const double candidates =
      static_cast<double>(d.bloom_block_skips + d.bloom_block_hits);
  REQUIRE_GT(candidates, 0);
  // 10 bits/key double hashing: ~1% false positives; demand >= 95% skips.
  CHECK_GT(static_cast<double>(d.bloom_block_skips) / candidates, 0.95);
}

TEST_CASE("plain value layout round trips") {
  test::TempDir dir;
  Options options = TestOptions();
  options.mode = StorageMode::kPlain;
  std::mt19937_64 rng(53);

  std::vector<test::RawRow> rows;
  SequenceNumber seq = 0;
  for (int i = 0; i < 5000; i++) {
    test::RawRow r;
    r.key = test::MakeKey(rng() % 2000);
    r.seq = ++seq;
    if (rng() % 10 == 0) {
      r.kind = EntryKind::kTombstone;
    } else {
      r.value = test::RandomString(rng, 0, 300);
    }
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());

  SctWriter writer(options, dir.path() + "/v.sct", 3, nullptr);
  for (const auto& r : rows) {
    REQUIRE(writer.AddPlain(r.key, r.seq, r.kind, r.value).ok());
  }
  REQUIRE(writer.Finish().ok());

  std::shared_ptr<SctFile> file;
  REQUIRE(SctFile::Open(options, dir.path() + "/v.sct", 3, &file).ok());
  CHECK_EQ(file->mode(), StorageMode::kPlain);
  auto back = test::DecodeAll(file);
  CHECK(back == rows);

  bool found = false;
  EntryRecord rec;
  REQUIRE(
      file->PointProbe(rows[17].key, rows[17].seq, &found, &rec).ok());
  REQUIRE(found);
  if (rows[17].kind == EntryKind::kPut) CHECK_EQ(rec.value, rows[17].value);
}

TEST_CASE("corrupted data block byte reports a checksum mismatch") {
  test::TempDir dir;
  Options options = TestOptions();
  std::mt19937_64 rng(58);
  auto rows = RandomRows(rng, 2000, 1000, 50);
  auto file = test::BuildCodedSct(options, dir.path() + "/y.sct", 1, rows);
  const uint64_t key_block_offset = file->key_blocks()[0].offset;
  file.reset();

  std::string bytes;
  REQUIRE(ReadFileToString(dir.path() + "/y.sct", &bytes).ok());
  bytes[key_block_offset + 100] ^= 0x20;
  {
    std::ofstream f(dir.path() + "/y.sct", std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  REQUIRE(SctFile::Open(options, dir.path() + "/y.sct", 1, &file).ok());
  KeyBlockContents kb;
  CHECK(file->ReadKeyBlock(0, &kb).IsChecksumMismatch());
}

TEST_CASE("corrupting any payload byte is detected") {
  test::TempDir dir;
  Options options = TestOptions();
  std::mt19937_64 rng(59);
  auto rows = RandomRows(rng, 3000, 1500, 100);
  auto file = test::BuildCodedSct(options, dir.path() + "/x.sct", 1, rows);
  file.reset();

  std::string good;
  REQUIRE(ReadFileToString(dir.path() + "/x.sct", &good).ok());

  for (int trial = 0; trial < 40; trial++) {
    std::string bad = good;
    const size_t pos = rng() % bad.size();
    bad[pos] = static_cast<char>(bad[pos] ^ (1 + rng() % 255));
    {
      std::ofstream f(dir.path() + "/bad.sct", std::ios::binary);
      f.write(bad.data(), static_cast<std::streamsize>(bad.size()));
    }
    std::shared_ptr<SctFile> reopened;
    Status s = SctFile::Open(options, dir.path() + "/bad.sct", 9, &reopened);
    if (s.ok()) {
      std::vector<EntryRecord> recs;
      s = ReadAllRows(reopened, &recs);
    }
    CHECK_FALSE(s.ok());
  }
}

TEST_CASE("cursor seek lands on the first row at or after the target") {
  test::TempDir dir;
  Options options = TestOptions();
  std::mt19937_64 rng(60);
  auto rows = RandomRows(rng, 6000, 2500, 80);
  auto file = test::BuildCodedSct(options, dir.path() + "/q.sct", 1, rows);
  REQUIRE_GT(file->key_blocks().size(), 2);

  for (int trial = 0; trial < 300; trial++) {
    const auto& target = rows[rng() % rows.size()];
    // Seek both to the exact row and to (key, kMaxSequence).
    SctFile::Cursor cur(file);
    cur.Seek(target.key, target.seq);
    REQUIRE(cur.Valid());
    CHECK_EQ(cur.key(), target.key);
    CHECK_EQ(cur.seq(), target.seq);

    cur.Seek(target.key, kMaxSequence);
    REQUIRE(cur.Valid());
    CHECK_EQ(cur.key(), target.key);
    // First version of the key (largest seq).
    const uint64_t row = cur.row_index();
    if (row > 0) {
      SctFile::Cursor prev(file);
      prev.SeekToFirst();
      for (uint64_t i = 0; i + 1 < row; i++) prev.Next();
      CHECK_LT(prev.key(), target.key);
    }
  }

  // Past-the-end seek is invalid.
  SctFile::Cursor cur(file);
  cur.Seek(std::string(16, '\xff'), kMaxSequence);
  CHECK_FALSE(cur.Valid());
}

TEST_CASE("bulk load serves identical blocks") {
  test::TempDir dir;
  Options options = TestOptions();
  std::mt19937_64 rng(61);
  auto rows = RandomRows(rng, 8000, 4000, 64);
  auto file = test::BuildCodedSct(options, dir.path() + "/k.sct", 1, rows);
  const auto direct = test::DecodeAll(file);
  REQUIRE(file->BulkLoad().ok());
  const auto bulk = test::DecodeAll(file);
  CHECK(direct == bulk);
}

}  // namespace
}  // namespace sctdb
