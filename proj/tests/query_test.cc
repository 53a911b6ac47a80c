// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include <doctest.h>

#include <random>

#include "sctdb/memtable.h"
#include "sctdb/manifest.h"
#include "sctdb/query.h"
#include "sctdb/stats.h"
#include "testutil.h"

namespace sctdb {
namespace {

Options TestOptions() {
  Options o;
  o.key_size = 16;
  return o;
}

TEST_CASE("scan kernel equals scalar reference at chunk boundaries") {
  std::mt19937_64 rng(89);
  for (size_t n : {size_t{0}, size_t{1}, size_t{4095}, size_t{4096},
                   size_t{4097}, size_t{13000}}) {
    std::vector<uint32_t> codes(n);
    for (auto& c : codes) c = rng() % 1000;
    const uint32_t lo = rng() % 500;
    const uint32_t hi = lo + rng() % 500;

    std::vector<uint64_t> bitmap;
    ScanCodesToBitmap(codes.data(), n, lo, hi, &bitmap);

    for (size_t i = 0; i < n; i++) {
      const bool expect = codes[i] >= lo && codes[i] < hi;
      const bool got = (bitmap[i >> 6] >> (i & 63)) & 1;
      REQUIRE_EQ(expect, got);
    }
  }
}

TEST_CASE("scan kernel: empty interval matches nothing") {
  std::vector<uint32_t> codes = {1, 2, 3};
  std::vector<uint64_t> bitmap;
  ScanCodesToBitmap(codes.data(), codes.size(), 5, 5, &bitmap);
  CHECK_EQ(bitmap[0], 0);
}

// A small engine-state builder: memtable + two levels of files.
struct ViewFixture {
  test::TempDir dir;
  Options options = TestOptions();
  ReadView view;
  test::RefModel ref;
  SequenceNumber seq = 0;
  uint64_t next_id = 1;

  ViewFixture() { view.levels.resize(3); }

  void AddMemtableRows(const std::vector<test::RawRow>& rows) {
    auto mt = std::make_shared<Memtable>(options);
    for (const auto& r : rows) {
      if (r.kind == EntryKind::kPut) {
        test::CheckOk(mt->Put(r.key, r.value, r.seq), "mem put");
        ref.Put(r.key, r.value, r.seq);
      } else {
        test::CheckOk(mt->Delete(r.key, r.seq), "mem del");
        ref.Delete(r.key, r.seq);
      }
      seq = std::max(seq, r.seq);
    }
    view.memtables.insert(view.memtables.begin(), std::move(mt));
  }

  void AddFile(size_t level, std::vector<test::RawRow> rows) {
    const uint64_t id = next_id++;
    auto file =
        test::BuildCodedSct(options, SctPath(dir.path(), id), id, rows);
    view.levels[level].insert(view.levels[level].begin(), file);
    for (const auto& r : rows) {
      if (r.kind == EntryKind::kPut) {
        ref.Put(r.key, r.value, r.seq);
      } else {
        ref.Delete(r.key, r.seq);
      }
      seq = std::max(seq, r.seq);
    }
  }

  void Finish() { view.read_seq = seq; }
};

TEST_CASE("point lookup: tombstone in L0 shadows put in L2") {
  ViewFixture fx;
  fx.AddFile(2, {{test::MakeKey(1), 1, EntryKind::kPut, "old"}});
  fx.AddFile(0, {{test::MakeKey(1), 5, EntryKind::kTombstone, ""}});
  fx.Finish();

  std::string value;
  bool found = true;
  REQUIRE(PointLookup(fx.options, fx.view, test::MakeKey(1), &value, &found)
              .ok());
  CHECK_FALSE(found);
}

TEST_CASE("point lookup from memtable does no file probe") {
  ViewFixture fx;
  fx.AddFile(1, {{test::MakeKey(1), 1, EntryKind::kPut, "disk"}});
  fx.AddMemtableRows({{test::MakeKey(1), 5, EntryKind::kPut, "mem"}});
  fx.Finish();

  const CounterSnapshot before = CounterSnapshot::Take();
  std::string value;
  bool found = false;
  REQUIRE(PointLookup(fx.options, fx.view, test::MakeKey(1), &value, &found)
              .ok());
  REQUIRE(found);
  CHECK_EQ(value, "mem");
  const CounterSnapshot d = CounterSnapshot::Take().Delta(before);
  CHECK_EQ(d.point_file_probes, 0);
}

TEST_CASE("range lookup: empty range, cross-level dedup, tombstones") {
  ViewFixture fx;
  fx.AddFile(2, {{test::MakeKey(1), 1, EntryKind::kPut, "a1"},
                 {test::MakeKey(2), 2, EntryKind::kPut, "b1"},
                 {test::MakeKey(3), 3, EntryKind::kPut, "c1"}});
  fx.AddFile(1, {{test::MakeKey(2), 5, EntryKind::kPut, "b2"}});
  fx.AddMemtableRows({{test::MakeKey(3), 7, EntryKind::kTombstone, ""}});
  fx.Finish();

  std::vector<std::pair<std::string, std::string>> rows;
  REQUIRE(RangeLookup(fx.options, fx.view, test::MakeKey(0), test::MakeKey(0),
                      &rows)
              .ok());
  CHECK(rows.empty());

  REQUIRE(RangeLookup(fx.options, fx.view, test::MakeKey(0), test::MakeKey(9),
                      &rows)
              .ok());
  REQUIRE_EQ(rows.size(), 2);
  CHECK_EQ(rows[0].first, test::MakeKey(1));
  CHECK_EQ(rows[0].second, "a1");
  CHECK_EQ(rows[1].first, test::MakeKey(2));
  CHECK_EQ(rows[1].second, "b2");
}

TEST_CASE("filter: newer non-matching version suppresses older match") {
  ViewFixture fx;
  fx.AddFile(1, {{test::MakeKey(1), 1, EntryKind::kPut, "match-me"}});
  fx.AddFile(0, {{test::MakeKey(1), 5, EntryKind::kPut, "zzz"}});
  fx.Finish();

  FilterResult result;
  REQUIRE(sctdb::Filter(fx.options, fx.view,
                        ValuePredicate::Prefix("match"), &result)
              .ok());
  CHECK(result.rows.empty());
}

TEST_CASE("filter: predicate matching no dictionary decodes nothing") {
  ViewFixture fx;
  std::mt19937_64 rng(97);
  std::vector<test::RawRow> rows;
  for (int i = 0; i < 2000; i++) {
    rows.push_back({test::MakeKey(i), static_cast<SequenceNumber>(i + 1),
                    EntryKind::kPut, "val" + std::to_string(rng() % 64)});
  }
  fx.AddFile(1, rows);
  fx.Finish();

  const CounterSnapshot before = CounterSnapshot::Take();
  FilterResult result;
  REQUIRE(sctdb::Filter(fx.options, fx.view,
                        ValuePredicate::Equality("absent-value"), &result)
              .ok());
  CHECK(result.rows.empty());
  const CounterSnapshot d = CounterSnapshot::Take().Delta(before);
  CHECK_EQ(d.dict_decodes, 0);
  // Empty interval: the code column is not even scanned.
  CHECK_EQ(result.stats.codes_tested, 0);
}

TEST_CASE("filter equals oracle on randomized multi-level states") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 8; trial++) {
    ViewFixture fx;
    SequenceNumber seq = 0;
    // Bottom to top so newer levels hold newer sequence numbers.
    for (int level = 2; level >= 0; level--) {
      std::vector<test::RawRow> rows;
      const int n = 300 + rng() % 1200;
      for (int i = 0; i < n; i++) {
        test::RawRow r;
        r.key = test::MakeKey(rng() % 900);
        r.seq = ++seq;
        if (rng() % 9 == 0) {
          r.kind = EntryKind::kTombstone;
        } else {
          r.value = "w" + std::to_string(rng() % 300);
        }
        rows.push_back(std::move(r));
      }
      // Multiple files per level need disjoint ranges at levels >= 1;
      // keep one file per level for simplicity, L0 gets two.
      fx.AddFile(level, rows);
    }
    {
      std::vector<test::RawRow> rows;
      for (int i = 0; i < 200; i++) {
        rows.push_back({test::MakeKey(rng() % 900), ++seq, EntryKind::kPut,
                        "w" + std::to_string(rng() % 300)});
      }
      fx.AddFile(0, rows);
    }
    {
      std::vector<test::RawRow> rows;
      for (int i = 0; i < 150; i++) {
        test::RawRow r;
        r.key = test::MakeKey(rng() % 900);
        r.seq = ++seq;
        if (rng() % 6 == 0) {
          r.kind = EntryKind::kTombstone;
        } else {
          r.value = "w" + std::to_string(rng() % 300);
        }
        rows.push_back(std::move(r));
      }
      fx.AddMemtableRows(rows);
    }
    fx.Finish();

    for (int q = 0; q < 10; q++) {
      ValuePredicate p;
      const int kind = rng() % 3;
      if (kind == 0) {
        p = ValuePredicate::Equality("w" + std::to_string(rng() % 300));
      } else if (kind == 1) {
        p = ValuePredicate::Prefix("w" + std::to_string(rng() % 10));
      } else {
        std::string a = "w" + std::to_string(rng() % 300);
        std::string b = "w" + std::to_string(rng() % 300);
        if (a > b) std::swap(a, b);
        p = ValuePredicate::Range(a, b);
      }

      FilterResult result;
      REQUIRE(sctdb::Filter(fx.options, fx.view, p, &result).ok());
      const auto expect = fx.ref.Filter(p, fx.view.read_seq);
      REQUIRE_EQ(result.rows.size(), expect.size());
      CHECK(result.rows == expect);
    }
  }
}

TEST_CASE("filter result keys are unique and ascending") {
  ViewFixture fx;
  std::mt19937_64 rng(103);
  std::vector<test::RawRow> rows;
  SequenceNumber seq = 0;
  for (int i = 0; i < 3000; i++) {
    rows.push_back({test::MakeKey(rng() % 500), ++seq, EntryKind::kPut,
                    "p" + std::to_string(rng() % 50)});
  }
  fx.AddFile(1, rows);
  fx.Finish();

  FilterResult result;
  REQUIRE(
      sctdb::Filter(fx.options, fx.view, ValuePredicate::Prefix("p"), &result)
          .ok());
  for (size_t i = 1; i < result.rows.size(); i++) {
    CHECK_LT(result.rows[i - 1].first, result.rows[i].first);
  }
}

TEST_CASE("point and range lookups equal the reference across versions") {
  std::mt19937_64 rng(107);
  ViewFixture fx;
  SequenceNumber seq = 0;
  for (int level = 2; level >= 0; level--) {
    std::vector<test::RawRow> rows;
    for (int i = 0; i < 1000; i++) {
      test::RawRow r;
      r.key = test::MakeKey(rng() % 400);
      r.seq = ++seq;
      if (rng() % 7 == 0) {
        r.kind = EntryKind::kTombstone;
      } else {
        r.value = test::RandomString(rng, 1, 30);
      }
      rows.push_back(std::move(r));
    }
    fx.AddFile(level, rows);
  }
  fx.Finish();

  for (int i = 0; i < 500; i++) {
    const std::string key = test::MakeKey(rng() % 400);
    std::string value;
    bool found = false;
    REQUIRE(PointLookup(fx.options, fx.view, key, &value, &found).ok());
    const auto expect = fx.ref.Get(key, fx.view.read_seq);
    REQUIRE_EQ(found, expect.has_value());
    if (found) CHECK_EQ(value, *expect);
  }

  for (int i = 0; i < 30; i++) {
    std::string lo = test::MakeKey(rng() % 400);
    std::string hi = test::MakeKey(rng() % 400);
    if (lo > hi) std::swap(lo, hi);
    std::vector<std::pair<std::string, std::string>> rows;
    REQUIRE(RangeLookup(fx.options, fx.view, lo, hi, &rows).ok());
    CHECK(rows == fx.ref.Scan(lo, hi, fx.view.read_seq));
  }
}

TEST_CASE("long scans trigger whole-file bulk reads with equal results") {
  ViewFixture fx;
  std::mt19937_64 rng(108);
  std::vector<test::RawRow> rows;
  SequenceNumber seq = 0;
  for (int i = 0; i < 8000; i++) {
    rows.push_back({test::MakeKey(i), ++seq, EntryKind::kPut,
                    test::RandomString(rng, 4, 20)});
  }
  fx.AddFile(1, rows);
  fx.Finish();
  REQUIRE_GT(fx.view.levels[1][0]->key_blocks().size(), 4);

  Options narrow = fx.options;
  narrow.bulk_read_blocks = 4;  // spans above this load the whole file

  const CounterSnapshot before = CounterSnapshot::Take();
  std::vector<std::pair<std::string, std::string>> bulk_rows;
  REQUIRE(RangeLookup(narrow, fx.view, test::MakeKey(0), test::MakeKey(8000),
                      &bulk_rows)
              .ok());
  const CounterSnapshot d = CounterSnapshot::Take().Delta(before);
  CHECK_EQ(d.bulk_reads, 1);

  // A short span stays on block-at-a-time reads.
  const CounterSnapshot before2 = CounterSnapshot::Take();
  std::vector<std::pair<std::string, std::string>> short_rows;
  REQUIRE(RangeLookup(narrow, fx.view, test::MakeKey(10), test::MakeKey(20),
                      &short_rows)
              .ok());
  CHECK_EQ(CounterSnapshot::Take().Delta(before2).bulk_reads, 0);
  CHECK_EQ(short_rows.size(), 10);

  CHECK(bulk_rows == fx.ref.Scan(test::MakeKey(0), test::MakeKey(8000),
                                 fx.view.read_seq));
}

TEST_CASE("full keyspace scan equals always-true filter") {
  ViewFixture fx;
  std::mt19937_64 rng(109);
  std::vector<test::RawRow> rows;
  SequenceNumber seq = 0;
  for (int i = 0; i < 2000; i++) {
    test::RawRow r;
    r.key = test::MakeKey(rng() % 600);
    r.seq = ++seq;
    if (rng() % 5 == 0) {
      r.kind = EntryKind::kTombstone;
    } else {
      r.value = test::RandomString(rng, 1, 20);
    }
    rows.push_back(std::move(r));
  }
  fx.AddFile(1, rows);
  fx.Finish();

  std::vector<std::pair<std::string, std::string>> scan;
  REQUIRE(RangeLookup(fx.options, fx.view, test::MakeKey(0),
                      "\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff",
                      &scan)
              .ok());
  FilterResult filtered;
  REQUIRE(sctdb::Filter(fx.options, fx.view, ValuePredicate::Prefix(""),
                        &filtered)
              .ok());
  CHECK(scan == filtered.rows);
}

}  // namespace
}  // namespace sctdb
