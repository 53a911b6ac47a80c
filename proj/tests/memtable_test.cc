// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include <doctest.h>

#include <map>
#include <random>
#include <thread>

#include "sctdb/memtable.h"
#include "testutil.h"

namespace sctdb {
namespace {

Options SmallOptions() {
  Options o;
  o.key_size = 4;
  return o;
}

TEST_CASE("read your own write") {
  Memtable mt(SmallOptions());
  REQUIRE(mt.Put("aaak", "apple", 1).ok());
  std::string v;
  CHECK_EQ(mt.Get("aaak", 1, &v), Memtable::GetResult::kFound);
  CHECK_EQ(v, "apple");
}

TEST_CASE("older snapshot sees older version") {
  Memtable mt(SmallOptions());
  REQUIRE(mt.Put("key1", "a", 1).ok());
  REQUIRE(mt.Put("key1", "b", 2).ok());
  std::string v;
  CHECK_EQ(mt.Get("key1", 1, &v), Memtable::GetResult::kFound);
  CHECK_EQ(v, "a");  // lifetime of v1 is [1, 2)
  CHECK_EQ(mt.Get("key1", 2, &v), Memtable::GetResult::kFound);
  CHECK_EQ(v, "b");
}

TEST_CASE("tombstone surfaces as explicit marker") {
  Memtable mt(SmallOptions());
  REQUIRE(mt.Put("key1", "v", 1).ok());
  REQUIRE(mt.Delete("key1", 2).ok());
  std::string v;
  CHECK_EQ(mt.Get("key1", 3, &v), Memtable::GetResult::kTombstone);
  CHECK_EQ(mt.Get("key1", 1, &v), Memtable::GetResult::kFound);
}

TEST_CASE("delete of absent key stores a tombstone") {
  Memtable mt(SmallOptions());
  REQUIRE(mt.Delete("gone", 1).ok());
  std::string v;
  CHECK_EQ(mt.Get("gone", 1, &v), Memtable::GetResult::kTombstone);
  CHECK_EQ(mt.entry_count(), 1);
}

TEST_CASE("put delete put replay") {
  Memtable mt(SmallOptions());
  REQUIRE(mt.Put("key1", "one", 1).ok());
  REQUIRE(mt.Delete("key1", 2).ok());
  REQUIRE(mt.Put("key1", "three", 3).ok());
  std::string v;
  CHECK_EQ(mt.Get("key1", 3, &v), Memtable::GetResult::kFound);
  CHECK_EQ(v, "three");
  CHECK_EQ(mt.Get("key1", 2, &v), Memtable::GetResult::kTombstone);
  CHECK_EQ(mt.Get("key1", 1, &v), Memtable::GetResult::kFound);
  CHECK_EQ(v, "one");
}

TEST_CASE("snapshot isolation: slot created later is invisible") {
  Memtable mt(SmallOptions());
  REQUIRE(mt.Put("key1", "v", 3).ok());
  std::string v;
  CHECK_EQ(mt.Get("key1", 2, &v), Memtable::GetResult::kNotFound);
}

TEST_CASE("empty memtable misses") {
  Memtable mt(SmallOptions());
  std::string v;
  CHECK_EQ(mt.Get("none", 5, &v), Memtable::GetResult::kNotFound);
}

TEST_CASE("key size is enforced") {
  Memtable mt(SmallOptions());
  CHECK(mt.Put("toolongkey", "v", 1).IsKeySizeMismatch());
  CHECK(mt.Put("ab", "v", 1).IsKeySizeMismatch());
}

TEST_CASE("freeze stops writes; double freeze errors") {
  Memtable mt(SmallOptions());
  REQUIRE(mt.Put("key1", "v", 1).ok());
  REQUIRE(mt.Freeze().ok());
  CHECK(mt.Put("key2", "v", 2).IsMemtableFrozen());
  CHECK(mt.Delete("key1", 2).IsMemtableFrozen());
  CHECK(mt.Freeze().IsAlreadyFrozen());
  // Readers stay valid after freeze.
  std::string v;
  CHECK_EQ(mt.Get("key1", 1, &v), Memtable::GetResult::kFound);
}

TEST_CASE("iteration equals a reference sorted map built from the same ops") {
  Options options = SmallOptions();
  Memtable mt(options);
  // Reference: (key, seq desc) -> value, same byte ordering.
  std::map<std::pair<std::string, SequenceNumber>, std::string> ref;
  std::mt19937_64 rng(23);
  SequenceNumber seq = 0;
  for (int i = 0; i < 1000; i++) {
    const std::string key = test::MakeKey(rng() % 300, 4);
    const std::string value = test::RandomString(rng, 0, 12);
    ++seq;
    REQUIRE(mt.Put(key, value, seq).ok());
    ref[{key, kMaxSequence - seq}] = value;
  }
  CHECK_EQ(mt.entry_count(), 1000);

  auto it = mt.NewIterator();
  it.SeekToFirst();
  for (const auto& [ks, value] : ref) {
    REQUIRE(it.Valid());
    CHECK_EQ(it.key(), ks.first);
    CHECK_EQ(it.seq(), kMaxSequence - ks.second);
    CHECK_EQ(it.value(), value);
    it.Next();
  }
  CHECK_FALSE(it.Valid());
}

TEST_CASE("freeze of N entries yields N entries in order") {
  Memtable mt(SmallOptions());
  for (int i = 0; i < 50; i++) {
    REQUIRE(mt.Put(test::MakeKey(i * 7 % 50, 4), "v", i + 1).ok());
  }
  REQUIRE(mt.Freeze().ok());
  size_t n = 0;
  auto it = mt.NewIterator();
  for (it.SeekToFirst(); it.Valid(); it.Next()) n++;
  CHECK_EQ(n, 50);
}

TEST_CASE("byte size accounts key and value lengths") {
  Memtable mt(SmallOptions());
  uint64_t expect = 0;
  std::mt19937_64 rng(29);
  for (int i = 0; i < 500; i++) {
    const std::string key = test::MakeKey(rng() % 100, 4);
    if (rng() % 5 == 0) {
      REQUIRE(mt.Delete(key, i + 1).ok());
      expect += key.size();
    } else {
      const std::string value = test::RandomString(rng, 0, 50);
      REQUIRE(mt.Put(key, value, i + 1).ok());
      expect += key.size() + value.size();
    }
  }
  CHECK_EQ(mt.byte_size(), expect);
}

TEST_CASE("lifetime intervals are disjoint and at most one live slot per key") {
  Memtable mt(SmallOptions());
  std::mt19937_64 rng(31);
  for (int i = 0; i < 2000; i++) {
    const std::string key = test::MakeKey(rng() % 50, 4);
    if (rng() % 4 == 0) {
      REQUIRE(mt.Delete(key, i + 1).ok());
    } else {
      REQUIRE(mt.Put(key, "v", i + 1).ok());
    }
  }

  auto it = mt.NewIterator();
  std::string cur_key;
  size_t live_in_key = 0;
  SequenceNumber newer_created = 0;
  bool have_key = false;
  for (it.SeekToFirst(); it.Valid(); it.Next()) {
    if (!have_key || it.key() != cur_key) {
      cur_key.assign(it.key());
      have_key = true;
      live_in_key = 0;
      newer_created = 0;
    }
    const SequenceNumber deleted = it.deleted_seq();
    if (deleted == 0) {
      live_in_key++;
      CHECK_EQ(live_in_key, 1);  // only the newest version is live
    } else {
      CHECK_GT(deleted, it.seq());  // deleted > created
      // Seq-descending iteration: this slot's interval ends where the
      // next newer one starts.
      CHECK_EQ(deleted, newer_created);
    }
    newer_created = it.seq();
  }
}

TEST_CASE("randomized interleavings equal the reference model") {
  Memtable mt(SmallOptions());
  test::RefModel ref;
  std::mt19937_64 rng(37);
  SequenceNumber seq = 0;
  for (int i = 0; i < 5000; i++) {
    const std::string key = test::MakeKey(rng() % 200, 4);
    if (rng() % 4 == 0) {
      ++seq;
      REQUIRE(mt.Delete(key, seq).ok());
      ref.Delete(key, seq);
    } else {
      const std::string value = test::RandomString(rng, 1, 20);
      ++seq;
      REQUIRE(mt.Put(key, value, seq).ok());
      ref.Put(key, value, seq);
    }

    if (i % 50 == 0) {
      for (int probe = 0; probe < 20; probe++) {
        const std::string k = test::MakeKey(rng() % 200, 4);
        const SequenceNumber at = rng() % (seq + 2);
        std::string got;
        const auto r = mt.Get(k, at, &got);
        const auto expect = ref.Get(k, at);
        if (expect.has_value()) {
          REQUIRE_EQ(r, Memtable::GetResult::kFound);
          REQUIRE_EQ(got, *expect);
        } else {
          REQUIRE_NE(r, Memtable::GetResult::kFound);
        }
      }
    }
  }
}

TEST_CASE("concurrent readers during writes") {
  Options options = SmallOptions();
  Memtable mt(options);
  std::atomic<bool> stop{false};
  std::atomic<uint64_t> published{0};

  std::thread readers[3];
  for (auto& t : readers) {
    t = std::thread([&] {
      std::mt19937_64 rng(std::random_device{}());
      while (!stop.load(std::memory_order_acquire)) {
        const uint64_t upto = published.load(std::memory_order_acquire);
        if (upto == 0) continue;
        const uint64_t i = rng() % upto;
        std::string v;
        // Every published seq is a Put of key i%64 with value = seq text.
        const auto r = mt.Get(test::MakeKey(i % 64, 4), upto, &v);
        if (r == Memtable::GetResult::kFound) {
          REQUIRE_LE(std::stoull(v), upto);
        }
      }
    });
  }

  for (SequenceNumber seq = 1; seq <= 20000; seq++) {
    REQUIRE(mt.Put(test::MakeKey(seq % 64, 4), std::to_string(seq), seq).ok());
    published.store(seq, std::memory_order_release);
  }
  stop.store(true, std::memory_order_release);
  for (auto& t : readers) t.join();
}

}  // namespace
}  // namespace sctdb
