// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Row-oriented ordered buffer for recent writes. One writer; any number of
// concurrent readers against a fixed read sequence. Slots carry lifetime
// intervals [created, deleted): a new version of a key closes the interval
// of the previous live one.

#ifndef SCTDB_MEMTABLE_H_
#define SCTDB_MEMTABLE_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "sctdb/options.h"
#include "sctdb/status.h"
#include "sctdb/types.h"
#include "util/arena.h"

namespace sctdb {

class Memtable {
 public:
  explicit Memtable(const Options& options);
  ~Memtable();
  Memtable(const Memtable&) = delete;
  Memtable& operator=(const Memtable&) = delete;

  // seq must exceed every previously inserted sequence number.
  Status Put(std::string_view key, std::string_view value, SequenceNumber seq);
  Status Delete(std::string_view key, SequenceNumber seq);

  enum class GetResult {
    kFound,      // *value holds the visible Put
    kTombstone,  // visible version is a delete; stop descending
    kNotFound,   // no slot covers read_seq
  };
  GetResult Get(std::string_view key, SequenceNumber read_seq,
                std::string* value) const;

  // Flips to Frozen; afterwards Put/Delete fail with MemtableFrozen and the
  // value domain is fixed. AlreadyFrozen on the second call.
  Status Freeze();
  bool frozen() const { return state_.load(std::memory_order_acquire) == 1; }

  // Sum of stored key and value lengths.
  uint64_t byte_size() const {
    return byte_size_.load(std::memory_order_relaxed);
  }
  // Number of stored slots (all versions).
  size_t entry_count() const {
    return entry_count_.load(std::memory_order_relaxed);
  }
  bool empty() const { return entry_count() == 0; }
  size_t ApproximateMemoryUsage() const { return arena_.MemoryUsage(); }

  struct Node;

  // Walks every slot in (user_key asc, seq desc) order.
  class Iterator {
   public:
    explicit Iterator(const Memtable* mt) : mt_(mt), node_(nullptr) {}
    bool Valid() const { return node_ != nullptr; }
    void SeekToFirst();
    void Seek(std::string_view key, SequenceNumber seq);
    void Next();
    std::string_view key() const;
    SequenceNumber seq() const;
    EntryKind kind() const;
    std::string_view value() const;
    // 0 while the slot is live.
    SequenceNumber deleted_seq() const;

   private:
    const Memtable* mt_;
    const Node* node_;
  };

  Iterator NewIterator() const { return Iterator(this); }

 private:
  friend class Iterator;

  static constexpr int kMaxHeight = 12;

  Node* NewNode(std::string_view key, std::string_view value,
                SequenceNumber seq, EntryKind kind, int height);
  int RandomHeight();
  // Node ordering: key ascending, seq descending.
  int Compare(const Node* n, std::string_view key, SequenceNumber seq) const;
  // First node >= (key, seq); fills prev[] when non-null.
  Node* FindGreaterOrEqual(std::string_view key, SequenceNumber seq,
                           Node** prev) const;
  Status Insert(std::string_view key, std::string_view value,
                SequenceNumber seq, EntryKind kind);

  const Options options_;
  Arena arena_;
  Node* head_;
  std::atomic<int> max_height_;
  std::atomic<int> state_;  // 0 active, 1 frozen
  std::atomic<uint64_t> byte_size_;
  std::atomic<size_t> entry_count_;
  SequenceNumber last_seq_ = 0;
  std::mt19937 rnd_;
};

}  // namespace sctdb

#endif  // SCTDB_MEMTABLE_H_
