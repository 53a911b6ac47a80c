// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/memtable.h"

#include <cassert>
#include <cstring>

namespace sctdb {

// Variable-size record: header, next-pointer array, key bytes, value bytes.
struct Memtable::Node {
  SequenceNumber seq;
  std::atomic<SequenceNumber> deleted_seq;  // 0 while live
  uint32_t key_len;
  uint32_t value_len;
  EntryKind kind;
  uint8_t height;

  std::atomic<Node*>* next_array() {
    return reinterpret_cast<std::atomic<Node*>*>(
        reinterpret_cast<char*>(this) + sizeof(Node));
  }
  const std::atomic<Node*>* next_array() const {
    return reinterpret_cast<const std::atomic<Node*>*>(
        reinterpret_cast<const char*>(this) + sizeof(Node));
  }
  Node* Next(int level) const {
    return next_array()[level].load(std::memory_order_acquire);
  }
  void SetNext(int level, Node* n) {
    next_array()[level].store(n, std::memory_order_release);
  }
  void NoBarrierSetNext(int level, Node* n) {
    next_array()[level].store(n, std::memory_order_relaxed);
  }

  const char* key_data() const {
    return reinterpret_cast<const char*>(this) + sizeof(Node) +
           height * sizeof(std::atomic<Node*>);
  }
  std::string_view key() const { return {key_data(), key_len}; }
  std::string_view value() const { return {key_data() + key_len, value_len}; }
};

Memtable::Memtable(const Options& options)
    : options_(options),
      max_height_(1),
      state_(0),
      byte_size_(0),
      entry_count_(0),
      rnd_(0x5c7db) {
  head_ = NewNode({}, {}, 0, EntryKind::kPut, kMaxHeight);
  for (int i = 0; i < kMaxHeight; i++) head_->NoBarrierSetNext(i, nullptr);
}

Memtable::~Memtable() = default;

Memtable::Node* Memtable::NewNode(std::string_view key, std::string_view value,
                                  SequenceNumber seq, EntryKind kind,
                                  int height) {
  const size_t bytes = sizeof(Node) + height * sizeof(std::atomic<Node*>) +
                       key.size() + value.size();
  char* mem = arena_.AllocateAligned(bytes);
  Node* n = reinterpret_cast<Node*>(mem);
  n->seq = seq;
  n->deleted_seq.store(0, std::memory_order_relaxed);
  n->key_len = static_cast<uint32_t>(key.size());
  n->value_len = static_cast<uint32_t>(value.size());
  n->kind = kind;
  n->height = static_cast<uint8_t>(height);
  char* data = mem + sizeof(Node) + height * sizeof(std::atomic<Node*>);
  if (!key.empty()) std::memcpy(data, key.data(), key.size());
  if (!value.empty()) {
    std::memcpy(data + key.size(), value.data(), value.size());
  }
  return n;
}

int Memtable::RandomHeight() {
  int height = 1;
  while (height < kMaxHeight && (rnd_() % 4) == 0) height++;
  return height;
}

int Memtable::Compare(const Node* n, std::string_view key,
                      SequenceNumber seq) const {
  return CompareKeySeq(n->key(), n->seq, key, seq);
}

Memtable::Node* Memtable::FindGreaterOrEqual(std::string_view key,
                                             SequenceNumber seq,
                                             Node** prev) const {
  Node* x = head_;
  int level = max_height_.load(std::memory_order_acquire) - 1;
  for (;;) {
    Node* next = x->Next(level);
    if (next != nullptr && Compare(next, key, seq) < 0) {
      x = next;
    } else {
      if (prev != nullptr) prev[level] = x;
      if (level == 0) return next;
      level--;
    }
  }
}

Status Memtable::Insert(std::string_view key, std::string_view value,
                        SequenceNumber seq, EntryKind kind) {
  if (frozen()) return Status::MemtableFrozen();
  if (key.size() != options_.key_size) {
    return Status::KeySizeMismatch("key length " + std::to_string(key.size()) +
                                   " != " + std::to_string(options_.key_size));
  }
  if (seq <= last_seq_) {
    return Status::InvalidArgument("sequence numbers must increase");
  }
  last_seq_ = seq;

  Node* prev[kMaxHeight];
  Node* succ = FindGreaterOrEqual(key, seq, prev);
  assert(succ == nullptr || Compare(succ, key, seq) != 0);

  const int height = RandomHeight();
  if (height > max_height_.load(std::memory_order_relaxed)) {
    for (int i = max_height_.load(std::memory_order_relaxed); i < height; i++) {
      prev[i] = head_;
    }
    max_height_.store(height, std::memory_order_release);
  }

  Node* n = NewNode(key, value, seq, kind, height);
  for (int i = 0; i < height; i++) {
    n->NoBarrierSetNext(i, prev[i]->Next(i));
    prev[i]->SetNext(i, n);
  }

  // Close the lifetime interval of the previous newest version, if live.
  // With strictly increasing seq the new node is its key's newest, so the
  // in-order successor with the same key is that previous version.
  Node* after = n->Next(0);
  if (after != nullptr && after->key() == key) {
    SequenceNumber expect = 0;
    after->deleted_seq.compare_exchange_strong(expect, seq,
                                               std::memory_order_release,
                                               std::memory_order_relaxed);
  }

  byte_size_.fetch_add(key.size() + value.size(), std::memory_order_relaxed);
  entry_count_.fetch_add(1, std::memory_order_relaxed);
  return Status::OK();
}

Status Memtable::Put(std::string_view key, std::string_view value,
                     SequenceNumber seq) {
  return Insert(key, value, seq, EntryKind::kPut);
}

Status Memtable::Delete(std::string_view key, SequenceNumber seq) {
  return Insert(key, {}, seq, EntryKind::kTombstone);
}

Memtable::GetResult Memtable::Get(std::string_view key,
                                  SequenceNumber read_seq,
                                  std::string* value) const {
  // First node with node.key >= key and (if equal) node.seq <= read_seq.
  // Within a key versions are seq-descending, so this is exactly the
  // version whose lifetime interval covers read_seq.
  const Node* n = FindGreaterOrEqual(key, read_seq, nullptr);
  if (n == nullptr || n->key() != key) return GetResult::kNotFound;
  if (n->kind == EntryKind::kTombstone) return GetResult::kTombstone;
  if (value != nullptr) value->assign(n->value());
  return GetResult::kFound;
}

Status Memtable::Freeze() {
  int expect = 0;
  if (!state_.compare_exchange_strong(expect, 1, std::memory_order_acq_rel)) {
    return Status::AlreadyFrozen();
  }
  return Status::OK();
}

void Memtable::Iterator::SeekToFirst() { node_ = mt_->head_->Next(0); }

void Memtable::Iterator::Seek(std::string_view key, SequenceNumber seq) {
  node_ = mt_->FindGreaterOrEqual(key, seq, nullptr);
}

void Memtable::Iterator::Next() {
  assert(Valid());
  node_ = node_->Next(0);
}

std::string_view Memtable::Iterator::key() const { return node_->key(); }
SequenceNumber Memtable::Iterator::seq() const { return node_->seq; }
EntryKind Memtable::Iterator::kind() const { return node_->kind; }
std::string_view Memtable::Iterator::value() const { return node_->value(); }
SequenceNumber Memtable::Iterator::deleted_seq() const {
  return node_->deleted_seq.load(std::memory_order_acquire);
}

}  // namespace sctdb
