// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_UTIL_ARENA_H_
#define SCTDB_UTIL_ARENA_H_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace sctdb {

// Allocation-only arena. Memory is released when the arena is destroyed.
// Allocate is called by a single writer; MemoryUsage may be read anywhere.
class Arena {
 public:
  Arena() : alloc_ptr_(nullptr), alloc_bytes_remaining_(0), memory_usage_(0) {}
  Arena(const Arena&) = delete;
  Arena& operator=(const Arena&) = delete;

  char* Allocate(size_t bytes) {
    if (bytes <= alloc_bytes_remaining_) {
      char* r = alloc_ptr_;
      alloc_ptr_ += bytes;
      alloc_bytes_remaining_ -= bytes;
      return r;
    }
    return AllocateFallback(bytes);
  }

  char* AllocateAligned(size_t bytes) {
    constexpr size_t kAlign = sizeof(void*);
    const size_t mod = reinterpret_cast<uintptr_t>(alloc_ptr_) & (kAlign - 1);
    const size_t slop = mod == 0 ? 0 : kAlign - mod;
    if (bytes + slop <= alloc_bytes_remaining_) {
      char* r = alloc_ptr_ + slop;
      alloc_ptr_ += bytes + slop;
      alloc_bytes_remaining_ -= bytes + slop;
      return r;
    }
    return AllocateFallback(bytes);  // fresh blocks are aligned
  }

  size_t MemoryUsage() const {
    return memory_usage_.load(std::memory_order_relaxed);
  }

 private:
  static constexpr size_t kBlockSize = 1 << 16;

  char* AllocateFallback(size_t bytes) {
    if (bytes > kBlockSize / 4) {
      return AllocateNewBlock(bytes);
    }
    alloc_ptr_ = AllocateNewBlock(kBlockSize);
    alloc_bytes_remaining_ = kBlockSize;
    char* r = alloc_ptr_;
    alloc_ptr_ += bytes;
    alloc_bytes_remaining_ -= bytes;
    return r;
  }

  char* AllocateNewBlock(size_t bytes) {
    blocks_.push_back(std::make_unique<char[]>(bytes));
    memory_usage_.fetch_add(bytes + sizeof(void*), std::memory_order_relaxed);
    return blocks_.back().get();
  }

  char* alloc_ptr_;
  size_t alloc_bytes_remaining_;
  std::vector<std::unique_ptr<char[]>> blocks_;
  std::atomic<size_t> memory_usage_;
};

}  // namespace sctdb

#endif  // SCTDB_UTIL_ARENA_H_
