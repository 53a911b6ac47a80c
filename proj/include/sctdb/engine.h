// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// The embeddable engine. One logical writer thread for Put/Delete;
// unbounded concurrent readers; a flush worker and a compaction worker in
// background mode. All cross-thread handoff goes through immutable
// structures (frozen memtables, table files, version states) swapped
// under a single mutex.

#ifndef SCTDB_ENGINE_H_
#define SCTDB_ENGINE_H_

#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sctdb/compaction.h"
#include "sctdb/manifest.h"
#include "sctdb/memtable.h"
#include "sctdb/options.h"
#include "sctdb/query.h"
#include "sctdb/status.h"

namespace sctdb {

// A read transaction's view: sequence number plus the file snapshot (every
// visible table and its dictionary). Files pinned by a snapshot are never
// deleted while the snapshot is live.
class Snapshot {
 public:
  SequenceNumber sequence() const { return view_.read_seq; }

 private:
  friend class Engine;
  Snapshot() = default;
  ReadView view_;
};

class Engine {
 public:
  static Status Open(const Options& options, const std::string& dir,
                     std::unique_ptr<Engine>* out);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Status Put(std::string_view key, std::string_view value);
  Status Delete(std::string_view key);

  // snapshot == nullptr reads at the current sequence.
  Status Get(std::string_view key, std::string* value, bool* found,
             const Snapshot* snapshot = nullptr);
  Status Scan(std::string_view key_low, std::string_view key_high,
              std::vector<std::pair<std::string, std::string>>* out,
              const Snapshot* snapshot = nullptr);
  Status Filter(const ValuePredicate& p, FilterResult* out,
                const Snapshot* snapshot = nullptr);

  const Snapshot* GetSnapshot();
  void ReleaseSnapshot(const Snapshot* snapshot);

  // Freezes the active memtable (if nonempty) and flushes every frozen
  // memtable to level 0.
  Status FlushMemtable();

  // Runs one compaction if any trigger is satisfied.
  Status CompactOnce(bool* did_work);

  // Flushes, drains level 0, then compacts until every level is within
  // capacity. Leaves the engine quiescent.
  Status CompactAll();

  // Blocks until background flush and compaction have no pending work.
  Status WaitForQuiescence();

  std::map<std::string, uint64_t> GetStats();
  uint64_t TotalSctBytes();
  SequenceNumber LastSequence() const {
    return last_seq_.load(std::memory_order_acquire);
  }

  // Pins the current state for a read. Public for tests and tools.
  ReadView CurrentView();

  // Test hook: with auto compaction off, writers hitting the L0 stall
  // threshold fail with Stalled instead of waiting.
  void TEST_SetAutoCompaction(bool enabled);

 private:
  struct VersionState {
    std::vector<std::vector<std::shared_ptr<SctFile>>> levels;
  };

  Engine(const Options& options, std::string dir);

  Status WriteImpl(std::string_view key, std::string_view value,
                   EntryKind kind);
  Status EnsureWritableLocked(std::unique_lock<std::mutex>* lock);
  void RotateMemtableLocked();
  Status MaybeInlineWork();

  Status FlushOldestImmutable();
  bool PickCompactionLocked(bool force_l0_drain, CompactionJob* job,
                            std::vector<uint64_t>* input_ids, int* from_level);
  Status RunOneCompaction(bool force_l0_drain, bool* did_work);
  SequenceNumber OldestSnapshotSeqLocked() const;
  uint64_t AllocateFileId();
  Status PersistManifestLocked();
  uint64_t LevelBytesLocked(size_t level) const;
  bool CompactionPendingLocked() const;

  void FlushThreadLoop();
  void CompactThreadLoop();
  void StopThreads();

  const Options options_;
  const std::string dir_;

  mutable std::mutex mu_;
  std::condition_variable work_cv_;   // wakes background workers
  std::condition_variable state_cv_;  // wakes stalled writers and waiters

  std::shared_ptr<Memtable> active_;
  std::deque<std::shared_ptr<Memtable>> immutables_;  // oldest first
  std::shared_ptr<VersionState> version_;
  std::set<const Snapshot*> snapshots_;

  uint64_t manifest_version_ = 0;
  uint64_t next_sct_id_ = 1;
  std::atomic<SequenceNumber> last_seq_{0};
  std::vector<std::string> compact_cursor_;

  bool auto_compaction_ = true;
  bool flush_busy_ = false;
  bool compact_busy_ = false;
  bool shutting_down_ = false;
  Status bg_error_;

  std::thread flush_thread_;
  std::thread compact_thread_;
};

}  // namespace sctdb

#endif  // SCTDB_ENGINE_H_
