// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/engine.h"

#include <algorithm>
#include <cassert>
#include <filesystem>
#include <unordered_map>
#include <unordered_set>

#include "sctdb/sct_writer.h"
#include "sctdb/stats.h"
#include "util/env.h"

namespace sctdb {

namespace fs = std::filesystem;

Engine::Engine(const Options& options, std::string dir)
    : options_(options), dir_(std::move(dir)) {
  active_ = std::make_shared<Memtable>(options_);
  version_ = std::make_shared<VersionState>();
  version_->levels.resize(options_.max_levels);
  compact_cursor_.resize(options_.max_levels);
}

Status Engine::Open(const Options& options, const std::string& dir,
                    std::unique_ptr<Engine>* out) {
  if (!options.Valid()) {
    return Status::InvalidArgument("options out of supported ranges");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return Status::IoError(dir + ": " + ec.message());

  std::unique_ptr<Engine> engine(new Engine(options, dir));

  ManifestData manifest;
  bool exists = false;
  Status s = LoadManifest(dir, &manifest, &exists);
  if (!s.ok()) return s;

  if (!exists) {
    manifest.key_size = static_cast<uint32_t>(options.key_size);
    manifest.mode = options.mode;
    manifest.levels.resize(options.max_levels);
    s = SaveManifest(dir, manifest);
    if (!s.ok()) return s;
  } else {
    if (manifest.key_size != options.key_size) {
      return Status::InvalidArgument("key size differs from manifest");
    }
    if (manifest.mode != options.mode) {
      return Status::InvalidArgument("storage mode differs from manifest");
    }
    for (size_t l = options.max_levels; l < manifest.levels.size(); l++) {
      if (!manifest.levels[l].empty()) {
        return Status::InvalidArgument("manifest holds deeper levels than "
                                       "max_levels allows");
      }
    }
  }

  engine->manifest_version_ = manifest.version;
  engine->next_sct_id_ = manifest.next_sct_id;
  engine->last_seq_.store(manifest.last_seq, std::memory_order_release);

  // Open every referenced table, validating footers and loading the
  // dictionaries into memory.
  std::unordered_set<uint64_t> live_ids;
  auto state = std::make_shared<VersionState>();
  state->levels.resize(options.max_levels);
  for (size_t level = 0;
       level < std::min<size_t>(manifest.levels.size(), options.max_levels);
       level++) {
    for (const auto& meta : manifest.levels[level]) {
      std::shared_ptr<SctFile> file;
      s = SctFile::Open(options, SctPath(dir, meta.id), meta.id, &file);
      if (!s.ok()) {
        return Status::CorruptManifest("table " + std::to_string(meta.id) +
                                       ": " + s.ToString());
      }
      live_ids.insert(meta.id);
      state->levels[level].push_back(std::move(file));
    }
  }
  engine->version_ = std::move(state);

  // Orphans from interrupted flush or compaction are unreachable; drop
  // them before their ids can be reused.
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 4 && name.compare(name.size() - 4, 4, ".tmp") == 0) {
      RemoveFileIfExists(entry.path().string());  // interrupted write
      continue;
    }
    if (name.rfind("sct_", 0) != 0) continue;
    const size_t dot = name.find(".sct");
    if (dot == std::string::npos) continue;
    uint64_t id = 0;
    try {
      id = std::stoull(name.substr(4, dot - 4));
    } catch (...) {
      continue;
    }
    if (!live_ids.count(id)) {
      RemoveFileIfExists(entry.path().string());
    }
  }

  if (options.background_jobs) {
    engine->flush_thread_ = std::thread(&Engine::FlushThreadLoop, engine.get());
    engine->compact_thread_ =
        std::thread(&Engine::CompactThreadLoop, engine.get());
  }
  *out = std::move(engine);
  return Status::OK();
}

Engine::~Engine() { StopThreads(); }

void Engine::StopThreads() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    shutting_down_ = true;
  }
  work_cv_.notify_all();
  state_cv_.notify_all();
  if (flush_thread_.joinable()) flush_thread_.join();
  if (compact_thread_.joinable()) compact_thread_.join();
  std::lock_guard<std::mutex> lock(mu_);
  PersistManifestLocked();
}

uint64_t Engine::AllocateFileId() {
  std::lock_guard<std::mutex> lock(mu_);
  return next_sct_id_++;
}

SequenceNumber Engine::OldestSnapshotSeqLocked() const {
  SequenceNumber oldest = kMaxSequence;
  for (const Snapshot* s : snapshots_) {
    oldest = std::min(oldest, s->view_.read_seq);
  }
  return oldest;
}

uint64_t Engine::LevelBytesLocked(size_t level) const {
  uint64_t bytes = 0;
  for (const auto& f : version_->levels[level]) {
    bytes += f->descriptor().file_size_bytes;
  }
  return bytes;
}

bool Engine::CompactionPendingLocked() const {
  if (version_->levels[0].size() >= options_.l0_compact_trigger) return true;
  for (size_t l = 1; l + 1 < version_->levels.size(); l++) {
    if (LevelBytesLocked(l) > options_.LevelCapacity(static_cast<uint32_t>(l)))
      return true;
  }
  return false;
}

Status Engine::PersistManifestLocked() {
  ManifestData m;
  m.version = ++manifest_version_;
  m.next_sct_id = next_sct_id_;
  m.last_seq = last_seq_.load(std::memory_order_acquire);
  m.key_size = static_cast<uint32_t>(options_.key_size);
  m.mode = options_.mode;
  m.levels.resize(version_->levels.size());
  for (size_t l = 0; l < version_->levels.size(); l++) {
    for (const auto& f : version_->levels[l]) {
      const auto& d = f->descriptor();
      m.levels[l].push_back(
          {d.sct_id, d.min_key, d.max_key, d.entry_count, d.file_size_bytes});
    }
  }
  return SaveManifest(dir_, m);
}

ReadView Engine::CurrentView() {
  std::lock_guard<std::mutex> lock(mu_);
  ReadView view;
  view.read_seq = last_seq_.load(std::memory_order_acquire);
  view.memtables.push_back(active_);
  for (auto it = immutables_.rbegin(); it != immutables_.rend(); ++it) {
    view.memtables.push_back(*it);
  }
  view.levels.reserve(version_->levels.size());
  for (const auto& level : version_->levels) {
    view.levels.emplace_back(level.begin(), level.end());
  }
  return view;
}

Status Engine::EnsureWritableLocked(std::unique_lock<std::mutex>* lock) {
  while (version_->levels[0].size() >= options_.l0_stall_files) {
    if (!auto_compaction_) {
      return Status::Stalled("level 0 holds " +
                             std::to_string(version_->levels[0].size()) +
                             " files");
    }
    CounterAdd(Counters::Get().stall_events, 1);
    const uint64_t t0 = NowMicros();
    if (options_.background_jobs) {
      work_cv_.notify_all();
      state_cv_.wait(*lock);
    } else {
      lock->unlock();
      bool did = false;
      Status s = RunOneCompaction(/*force_l0_drain=*/true, &did);
      lock->lock();
      if (!s.ok()) return s;
      if (!did) return Status::Stalled("no compaction can drain level 0");
    }
    CounterAdd(Counters::Get().stall_wall_us, NowMicros() - t0);
  }
  return Status::OK();
}

void Engine::RotateMemtableLocked() {
  if (active_->empty()) return;
  active_->Freeze();
  immutables_.push_back(active_);
  active_ = std::make_shared<Memtable>(options_);
}

Status Engine::MaybeInlineWork() {
  // Inline mode: run flush and any triggered compactions on this thread.
  for (;;) {
    bool have_immutable;
    {
      std::lock_guard<std::mutex> lock(mu_);
      have_immutable = !immutables_.empty();
    }
    if (!have_immutable) break;
    Status s = FlushOldestImmutable();
    if (!s.ok()) return s;
  }
  for (;;) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (!auto_compaction_ || !CompactionPendingLocked()) return Status::OK();
    }
    bool did = false;
    Status s = RunOneCompaction(/*force_l0_drain=*/false, &did);
    if (!s.ok()) return s;
    if (!did) return Status::OK();
  }
}

Status Engine::WriteImpl(std::string_view key, std::string_view value,
                         EntryKind kind) {
  if (value.size() > options_.max_value_size) {
    return Status::InvalidArgument("value exceeds max_value_size");
  }
  std::shared_ptr<Memtable> mem;
  SequenceNumber seq;
  {
    std::unique_lock<std::mutex> lock(mu_);
    if (!bg_error_.ok()) return bg_error_;
    Status s = EnsureWritableLocked(&lock);
    if (!s.ok()) return s;
    seq = last_seq_.fetch_add(1, std::memory_order_acq_rel) + 1;
    mem = active_;
  }

  Status s = kind == EntryKind::kPut ? mem->Put(key, value, seq)
                                     : mem->Delete(key, seq);
  if (!s.ok()) return s;

  bool rotated = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (mem == active_ && active_->byte_size() >= options_.memtable_capacity) {
      RotateMemtableLocked();
      rotated = true;
    }
  }
  if (rotated) {
    if (options_.background_jobs) {
      work_cv_.notify_all();
    } else {
      return MaybeInlineWork();
    }
  }
  return Status::OK();
}

Status Engine::Put(std::string_view key, std::string_view value) {
  return WriteImpl(key, value, EntryKind::kPut);
}

Status Engine::Delete(std::string_view key) {
  return WriteImpl(key, {}, EntryKind::kTombstone);
}

Status Engine::Get(std::string_view key, std::string* value, bool* found,
                   const Snapshot* snapshot) {
  if (key.size() != options_.key_size) return Status::KeySizeMismatch();
  const ReadView view = snapshot ? snapshot->view_ : CurrentView();
  return PointLookup(options_, view, key, value, found);
}

Status Engine::Scan(std::string_view key_low, std::string_view key_high,
                    std::vector<std::pair<std::string, std::string>>* out,
                    const Snapshot* snapshot) {
  const ReadView view = snapshot ? snapshot->view_ : CurrentView();
  return RangeLookup(options_, view, key_low, key_high, out);
}

Status Engine::Filter(const ValuePredicate& p, FilterResult* out,
                      const Snapshot* snapshot) {
  const ReadView view = snapshot ? snapshot->view_ : CurrentView();
  return sctdb::Filter(options_, view, p, out);
}

const Snapshot* Engine::GetSnapshot() {
  auto* snap = new Snapshot();
  snap->view_ = CurrentView();
  std::lock_guard<std::mutex> lock(mu_);
  snapshots_.insert(snap);
  return snap;
}

void Engine::ReleaseSnapshot(const Snapshot* snapshot) {
  if (snapshot == nullptr) return;
  {
    std::lock_guard<std::mutex> lock(mu_);
    snapshots_.erase(snapshot);
  }
  delete snapshot;
}

namespace {

struct FlushRow {
  std::string_view key;
  SequenceNumber seq;
  EntryKind kind;
  std::string_view value;
};

}  // namespace

Status Engine::FlushOldestImmutable() {
  std::shared_ptr<Memtable> mem;
  SequenceNumber oldest_snap;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (immutables_.empty()) return Status::OK();
    mem = immutables_.front();
    oldest_snap = OldestSnapshotSeqLocked();
    flush_busy_ = true;
  }

  // Emit the versions still visible to the oldest live snapshot plus
  // everything newer; tombstones ride along to shadow disk data.
  std::vector<FlushRow> rows;
  rows.reserve(mem->entry_count());
  {
    Memtable::Iterator it = mem->NewIterator();
    std::string_view cur_key;
    bool have_key = false;
    bool drop_rest = false;
    for (it.SeekToFirst(); it.Valid(); it.Next()) {
      if (!have_key || it.key() != cur_key) {
        have_key = true;
        drop_rest = false;
      }
      cur_key = it.key();
      const bool shadowed = drop_rest;
      if (it.seq() <= oldest_snap) drop_rest = true;
      if (shadowed) continue;
      rows.push_back({it.key(), it.seq(), it.kind(), it.value()});
    }
  }

  Status s;
  std::vector<std::shared_ptr<SctFile>> outputs;
  uint64_t bytes_written = 0;

  // Split into files no larger than the configured file size; no key's
  // version run crosses a file boundary.
  size_t begin = 0;
  while (begin < rows.size() && s.ok()) {
    size_t end = begin;
    uint64_t value_bytes = 0;
    uint64_t distinct_bytes = 0;
    std::unordered_set<std::string_view> distinct;
    while (end < rows.size()) {
      const bool new_key = end == begin || rows[end].key != rows[end - 1].key;
      if (new_key && end > begin) {
        const uint64_t est =
            options_.mode == StorageMode::kCoded
                ? EstimateSctBytes(options_, end - begin, distinct.size(),
                                   distinct_bytes, 0, StorageMode::kCoded)
                : EstimateSctBytes(options_, end - begin, 0, 0, value_bytes,
                                   StorageMode::kPlain);
        if (est >= options_.file_size) break;
      }
      if (rows[end].kind == EntryKind::kPut) {
        value_bytes += rows[end].value.size();
        if (options_.mode == StorageMode::kCoded &&
            distinct.insert(rows[end].value).second) {
          distinct_bytes += rows[end].value.size();
        }
      }
      end++;
    }

    const uint64_t id = AllocateFileId();
    const std::string path = SctPath(dir_, id);
    if (options_.mode == StorageMode::kCoded) {
      std::vector<std::string> values;
      values.reserve(distinct.size());
      for (std::string_view v : distinct) values.emplace_back(v);
      Dictionary dict = Dictionary::Build(std::move(values));
      std::unordered_map<std::string_view, uint32_t> encode;
      encode.reserve(dict.size());
      for (uint32_t c = 0; c < dict.size(); c++) encode[dict.ValueAt(c)] = c;

      SctWriter writer(options_, path, id, &dict);
      for (size_t i = begin; i < end && s.ok(); i++) {
        const uint32_t code = rows[i].kind == EntryKind::kPut
                                  ? encode.find(rows[i].value)->second
                                  : 0;
        s = writer.Add(rows[i].key, rows[i].seq, rows[i].kind, code);
      }
      if (s.ok()) s = writer.Finish();
      if (s.ok()) bytes_written += writer.descriptor().file_size_bytes;
    } else {
      SctWriter writer(options_, path, id, nullptr);
      for (size_t i = begin; i < end && s.ok(); i++) {
        s = writer.AddPlain(rows[i].key, rows[i].seq, rows[i].kind,
                            rows[i].value);
      }
      if (s.ok()) s = writer.Finish();
      if (s.ok()) bytes_written += writer.descriptor().file_size_bytes;
    }
    if (s.ok()) {
      std::shared_ptr<SctFile> file;
      s = SctFile::Open(options_, path, id, &file);
      if (s.ok()) outputs.push_back(std::move(file));
    }
    begin = end;
  }

  {
    std::lock_guard<std::mutex> lock(mu_);
    flush_busy_ = false;
    if (!s.ok()) {
      bg_error_ = s;
    } else {
      auto state = std::make_shared<VersionState>(*version_);
      // Newest flush output goes in front; siblings from one memtable are
      // key-disjoint so their relative order is free.
      state->levels[0].insert(state->levels[0].begin(), outputs.begin(),
                              outputs.end());
      version_ = std::move(state);
      assert(immutables_.front() == mem);
      immutables_.pop_front();
      CounterAdd(Counters::Get().flush_bytes_written, bytes_written);
      CounterAdd(Counters::Get().flush_count, 1);
      s = PersistManifestLocked();
      if (!s.ok()) bg_error_ = s;
    }
  }
  work_cv_.notify_all();
  state_cv_.notify_all();
  return s;
}

bool Engine::PickCompactionLocked(bool force_l0_drain, CompactionJob* job,
                                  std::vector<uint64_t>* input_ids,
                                  int* from_level) {
  const auto& levels = version_->levels;
  job->inputs.clear();
  input_ids->clear();
  if (levels.size() < 2) return false;  // nowhere to compact into

  const bool l0_ready = levels[0].size() >= options_.l0_compact_trigger ||
                        (force_l0_drain && !levels[0].empty());
  if (l0_ready) {
    std::string min_key, max_key;
    for (const auto& f : levels[0]) {
      const auto& d = f->descriptor();
      if (min_key.empty() || d.min_key < min_key) min_key = d.min_key;
      if (max_key.empty() || d.max_key > max_key) max_key = d.max_key;
      job->inputs.push_back(f);
      input_ids->push_back(f->id());
    }
    for (const auto& f : levels[1]) {
      const auto& d = f->descriptor();
      if (d.max_key < min_key || d.min_key > max_key) continue;
      job->inputs.push_back(f);
      input_ids->push_back(f->id());
    }
    job->target_level = 1;
    *from_level = 0;
  } else {
    int victim_level = -1;
    for (size_t l = 1; l + 1 < levels.size(); l++) {
      if (LevelBytesLocked(l) >
          options_.LevelCapacity(static_cast<uint32_t>(l))) {
        victim_level = static_cast<int>(l);
        break;
      }
    }
    if (victim_level < 0) return false;

    // Round-robin victim by key range.
    const auto& level_files = levels[victim_level];
    size_t pick = 0;
    for (size_t i = 0; i < level_files.size(); i++) {
      if (level_files[i]->descriptor().min_key >
          compact_cursor_[victim_level]) {
        pick = i;
        break;
      }
    }
    const auto& victim = level_files[pick];
    compact_cursor_[victim_level] = victim->descriptor().max_key;
    job->inputs.push_back(victim);
    input_ids->push_back(victim->id());
    const auto& vd = victim->descriptor();
    for (const auto& f : levels[victim_level + 1]) {
      const auto& d = f->descriptor();
      if (d.max_key < vd.min_key || d.min_key > vd.max_key) continue;
      job->inputs.push_back(f);
      input_ids->push_back(f->id());
    }
    job->target_level = victim_level + 1;
    *from_level = victim_level;
  }

  job->bottom_level =
      job->target_level == static_cast<int>(options_.max_levels) - 1;
  job->oldest_snapshot_seq = OldestSnapshotSeqLocked();
  job->output_budget = options_.file_size;
  job->out_dir = dir_;
  job->allocate_id = [this] { return AllocateFileId(); };
  return true;
}

Status Engine::RunOneCompaction(bool force_l0_drain, bool* did_work) {
  *did_work = false;
  CompactionJob job;
  std::vector<uint64_t> input_ids;
  int from_level = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (compact_busy_) return Status::OK();
    if (!PickCompactionLocked(force_l0_drain, &job, &input_ids, &from_level)) {
      return Status::OK();
    }
    compact_busy_ = true;
  }

  const CompactionAlgo algo = options_.mode == StorageMode::kCoded
                                  ? CompactionAlgo::kCodeRemap
                                  : CompactionAlgo::kPlainRows;
  CompactionResult result;
  Status s = RunCompaction(options_, job, algo, &result);

  {
    std::lock_guard<std::mutex> lock(mu_);
    compact_busy_ = false;
    if (!s.ok()) {
      bg_error_ = s;
    } else {
      auto state = std::make_shared<VersionState>(*version_);
      std::unordered_set<uint64_t> gone(input_ids.begin(), input_ids.end());
      for (auto& level : state->levels) {
        for (auto it = level.begin(); it != level.end();) {
          if (gone.count((*it)->id())) {
            (*it)->MarkObsolete();
            it = level.erase(it);
          } else {
            ++it;
          }
        }
      }
      auto& target = state->levels[job.target_level];
      target.insert(target.end(), result.files.begin(), result.files.end());
      std::sort(target.begin(), target.end(),
                [](const auto& a, const auto& b) {
                  return a->descriptor().min_key < b->descriptor().min_key;
                });
      version_ = std::move(state);
      s = PersistManifestLocked();
      if (!s.ok()) bg_error_ = s;
    }
  }
  work_cv_.notify_all();
  state_cv_.notify_all();
  *did_work = s.ok();
  return s;
}

Status Engine::FlushMemtable() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    RotateMemtableLocked();
  }
  if (!options_.background_jobs) {
    for (;;) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        if (immutables_.empty()) return bg_error_;
      }
      Status s = FlushOldestImmutable();
      if (!s.ok()) return s;
    }
  }
  work_cv_.notify_all();
  std::unique_lock<std::mutex> lock(mu_);
  state_cv_.wait(lock, [this] {
    return (immutables_.empty() && !flush_busy_) || !bg_error_.ok();
  });
  return bg_error_;
}

Status Engine::CompactOnce(bool* did_work) {
  return RunOneCompaction(/*force_l0_drain=*/false, did_work);
}

Status Engine::CompactAll() {
  Status s = FlushMemtable();
  if (!s.ok()) return s;
  if (options_.background_jobs) {
    // Take over the draining inline; the background worker skips work
    // while compact_busy_ is held by this thread's jobs.
    s = WaitForQuiescence();
    if (!s.ok()) return s;
  }
  for (;;) {
    bool did = false;
    s = RunOneCompaction(/*force_l0_drain=*/true, &did);
    if (!s.ok()) return s;
    if (!did) break;
  }
  return Status::OK();
}

Status Engine::WaitForQuiescence() {
  if (!options_.background_jobs) {
    return MaybeInlineWork();
  }
  work_cv_.notify_all();
  std::unique_lock<std::mutex> lock(mu_);
  state_cv_.wait(lock, [this] {
    if (!bg_error_.ok()) return true;
    return immutables_.empty() && !flush_busy_ && !compact_busy_ &&
           (!auto_compaction_ || !CompactionPendingLocked());
  });
  return bg_error_;
}

void Engine::FlushThreadLoop() {
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mu_);
      work_cv_.wait(lock, [this] {
        return shutting_down_ || !immutables_.empty();
      });
      // Unflushed memtable contents are volatile by contract; shutdown
      // does not drain them.
      if (shutting_down_) return;
    }
    FlushOldestImmutable();
  }
}

void Engine::CompactThreadLoop() {
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mu_);
      work_cv_.wait(lock, [this] {
        return shutting_down_ ||
               (auto_compaction_ && !compact_busy_ && CompactionPendingLocked());
      });
      if (shutting_down_) return;
    }
    bool did = false;
    RunOneCompaction(/*force_l0_drain=*/false, &did);
  }
}

std::map<std::string, uint64_t> Engine::GetStats() {
  auto stats = CounterSnapshot::Take().ToMap();
  std::lock_guard<std::mutex> lock(mu_);
  stats["engine.last_seq"] = last_seq_.load(std::memory_order_acquire);
  stats["engine.immutable_memtables"] = immutables_.size();
  stats["engine.memtable_bytes"] = active_->byte_size();
  uint64_t total_bytes = 0;
  uint64_t total_files = 0;
  uint64_t total_entries = 0;
  for (size_t l = 0; l < version_->levels.size(); l++) {
    uint64_t lb = 0;
    for (const auto& f : version_->levels[l]) {
      lb += f->descriptor().file_size_bytes;
      total_entries += f->descriptor().entry_count;
    }
    stats["engine.level" + std::to_string(l) + ".files"] =
        version_->levels[l].size();
    stats["engine.level" + std::to_string(l) + ".bytes"] = lb;
    total_bytes += lb;
    total_files += version_->levels[l].size();
  }
  stats["engine.total_sct_bytes"] = total_bytes;
  stats["engine.total_sct_files"] = total_files;
  stats["engine.total_sct_entries"] = total_entries;
  return stats;
}

uint64_t Engine::TotalSctBytes() {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t total = 0;
  for (const auto& level : version_->levels) {
    for (const auto& f : level) total += f->descriptor().file_size_bytes;
  }
  return total;
}

void Engine::TEST_SetAutoCompaction(bool enabled) {
  std::lock_guard<std::mutex> lock(mu_);
  auto_compaction_ = enabled;
}

}  // namespace sctdb
