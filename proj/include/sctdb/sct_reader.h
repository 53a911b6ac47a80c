// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_SCT_READER_H_
#define SCTDB_SCT_READER_H_

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sctdb/dictionary.h"
#include "sctdb/options.h"
#include "sctdb/sct_format.h"
#include "sctdb/status.h"
#include "util/env.h"

namespace sctdb {

struct KeyBlockContents {
  uint32_t row_count = 0;
  size_t key_size = 0;
  std::string keys;                  // row_count * key_size bytes
  std::vector<SequenceNumber> seqs;  // parallel
  std::vector<uint8_t> tombstone;    // parallel, 0/1

  std::string_view key_at(uint32_t i) const {
    return std::string_view(keys).substr(i * key_size, key_size);
  }
  EntryKind kind_at(uint32_t i) const {
    return tombstone[i] ? EntryKind::kTombstone : EntryKind::kPut;
  }
};

struct ValueBlockContents {
  uint32_t row_count = 0;
  std::vector<uint16_t> offsets;  // row_count + 1
  std::string payload;

  std::string_view value_at(uint32_t i) const {
    return std::string_view(payload).substr(offsets[i],
                                            offsets[i + 1] - offsets[i]);
  }
};

// An open, immutable table file. The dictionary and block index are loaded
// at open and stay resident; block reads go through pread and verify their
// checksum. Shared by any number of concurrent readers. A file marked
// obsolete removes itself from disk when the last reference drops.
class SctFile {
 public:
  static Status Open(const Options& options, const std::string& path,
                     uint64_t sct_id, std::shared_ptr<SctFile>* out);
  ~SctFile();
  SctFile(const SctFile&) = delete;
  SctFile& operator=(const SctFile&) = delete;

  const SctDescriptor& descriptor() const { return descriptor_; }
  const Dictionary& dict() const { return dict_; }
  StorageMode mode() const { return descriptor_.value_repr; }
  uint64_t id() const { return descriptor_.sct_id; }

  const std::vector<BlockMeta>& key_blocks() const { return key_blocks_; }
  const std::vector<BlockMeta>& data_blocks() const { return data_blocks_; }

  Status ReadKeyBlock(size_t idx, KeyBlockContents* out) const;
  // Codes are unpacked from the on-disk width into 32-bit lanes.
  Status ReadCodeBlock(size_t idx, std::vector<uint32_t>* codes) const;
  Status ReadValueBlock(size_t idx, ValueBlockContents* out) const;

  // Assembles every code column of the file into one 32-bit lane sequence,
  // in row order, without any dictionary decode.
  Status LoadAllCodes(std::vector<uint32_t>* out) const;

  // Newest record for key with seq <= read_seq. Prunes candidate blocks
  // through their bloom filters. *found false when absent.
  Status PointProbe(std::string_view key, SequenceNumber read_seq, bool* found,
                    EntryRecord* rec) const;

  // Reads all data + key blocks into an internal pin so following block
  // reads are served from memory. Used by long range scans.
  Status BulkLoad() const;

  void MarkObsolete() { obsolete_ = true; }

  // Streaming row cursor in (key asc, seq desc) order. Views returned by
  // key()/value() stay valid until the next Next() call.
  class Cursor {
   public:
    explicit Cursor(std::shared_ptr<const SctFile> file);
    bool Valid() const { return valid_; }
    Status status() const { return status_; }
    void SeekToFirst();
    void Seek(std::string_view key, SequenceNumber seq);
    void Next();

    std::string_view key() const;
    SequenceNumber seq() const;
    EntryKind kind() const;
    uint32_t code() const;          // coded files
    std::string_view value() const;  // plain files
    uint64_t row_index() const { return row_; }

   private:
    void LoadBlocksForRow(uint64_t row);

    std::shared_ptr<const SctFile> file_;
    KeyBlockContents key_block_;
    ValueBlockContents value_block_;
    std::vector<uint32_t> codes_;
    size_t key_block_idx_ = 0;
    size_t data_block_idx_ = 0;
    bool key_block_loaded_ = false;
    bool data_block_loaded_ = false;
    uint32_t key_block_loaded_start_ = 0;
    uint32_t data_block_loaded_start_ = 0;
    uint64_t row_ = 0;
    bool valid_ = false;
    Status status_;
  };

 private:
  SctFile() = default;
  Status ReadBlockRaw(uint64_t offset, std::string* block) const;
  Status LoadFooterAndSections(const Options& options, uint64_t sct_id);
  const BlockMeta& DataBlockForRow(uint64_t row, size_t* idx_out) const;

  RandomAccessFile file_;
  SctDescriptor descriptor_;
  Dictionary dict_;
  std::vector<BlockMeta> key_blocks_;
  std::vector<BlockMeta> data_blocks_;

  // Whole-file pin, populated once by BulkLoad and immutable afterwards.
  mutable std::once_flag bulk_once_;
  mutable std::string bulk_;
  mutable std::atomic<bool> bulk_ready_{false};

  bool obsolete_ = false;
};

// Reads every row back as owned records; test and oracle helper.
Status ReadAllRows(const std::shared_ptr<const SctFile>& file,
                   std::vector<EntryRecord>* out);

}  // namespace sctdb

#endif  // SCTDB_SCT_READER_H_
