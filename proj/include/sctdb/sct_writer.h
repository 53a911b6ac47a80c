// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_SCT_WRITER_H_
#define SCTDB_SCT_WRITER_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sctdb/dictionary.h"
#include "sctdb/options.h"
#include "sctdb/sct_format.h"
#include "sctdb/status.h"

namespace sctdb {

// Builds one immutable SCT. Rows must arrive sorted by (user_key asc,
// seq desc); Finish writes everything to a temp path, fsyncs and renames.
// For coded files pass the dictionary the codes refer to; it is embedded
// in the file. For plain files pass nullptr and use AddPlain.
class SctWriter {
 public:
  SctWriter(const Options& options, std::string path, uint64_t sct_id,
            const Dictionary* dict);
  ~SctWriter();

  Status Add(std::string_view key, SequenceNumber seq, EntryKind kind,
             uint32_t code);
  Status AddPlain(std::string_view key, SequenceNumber seq, EntryKind kind,
                  std::string_view value);

  // EmptyFile when no rows were added.
  Status Finish();

  // Valid after Finish.
  const SctDescriptor& descriptor() const { return descriptor_; }

  uint64_t rows_added() const { return row_count_; }

 private:
  Status CheckOrder(std::string_view key, SequenceNumber seq);
  void FlushKeyBlock();
  void FlushCodeBlock();
  void FlushValueBlock();
  void AppendBlock(std::string* section, std::string_view payload,
                   BlockKind kind, uint32_t start_row, uint32_t end_row,
                   const std::vector<std::string_view>* bloom_keys);

  const Options options_;
  const std::string path_;
  const Dictionary* dict_;  // null for plain files
  const StorageMode mode_;
  const uint32_t packed_width_;

  std::string key_section_;
  std::string data_section_;
  std::vector<BlockMeta> metas_;

  // Pending key block.
  std::string pend_keys_;
  std::vector<SequenceNumber> pend_seqs_;
  std::vector<uint8_t> pend_kinds_;
  uint32_t pend_start_row_ = 0;

  // Pending data block.
  std::vector<uint32_t> pend_codes_;
  std::string pend_values_;
  std::vector<uint16_t> pend_value_offsets_;
  uint32_t pend_data_start_row_ = 0;

  uint64_t row_count_ = 0;
  std::string min_key_;
  std::string last_key_;
  SequenceNumber last_seq_ = 0;
  bool has_last_ = false;
  bool finished_ = false;

  SctDescriptor descriptor_;
};

}  // namespace sctdb

#endif  // SCTDB_SCT_WRITER_H_
