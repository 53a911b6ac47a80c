// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/sct_writer.h"

#include <cassert>
#include <filesystem>

#include "util/bitpack.h"
#include "util/bloom.h"
#include "util/coding.h"
#include "util/crc32c.h"
#include "util/env.h"

namespace sctdb {

namespace {

void SealBlock(std::string* block) {
  assert(block->size() <= kBlockPayload);
  block->resize(kBlockPayload, '\0');
  PutFixed32(block, crc32c::Value(*block));
}

// Pads section so that, with a trailing crc, it fills whole blocks, then
// appends the crc over everything before it.
void SealSection(std::string* section) {
  const size_t target =
      ((section->size() + 4 + kBlockSize - 1) / kBlockSize) * kBlockSize;
  section->resize(target - 4, '\0');
  PutFixed32(section, crc32c::Value(*section));
}

}  // namespace

uint64_t EstimateSctBytes(const Options& options, uint64_t rows,
                          uint64_t distinct_values, uint64_t distinct_bytes,
                          uint64_t value_bytes, StorageMode mode) {
  if (rows == 0) return 0;
  const uint32_t rpk = RowsPerKeyBlock(options.key_size);
  const uint64_t key_blocks = (rows + rpk - 1) / rpk;

  uint64_t data_blocks;
  uint64_t dict_section = 0;
  if (mode == StorageMode::kCoded) {
    uint32_t width = 1;
    while ((1ull << width) < distinct_values + 2) width++;
    const uint32_t rpc = RowsPerCodeBlock(width);
    data_blocks = (rows + rpc - 1) / rpc;
    const uint64_t dict_raw = 4 + 4 * (distinct_values + 1) + distinct_bytes;
    dict_section = ((dict_raw + 4 + kBlockSize - 1) / kBlockSize) * kBlockSize;
  } else {
    // Greedy value packing; assume the conservative payload budget.
    const uint64_t payload = value_bytes + 2 * rows + 4;
    data_blocks = (payload + kBlockPayload - 17) / (kBlockPayload - 16);
  }

  const uint64_t bloom_full =
      (std::max<uint64_t>(64, static_cast<uint64_t>(rpk) *
                                  options.bloom_bits_per_key) +
       7) /
      8;
  const uint64_t meta_raw = 4 +
                            key_blocks * (17 + 2 * options.key_size + 2 +
                                          bloom_full) +
                            data_blocks * 17;
  const uint64_t meta_section =
      ((meta_raw + 4 + kBlockSize - 1) / kBlockSize) * kBlockSize;

  return kBlockSize /*header*/ + key_blocks * kBlockSize +
         data_blocks * kBlockSize + dict_section + meta_section +
         kBlockSize /*footer*/;
}

SctWriter::SctWriter(const Options& options, std::string path, uint64_t sct_id,
                     const Dictionary* dict)
    : options_(options),
      path_(std::move(path)),
      dict_(dict),
      mode_(dict ? StorageMode::kCoded : StorageMode::kPlain),
      packed_width_(dict ? dict->packed_width_bits() : 0) {
  descriptor_.sct_id = sct_id;
  descriptor_.path = path_;
  descriptor_.value_repr = mode_;
  descriptor_.code_width_bits = packed_width_;
  descriptor_.dict_entries = dict ? dict->size() : 0;
}

SctWriter::~SctWriter() = default;

Status SctWriter::CheckOrder(std::string_view key, SequenceNumber seq) {
  if (key.size() != options_.key_size) {
    return Status::KeySizeMismatch();
  }
  if (has_last_ && CompareKeySeq(last_key_, last_seq_, key, seq) >= 0) {
    return Status::UnsortedInput("rows must be (key asc, seq desc) unique");
  }
  if (!has_last_) min_key_.assign(key);
  last_key_.assign(key);
  last_seq_ = seq;
  has_last_ = true;
  return Status::OK();
}

Status SctWriter::Add(std::string_view key, SequenceNumber seq, EntryKind kind,
                      uint32_t code) {
  if (mode_ != StorageMode::kCoded) {
    return Status::InvalidArgument("plain writer requires AddPlain");
  }
  Status s = CheckOrder(key, seq);
  if (!s.ok()) return s;

  uint32_t stored;
  if (kind == EntryKind::kTombstone) {
    stored = dict_->tombstone_sentinel();
  } else {
    if (code >= dict_->size()) return Status::CodeOutOfRange();
    stored = code;
  }

  pend_keys_.append(key);
  pend_seqs_.push_back(seq);
  pend_kinds_.push_back(kind == EntryKind::kTombstone ? 1 : 0);
  if (pend_seqs_.size() >= RowsPerKeyBlock(options_.key_size)) FlushKeyBlock();

  pend_codes_.push_back(stored);
  if (pend_codes_.size() >= RowsPerCodeBlock(packed_width_)) FlushCodeBlock();

  row_count_++;
  return Status::OK();
}

Status SctWriter::AddPlain(std::string_view key, SequenceNumber seq,
                           EntryKind kind, std::string_view value) {
  if (mode_ != StorageMode::kPlain) {
    return Status::InvalidArgument("coded writer requires Add");
  }
  if (value.size() > options_.max_value_size) {
    return Status::InvalidArgument("value too large");
  }
  Status s = CheckOrder(key, seq);
  if (!s.ok()) return s;
  if (kind == EntryKind::kTombstone) value = {};

  pend_keys_.append(key);
  pend_seqs_.push_back(seq);
  pend_kinds_.push_back(kind == EntryKind::kTombstone ? 1 : 0);
  if (pend_seqs_.size() >= RowsPerKeyBlock(options_.key_size)) FlushKeyBlock();

  // 2 bytes row count + (r+1) offsets + payload must fit one block.
  const size_t rows = pend_value_offsets_.empty()
                          ? 0
                          : pend_value_offsets_.size() - 1;
  const size_t need = 2 + 2 * (rows + 2) + pend_values_.size() + value.size();
  if (rows > 0 && need > kBlockPayload) FlushValueBlock();

  if (pend_value_offsets_.empty()) pend_value_offsets_.push_back(0);
  pend_values_.append(value);
  pend_value_offsets_.push_back(static_cast<uint16_t>(pend_values_.size()));

  row_count_++;
  return Status::OK();
}

void SctWriter::AppendBlock(std::string* section, std::string_view payload,
                            BlockKind kind, uint32_t start_row,
                            uint32_t end_row,
                            const std::vector<std::string_view>* bloom_keys) {
  BlockMeta meta;
  meta.kind = kind;
  meta.start_row = start_row;
  meta.end_row = end_row;
  if (kind == BlockKind::kKeyBlock) {
    const size_t ks = options_.key_size;
    meta.first_key.assign(payload.substr(2, ks));
    meta.last_key.assign(
        payload.substr(2 + (end_row - start_row - 1) * ks, ks));
    meta.bloom = BuildBloom(*bloom_keys, options_.bloom_bits_per_key);
  }
  // Stash the intra-section offset; Finish rebases it.
  meta.offset = section->size();
  metas_.push_back(std::move(meta));

  std::string block(payload);
  SealBlock(&block);
  section->append(block);
}

void SctWriter::FlushKeyBlock() {
  if (pend_seqs_.empty()) return;
  const uint32_t r = static_cast<uint32_t>(pend_seqs_.size());
  const size_t ks = options_.key_size;

  std::string payload;
  payload.reserve(2 + r * (ks + 8) + (r + 7) / 8);
  PutFixed16(&payload, static_cast<uint16_t>(r));
  payload.append(pend_keys_);
  for (SequenceNumber s : pend_seqs_) PutFixed64(&payload, s);
  std::string kind_bits((r + 7) / 8, '\0');
  for (uint32_t i = 0; i < r; i++) {
    if (pend_kinds_[i]) kind_bits[i / 8] |= static_cast<char>(1u << (i % 8));
  }
  payload.append(kind_bits);

  std::vector<std::string_view> keys;
  keys.reserve(r);
  for (uint32_t i = 0; i < r; i++) {
    keys.push_back(std::string_view(pend_keys_).substr(i * ks, ks));
  }
  AppendBlock(&key_section_, payload, BlockKind::kKeyBlock, pend_start_row_,
              pend_start_row_ + r, &keys);

  pend_start_row_ += r;
  pend_keys_.clear();
  pend_seqs_.clear();
  pend_kinds_.clear();
}

void SctWriter::FlushCodeBlock() {
  if (pend_codes_.empty()) return;
  const uint32_t r = static_cast<uint32_t>(pend_codes_.size());
  std::string payload;
  PutFixed16(&payload, static_cast<uint16_t>(r));
  AppendPackedCodes(pend_codes_.data(), r, packed_width_, &payload);
  AppendBlock(&data_section_, payload, BlockKind::kCodeBlock,
              pend_data_start_row_, pend_data_start_row_ + r, nullptr);
  pend_data_start_row_ += r;
  pend_codes_.clear();
}

void SctWriter::FlushValueBlock() {
  if (pend_value_offsets_.empty()) return;
  const uint32_t r = static_cast<uint32_t>(pend_value_offsets_.size() - 1);
  std::string payload;
  PutFixed16(&payload, static_cast<uint16_t>(r));
  for (uint16_t off : pend_value_offsets_) PutFixed16(&payload, off);
  payload.append(pend_values_);
  AppendBlock(&data_section_, payload, BlockKind::kValueBlock,
              pend_data_start_row_, pend_data_start_row_ + r, nullptr);
  pend_data_start_row_ += r;
  pend_values_.clear();
  pend_value_offsets_.clear();
}

Status SctWriter::Finish() {
  assert(!finished_);
  finished_ = true;
  if (row_count_ == 0) return Status::EmptyFile();

  FlushKeyBlock();
  if (mode_ == StorageMode::kCoded) {
    FlushCodeBlock();
  } else {
    FlushValueBlock();
  }

  // Header.
  std::string header;
  header.append(kSctMagic, 4);
  PutFixed16(&header, kSctFormatVersion);
  PutFixed16(&header, static_cast<uint16_t>(options_.key_size));
  header.push_back(static_cast<char>(packed_width_));
  header.push_back(static_cast<char>(static_cast<uint8_t>(mode_)));
  SealBlock(&header);

  // Section bases.
  const uint64_t key_off = kBlockSize;
  const uint64_t data_off = key_off + key_section_.size();
  const uint64_t dict_off = data_off + data_section_.size();

  std::string dict_section;
  if (mode_ == StorageMode::kCoded) {
    PutFixed32(&dict_section, dict_->size());
    for (uint32_t off : dict_->offsets()) PutFixed32(&dict_section, off);
    dict_section.append(dict_->arena());
    SealSection(&dict_section);
  }
  const uint64_t meta_off = dict_off + dict_section.size();

  // Rebase block offsets and serialize the meta section.
  std::string meta_section;
  uint64_t n_data_seen = 0;
  uint64_t n_key_seen = 0;
  PutFixed32(&meta_section, static_cast<uint32_t>(metas_.size()));
  for (BlockMeta& m : metas_) {
    if (m.kind == BlockKind::kKeyBlock) {
      m.offset += key_off;
      n_key_seen++;
    } else {
      m.offset += data_off;
      n_data_seen++;
    }
    PutFixed64(&meta_section, m.offset);
    meta_section.push_back(static_cast<char>(m.kind));
    PutFixed32(&meta_section, m.start_row);
    PutFixed32(&meta_section, m.end_row);
    if (m.kind == BlockKind::kKeyBlock) {
      meta_section.append(m.first_key);
      meta_section.append(m.last_key);
      PutFixed16(&meta_section, static_cast<uint16_t>(m.bloom.size()));
      meta_section.append(m.bloom);
    }
  }
  SealSection(&meta_section);

  // Footer.
  std::string footer;
  PutFixed64(&footer, key_off);
  PutFixed64(&footer, n_key_seen);
  PutFixed64(&footer, data_off);
  PutFixed64(&footer, n_data_seen);
  PutFixed64(&footer, mode_ == StorageMode::kCoded ? dict_off : 0);
  PutFixed64(&footer, dict_section.size());
  PutFixed64(&footer, meta_off);
  PutFixed64(&footer, meta_section.size());
  PutFixed64(&footer, row_count_);
  PutFixed32(&footer, dict_ ? dict_->size() : 0);
  footer.append(min_key_);
  footer.append(last_key_);
  footer.resize(kBlockSize - 8, '\0');
  PutFixed32(&footer, crc32c::Value(footer));
  footer.append(kSctMagic, 4);

  std::string file;
  file.reserve(kBlockSize + key_section_.size() + data_section_.size() +
               dict_section.size() + meta_section.size() + kBlockSize);
  file.append(header);
  file.append(key_section_);
  file.append(data_section_);
  file.append(dict_section);
  file.append(meta_section);
  file.append(footer);

  Status s = AtomicWriteFile(path_, file);
  if (!s.ok()) return s;

  descriptor_.min_key = min_key_;
  descriptor_.max_key = last_key_;
  descriptor_.entry_count = row_count_;
  descriptor_.file_size_bytes = file.size();
  return Status::OK();
}

}  // namespace sctdb
