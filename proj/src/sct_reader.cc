// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/sct_reader.h"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <mutex>

#include "sctdb/stats.h"
#include "util/bitpack.h"
#include "util/bloom.h"
#include "util/coding.h"
#include "util/crc32c.h"

namespace sctdb {

namespace {

Status CheckBlockCrc(std::string_view block) {
  if (block.size() != kBlockSize) return Status::Corruption("bad block size");
  const uint32_t stored = DecodeFixed32(block.data() + kBlockPayload);
  if (crc32c::Value(block.substr(0, kBlockPayload)) != stored) {
    return Status::ChecksumMismatch("block crc");
  }
  return Status::OK();
}

Status CheckSectionCrc(std::string_view section, const char* what) {
  if (section.size() < 4) return Status::Corruption("short section");
  const uint32_t stored = DecodeFixed32(section.data() + section.size() - 4);
  if (crc32c::Value(section.substr(0, section.size() - 4)) != stored) {
    return Status::ChecksumMismatch(what);
  }
  return Status::OK();
}

}  // namespace

SctFile::~SctFile() {
  file_.Close();
  if (obsolete_) {
    RemoveFileIfExists(descriptor_.path);
  }
}

Status SctFile::Open(const Options& options, const std::string& path,
                     uint64_t sct_id, std::shared_ptr<SctFile>* out) {
  std::shared_ptr<SctFile> f(new SctFile());
  Status s = f->file_.Open(path);
  if (!s.ok()) return s;
  f->descriptor_.path = path;
  s = f->LoadFooterAndSections(options, sct_id);
  if (!s.ok()) return s;
  *out = std::move(f);
  return Status::OK();
}

Status SctFile::LoadFooterAndSections(const Options& options,
                                      uint64_t sct_id) {
  const uint64_t size = file_.size();
  if (size < 3 * kBlockSize || size % kBlockSize != 0) {
    return Status::Corruption("file too small or misaligned");
  }

  // Footer.
  std::string footer(kBlockSize, '\0');
  Status s = file_.Pread(size - kBlockSize, kBlockSize, footer.data());
  if (!s.ok()) return s;
  if (std::memcmp(footer.data() + kBlockSize - 4, kSctMagic, 4) != 0) {
    return Status::Corruption("footer magic");
  }
  const uint32_t footer_crc = DecodeFixed32(footer.data() + kBlockSize - 8);
  if (crc32c::Value(footer.data(), kBlockSize - 8) != footer_crc) {
    return Status::ChecksumMismatch("footer crc");
  }

  ByteReader fr{footer, 0};
  uint64_t key_off = 0, n_key_blocks = 0, data_off = 0, n_data_blocks = 0;
  uint64_t dict_off = 0, dict_len = 0, meta_off = 0, meta_len = 0;
  uint64_t entry_count = 0;
  uint32_t dict_m = 0;
  std::string_view min_key, max_key;
  if (!fr.Read64(&key_off) || !fr.Read64(&n_key_blocks) ||
      !fr.Read64(&data_off) || !fr.Read64(&n_data_blocks) ||
      !fr.Read64(&dict_off) || !fr.Read64(&dict_len) ||
      !fr.Read64(&meta_off) || !fr.Read64(&meta_len) ||
      !fr.Read64(&entry_count) || !fr.Read32(&dict_m) ||
      !fr.ReadBytes(options.key_size, &min_key) ||
      !fr.ReadBytes(options.key_size, &max_key)) {
    return Status::Corruption("footer fields");
  }
  if (meta_off + meta_len + kBlockSize != size ||
      key_off != kBlockSize) {
    return Status::Corruption("footer section offsets");
  }

  // Header.
  std::string header(kBlockSize, '\0');
  s = file_.Pread(0, kBlockSize, header.data());
  if (!s.ok()) return s;
  s = CheckBlockCrc(header);
  if (!s.ok()) return s;
  if (std::memcmp(header.data(), kSctMagic, 4) != 0) {
    return Status::Corruption("header magic");
  }
  if (DecodeFixed16(header.data() + 4) != kSctFormatVersion) {
    return Status::Corruption("unsupported format version");
  }
  if (DecodeFixed16(header.data() + 6) != options.key_size) {
    return Status::Corruption("key size mismatch");
  }
  const uint32_t width = static_cast<uint8_t>(header[8]);
  const uint8_t repr = static_cast<uint8_t>(header[9]);
  if (repr > 1) return Status::Corruption("bad value representation");

  descriptor_.sct_id = sct_id;
  descriptor_.entry_count = entry_count;
  descriptor_.file_size_bytes = size;
  descriptor_.dict_entries = dict_m;
  descriptor_.code_width_bits = width;
  descriptor_.value_repr = static_cast<StorageMode>(repr);
  descriptor_.min_key.assign(min_key);
  descriptor_.max_key.assign(max_key);

  // Dictionary section.
  if (descriptor_.value_repr == StorageMode::kCoded) {
    if (dict_off == 0 || dict_len < 12 || dict_off + dict_len > size) {
      return Status::Corruption("dict section bounds");
    }
    std::string dict_raw(dict_len, '\0');
    s = file_.Pread(dict_off, dict_len, dict_raw.data());
    if (!s.ok()) return s;
    s = CheckSectionCrc(dict_raw, "dict crc");
    if (!s.ok()) return s;
    ByteReader dr{dict_raw, 0};
    uint32_t m = 0;
    if (!dr.Read32(&m) || m != dict_m) {
      return Status::Corruption("dict entry count mismatch");
    }
    std::vector<uint32_t> offsets(m + 1);
    for (uint32_t i = 0; i <= m; i++) {
      if (!dr.Read32(&offsets[i])) return Status::Corruption("dict offsets");
    }
    std::string_view arena;
    if (!dr.ReadBytes(offsets[m], &arena)) {
      return Status::Corruption("dict arena");
    }
    dict_ = Dictionary::FromSortedArena(std::string(arena), std::move(offsets));
    if (dict_.packed_width_bits() != width) {
      return Status::Corruption("dict width mismatch");
    }
  }

  // Meta section.
  if (meta_len < 8 || meta_off + meta_len > size) {
    return Status::Corruption("meta section bounds");
  }
  std::string meta_raw(meta_len, '\0');
  s = file_.Pread(meta_off, meta_len, meta_raw.data());
  if (!s.ok()) return s;
  s = CheckSectionCrc(meta_raw, "meta crc");
  if (!s.ok()) return s;
  ByteReader mr{meta_raw, 0};
  uint32_t n_blocks = 0;
  if (!mr.Read32(&n_blocks)) return Status::Corruption("meta header");
  key_blocks_.reserve(n_key_blocks);
  data_blocks_.reserve(n_data_blocks);
  for (uint32_t i = 0; i < n_blocks; i++) {
    BlockMeta m;
    uint8_t kind;
    std::string_view sv;
    if (!mr.Read64(&m.offset) || !mr.ReadBytes(1, &sv)) {
      return Status::Corruption("meta entry");
    }
    kind = static_cast<uint8_t>(sv[0]);
    m.kind = static_cast<BlockKind>(kind);
    if (!mr.Read32(&m.start_row) || !mr.Read32(&m.end_row)) {
      return Status::Corruption("meta entry rows");
    }
    if (m.kind == BlockKind::kKeyBlock) {
      std::string_view fk, lk, bloom;
      uint16_t bloom_len;
      if (!mr.ReadBytes(options.key_size, &fk) ||
          !mr.ReadBytes(options.key_size, &lk) || !mr.Read16(&bloom_len) ||
          !mr.ReadBytes(bloom_len, &bloom)) {
        return Status::Corruption("meta key entry");
      }
      m.first_key.assign(fk);
      m.last_key.assign(lk);
      m.bloom.assign(bloom);
      key_blocks_.push_back(std::move(m));
    } else {
      data_blocks_.push_back(std::move(m));
    }
  }
  if (key_blocks_.size() != n_key_blocks ||
      data_blocks_.size() != n_data_blocks) {
    return Status::Corruption("block counts disagree with footer");
  }
  return Status::OK();
}

Status SctFile::ReadBlockRaw(uint64_t offset, std::string* block) const {
  block->resize(kBlockSize);
  if (bulk_ready_.load(std::memory_order_acquire)) {
    if (offset + kBlockSize > bulk_.size()) {
      return Status::Corruption("block offset out of range");
    }
    block->assign(bulk_, offset, kBlockSize);
  } else {
    Status s = file_.Pread(offset, kBlockSize, block->data());
    if (!s.ok()) return s;
  }
  CounterAdd(Counters::Get().blocks_read, 1);
  return CheckBlockCrc(*block);
}

Status SctFile::BulkLoad() const {
  Status result;
  std::call_once(bulk_once_, [&] {
    std::string buf(file_.size(), '\0');
    Status s = file_.Pread(0, buf.size(), buf.data());
    if (s.ok()) {
      bulk_ = std::move(buf);
      bulk_ready_.store(true, std::memory_order_release);
      CounterAdd(Counters::Get().bulk_reads, 1);
    } else {
      result = s;
    }
  });
  return result;
}

Status SctFile::ReadKeyBlock(size_t idx, KeyBlockContents* out) const {
  const BlockMeta& meta = key_blocks_[idx];
  std::string block;
  Status s = ReadBlockRaw(meta.offset, &block);
  if (!s.ok()) return s;

  const size_t ks = descriptor_.min_key.size();
  const uint32_t r = DecodeFixed16(block.data());
  if (r != meta.end_row - meta.start_row) {
    return Status::Corruption("key block row count");
  }
  out->row_count = r;
  out->key_size = ks;
  out->keys.assign(block, 2, r * ks);
  out->seqs.resize(r);
  const char* seq_base = block.data() + 2 + r * ks;
  for (uint32_t i = 0; i < r; i++) {
    out->seqs[i] = DecodeFixed64(seq_base + 8 * i);
  }
  out->tombstone.resize(r);
  const char* bits = seq_base + 8 * r;
  for (uint32_t i = 0; i < r; i++) {
    out->tombstone[i] = (bits[i / 8] >> (i % 8)) & 1;
  }
  return Status::OK();
}

Status SctFile::ReadCodeBlock(size_t idx, std::vector<uint32_t>* codes) const {
  const BlockMeta& meta = data_blocks_[idx];
  if (meta.kind != BlockKind::kCodeBlock) {
    return Status::Corruption("not a code block");
  }
  std::string block;
  Status s = ReadBlockRaw(meta.offset, &block);
  if (!s.ok()) return s;
  const uint32_t r = DecodeFixed16(block.data());
  if (r != meta.end_row - meta.start_row) {
    return Status::Corruption("code block row count");
  }
  codes->resize(r);
  UnpackCodes(block.data() + 2, r, descriptor_.code_width_bits, codes->data());
  return Status::OK();
}

Status SctFile::ReadValueBlock(size_t idx, ValueBlockContents* out) const {
  const BlockMeta& meta = data_blocks_[idx];
  if (meta.kind != BlockKind::kValueBlock) {
    return Status::Corruption("not a value block");
  }
  std::string block;
  Status s = ReadBlockRaw(meta.offset, &block);
  if (!s.ok()) return s;
  const uint32_t r = DecodeFixed16(block.data());
  if (r != meta.end_row - meta.start_row) {
    return Status::Corruption("value block row count");
  }
  out->row_count = r;
  out->offsets.resize(r + 1);
  for (uint32_t i = 0; i <= r; i++) {
    out->offsets[i] = DecodeFixed16(block.data() + 2 + 2 * i);
  }
  const size_t payload_base = 2 + 2 * (r + 1);
  out->payload.assign(block, payload_base, out->offsets[r]);
  return Status::OK();
}

Status SctFile::LoadAllCodes(std::vector<uint32_t>* out) const {
  out->clear();
  out->reserve(descriptor_.entry_count);
  std::vector<uint32_t> block_codes;
  for (size_t i = 0; i < data_blocks_.size(); i++) {
    Status s = ReadCodeBlock(i, &block_codes);
    if (!s.ok()) return s;
    out->insert(out->end(), block_codes.begin(), block_codes.end());
  }
  return Status::OK();
}

const BlockMeta& SctFile::DataBlockForRow(uint64_t row, size_t* idx_out) const {
  // First data block with end_row > row.
  size_t lo = 0, hi = data_blocks_.size();
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    if (data_blocks_[mid].end_row <= row) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (idx_out != nullptr) *idx_out = lo;
  return data_blocks_[lo];
}

Status SctFile::PointProbe(std::string_view key, SequenceNumber read_seq,
                           bool* found, EntryRecord* rec) const {
  *found = false;
  CounterAdd(Counters::Get().point_file_probes, 1);

  // First candidate: first key block with last_key >= key.
  size_t lo = 0, hi = key_blocks_.size();
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    if (key_blocks_[mid].last_key < key) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }

  KeyBlockContents kb;
  for (size_t b = lo; b < key_blocks_.size(); b++) {
    const BlockMeta& meta = key_blocks_[b];
    if (meta.first_key > key) break;
    if (!BloomMayContain(meta.bloom, key)) {
      CounterAdd(Counters::Get().bloom_block_skips, 1);
      continue;
    }
    CounterAdd(Counters::Get().bloom_block_hits, 1);
    Status s = ReadKeyBlock(b, &kb);
    if (!s.ok()) return s;

    // First row >= (key, read_seq) in (key asc, seq desc) order.
    uint32_t rlo = 0, rhi = kb.row_count;
    while (rlo < rhi) {
      const uint32_t mid = rlo + (rhi - rlo) / 2;
      if (CompareKeySeq(kb.key_at(mid), kb.seqs[mid], key, read_seq) < 0) {
        rlo = mid + 1;
      } else {
        rhi = mid;
      }
    }
    if (rlo == kb.row_count) continue;  // key may continue in the next block
    if (kb.key_at(rlo) != key) break;   // moved past the key: absent

    const uint64_t row = meta.start_row + rlo;
    rec->user_key.assign(key);
    rec->seq = kb.seqs[rlo];
    rec->kind = kb.kind_at(rlo);
    rec->code = 0;
    rec->value.clear();
    if (rec->kind == EntryKind::kPut) {
      size_t didx;
      const BlockMeta& dmeta = DataBlockForRow(row, &didx);
      if (descriptor_.value_repr == StorageMode::kCoded) {
        std::vector<uint32_t> codes;
        s = ReadCodeBlock(didx, &codes);
        if (!s.ok()) return s;
        rec->code = codes[row - dmeta.start_row];
      } else {
        ValueBlockContents vb;
        s = ReadValueBlock(didx, &vb);
        if (!s.ok()) return s;
        rec->value.assign(vb.value_at(static_cast<uint32_t>(row - dmeta.start_row)));
      }
    }
    *found = true;
    return Status::OK();
  }
  return Status::OK();
}

SctFile::Cursor::Cursor(std::shared_ptr<const SctFile> file)
    : file_(std::move(file)) {}

void SctFile::Cursor::LoadBlocksForRow(uint64_t row) {
  const auto& kbs = file_->key_blocks_;
  while (key_block_idx_ < kbs.size() && kbs[key_block_idx_].end_row <= row) {
    key_block_idx_++;
  }
  if (key_block_idx_ >= kbs.size()) {
    valid_ = false;
    return;
  }
  if (!key_block_loaded_ ||
      kbs[key_block_idx_].start_row != key_block_loaded_start_) {
    status_ = file_->ReadKeyBlock(key_block_idx_, &key_block_);
    if (!status_.ok()) {
      valid_ = false;
      return;
    }
    key_block_loaded_ = true;
    key_block_loaded_start_ = kbs[key_block_idx_].start_row;
  }

  const auto& dbs = file_->data_blocks_;
  while (data_block_idx_ < dbs.size() && dbs[data_block_idx_].end_row <= row) {
    data_block_idx_++;
  }
  if (data_block_idx_ >= dbs.size()) {
    valid_ = false;
    status_ = Status::Corruption("row without data block");
    return;
  }
  if (!data_block_loaded_ ||
      dbs[data_block_idx_].start_row != data_block_loaded_start_) {
    if (file_->mode() == StorageMode::kCoded) {
      status_ = file_->ReadCodeBlock(data_block_idx_, &codes_);
    } else {
      status_ = file_->ReadValueBlock(data_block_idx_, &value_block_);
    }
    if (!status_.ok()) {
      valid_ = false;
      return;
    }
    data_block_loaded_ = true;
    data_block_loaded_start_ = dbs[data_block_idx_].start_row;
  }
  row_ = row;
  valid_ = true;
}

void SctFile::Cursor::SeekToFirst() {
  key_block_idx_ = 0;
  data_block_idx_ = 0;
  key_block_loaded_ = false;
  data_block_loaded_ = false;
  if (file_->descriptor_.entry_count == 0) {
    valid_ = false;
    return;
  }
  LoadBlocksForRow(0);
}

void SctFile::Cursor::Seek(std::string_view key, SequenceNumber seq) {
  const auto& kbs = file_->key_blocks_;
  size_t lo = 0, hi = kbs.size();
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    if (kbs[mid].last_key < key) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  key_block_idx_ = lo;
  data_block_idx_ = 0;
  key_block_loaded_ = false;
  data_block_loaded_ = false;

  for (size_t b = lo; b < kbs.size(); b++) {
    key_block_idx_ = b;
    key_block_loaded_ = false;
    status_ = file_->ReadKeyBlock(b, &key_block_);
    if (!status_.ok()) {
      valid_ = false;
      return;
    }
    key_block_loaded_ = true;
    key_block_loaded_start_ = kbs[b].start_row;
    uint32_t rlo = 0, rhi = key_block_.row_count;
    while (rlo < rhi) {
      const uint32_t mid = rlo + (rhi - rlo) / 2;
      if (CompareKeySeq(key_block_.key_at(mid), key_block_.seqs[mid], key,
                        seq) < 0) {
        rlo = mid + 1;
      } else {
        rhi = mid;
      }
    }
    if (rlo < key_block_.row_count) {
      LoadBlocksForRow(kbs[b].start_row + rlo);
      return;
    }
  }
  valid_ = false;
}

void SctFile::Cursor::Next() {
  assert(valid_);
  LoadBlocksForRow(row_ + 1);
}

std::string_view SctFile::Cursor::key() const {
  const auto& meta = file_->key_blocks_[key_block_idx_];
  return key_block_.key_at(static_cast<uint32_t>(row_ - meta.start_row));
}

SequenceNumber SctFile::Cursor::seq() const {
  const auto& meta = file_->key_blocks_[key_block_idx_];
  return key_block_.seqs[row_ - meta.start_row];
}

EntryKind SctFile::Cursor::kind() const {
  const auto& meta = file_->key_blocks_[key_block_idx_];
  return key_block_.kind_at(static_cast<uint32_t>(row_ - meta.start_row));
}

uint32_t SctFile::Cursor::code() const {
  const auto& meta = file_->data_blocks_[data_block_idx_];
  return codes_[row_ - meta.start_row];
}

std::string_view SctFile::Cursor::value() const {
  const auto& meta = file_->data_blocks_[data_block_idx_];
  return value_block_.value_at(static_cast<uint32_t>(row_ - meta.start_row));
}

Status ReadAllRows(const std::shared_ptr<const SctFile>& file,
                   std::vector<EntryRecord>* out) {
  out->clear();
  out->reserve(file->descriptor().entry_count);
  SctFile::Cursor cur(file);
  for (cur.SeekToFirst(); cur.Valid(); cur.Next()) {
    EntryRecord rec;
    rec.user_key.assign(cur.key());
    rec.seq = cur.seq();
    rec.kind = cur.kind();
    if (file->mode() == StorageMode::kCoded) {
      rec.code = cur.code();
    } else if (rec.kind == EntryKind::kPut) {
      rec.value.assign(cur.value());
    }
    out->push_back(std::move(rec));
  }
  return cur.status();
}

}  // namespace sctdb
