// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Order-preserving dictionary: the bijection between the distinct string
// values of one table file and dense integer codes 0..m-1, with
//   v < w  <=>  Encode(v) < Encode(w).
// Immutable after construction and freely shared across threads.

#ifndef SCTDB_DICTIONARY_H_
#define SCTDB_DICTIONARY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sctdb/predicate.h"
#include "sctdb/status.h"

namespace sctdb {

class Dictionary {
 public:
  // Empty domain: m == 0. Legal; produced by tombstone-only flushes.
  Dictionary() = default;

  // Builds over the distinct values of the input (duplicates collapse).
  // O(D log D) string comparisons, counted in dict_build_cmps.
  static Dictionary Build(std::vector<std::string> values);

  // Adopts an already strictly sorted value arena (deserialization path).
  // offsets has m+1 entries; value i is arena[offsets[i], offsets[i+1]).
  static Dictionary FromSortedArena(std::string arena,
                                    std::vector<uint32_t> offsets);

  uint32_t size() const { return m_; }

  // ceil(log2(max(m, 2))): bits needed for the code domain itself, with a
  // floor of one bit so packed columns are never zero-width.
  uint32_t code_width_bits() const;

  // On-disk packed width: ceil(log2(m + 2)). One wider code point is
  // reserved so the all-ones tombstone sentinel never collides with a
  // real code.
  uint32_t packed_width_bits() const;

  // All-ones pattern at packed_width_bits; marks tombstone rows in code
  // columns and is never decoded.
  uint32_t tombstone_sentinel() const {
    return (packed_width_bits() >= 32)
               ? ~0u
               : ((1u << packed_width_bits()) - 1);
  }

  // Binary search, O(log m) string comparisons. nullopt when v is not in
  // the domain (fast-negative for equality filters).
  std::optional<uint32_t> Encode(std::string_view v) const;

  // O(1). Counted in dict_decodes; callers on the compacted-data path must
  // never reach this for surviving rows.
  std::string_view Decode(uint32_t code) const;

  Status DecodeChecked(uint32_t code, std::string_view* out) const;

  // Uncounted accessors for serialization and dictionary-to-dictionary
  // work, where no row value is being materialized.
  std::string_view ValueAt(uint32_t code) const {
    return std::string_view(arena_).substr(offsets_[code],
                                           offsets_[code + 1] - offsets_[code]);
  }
  uint32_t ValueSize(uint32_t code) const {
    return offsets_[code + 1] - offsets_[code];
  }
  const std::string& arena() const { return arena_; }
  const std::vector<uint32_t>& offsets() const { return offsets_; }
  uint64_t total_value_bytes() const { return arena_.size(); }

  // Index of the first value >= v.
  uint32_t LowerBound(std::string_view v) const;

  // Maps p to the half-open code interval [lo, hi) such that a code is
  // inside iff its value satisfies p. Equality uses Encode; prefix uses
  // the successor of the prefix (0xff bytes carry; an all-0xff prefix
  // yields hi = m); range [a, b) maps to [LowerBound(a), LowerBound(b)).
  Status CodeRange(const ValuePredicate& p, uint32_t* lo, uint32_t* hi) const;

 private:
  uint32_t m_ = 0;
  std::string arena_;               // concatenated values, sorted ascending
  std::vector<uint32_t> offsets_;   // m+1 entries
};

// One merge input: a source table's dictionary plus the set of codes that
// actually appear in the merged subsequence. Codes not marked used take no
// part in the merge and get no slot in the output.
struct DictionarySource {
  uint64_t sct_id = 0;
  const Dictionary* dict = nullptr;
  std::vector<bool> used;  // size dict->size()
};

// value -> every (old code, source index) that encodes it. Sources index
// into the DictionarySource span, not sct ids.
struct ReverseIndexEntry {
  std::string_view value;
  std::vector<std::pair<uint32_t, uint32_t>> origins;  // (old_code, source)
};

// O(1) remapping (old code, source index) -> new code.
class CodeRemapTable {
 public:
  static constexpr uint32_t kUnmapped = ~0u;

  explicit CodeRemapTable(size_t n_sources) : per_source_(n_sources) {}

  uint32_t Remap(uint32_t source_index, uint32_t old_code) const {
    return per_source_[source_index][old_code];
  }
  bool Has(uint32_t source_index, uint32_t old_code) const {
    const auto& v = per_source_[source_index];
    return old_code < v.size() && v[old_code] != kUnmapped;
  }

  void Init(uint32_t source_index, size_t codes) {
    per_source_[source_index].assign(codes, kUnmapped);
  }
  void Set(uint32_t source_index, uint32_t old_code, uint32_t new_code) {
    per_source_[source_index][old_code] = new_code;
  }

 private:
  std::vector<std::vector<uint32_t>> per_source_;
};

struct DictionaryMergeResult {
  Dictionary merged;
  CodeRemapTable remap{0};
  std::vector<ReverseIndexEntry> reverse_index;  // sorted by value
  uint64_t string_comparisons = 0;
};

// Rebuilds one order-preserving dictionary over the union of the used
// values of all sources and the remap table that rewrites old codes in
// O(1). Distinct values are deduplicated through an ordered reverse index
// so each (code, source) costs one tree insertion: O(sum D_i log D_i)
// string comparisons overall, counted in dict_merge_cmps.
Status MergeDictionaries(const std::vector<DictionarySource>& sources,
                         DictionaryMergeResult* out);

}  // namespace sctdb

#endif  // SCTDB_DICTIONARY_H_
