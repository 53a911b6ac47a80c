// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/dictionary.h"

#include <algorithm>
#include <cassert>
#include <map>

#include "sctdb/stats.h"

namespace sctdb {

namespace {

uint32_t CeilLog2(uint64_t x) {
  uint32_t bits = 0;
  uint64_t v = 1;
  while (v < x) {
    v <<= 1;
    bits++;
  }
  return bits;
}

// Comparator that charges every comparison to a counter.
struct CountingLess {
  std::atomic<uint64_t>* counter;
  bool operator()(std::string_view a, std::string_view b) const {
    counter->fetch_add(1, std::memory_order_relaxed);
    return a < b;
  }
};

}  // namespace

Dictionary Dictionary::Build(std::vector<std::string> values) {
  CountingLess less{&Counters::Get().dict_build_cmps};
  std::sort(values.begin(), values.end(),
            [&less](const std::string& a, const std::string& b) {
              return less(a, b);
            });
  values.erase(std::unique(values.begin(), values.end()), values.end());

  Dictionary d;
  d.m_ = static_cast<uint32_t>(values.size());
  d.offsets_.reserve(values.size() + 1);
  d.offsets_.push_back(0);
  size_t total = 0;
  for (const auto& v : values) total += v.size();
  d.arena_.reserve(total);
  for (const auto& v : values) {
    d.arena_.append(v);
    d.offsets_.push_back(static_cast<uint32_t>(d.arena_.size()));
  }
  return d;
}

Dictionary Dictionary::FromSortedArena(std::string arena,
                                       std::vector<uint32_t> offsets) {
  assert(!offsets.empty());
  Dictionary d;
  d.m_ = static_cast<uint32_t>(offsets.size() - 1);
  d.arena_ = std::move(arena);
  d.offsets_ = std::move(offsets);
  return d;
}

uint32_t Dictionary::code_width_bits() const {
  return CeilLog2(std::max<uint64_t>(m_, 2));
}

uint32_t Dictionary::packed_width_bits() const {
  return CeilLog2(static_cast<uint64_t>(m_) + 2);
}

uint32_t Dictionary::LowerBound(std::string_view v) const {
  uint32_t lo = 0;
  uint32_t hi = m_;
  while (lo < hi) {
    const uint32_t mid = lo + (hi - lo) / 2;
    CounterAdd(Counters::Get().dict_encode_cmps, 1);
    if (ValueAt(mid) < v) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::optional<uint32_t> Dictionary::Encode(std::string_view v) const {
  const uint32_t i = LowerBound(v);
  if (i < m_ && ValueAt(i) == v) return i;
  return std::nullopt;
}

std::string_view Dictionary::Decode(uint32_t code) const {
  assert(code < m_);
  CounterAdd(Counters::Get().dict_decodes, 1);
  return ValueAt(code);
}

Status Dictionary::DecodeChecked(uint32_t code, std::string_view* out) const {
  if (code >= m_) return Status::CodeOutOfRange();
  *out = Decode(code);
  return Status::OK();
}

Status Dictionary::CodeRange(const ValuePredicate& p, uint32_t* lo,
                             uint32_t* hi) const {
  Status s = p.Validate();
  if (!s.ok()) return s;
  switch (p.kind) {
    case ValuePredicate::Kind::kEquality: {
      auto c = Encode(p.a);
      if (c.has_value()) {
        *lo = *c;
        *hi = *c + 1;
      } else {
        *lo = *hi = 0;
      }
      return Status::OK();
    }
    case ValuePredicate::Kind::kPrefix: {
      *lo = LowerBound(p.a);
      // Successor of the prefix: increment the last non-0xff byte and
      // truncate; a prefix of only 0xff bytes has no successor, so the
      // interval runs to m. The empty prefix matches everything.
      std::string succ = p.a;
      while (!succ.empty() &&
             static_cast<unsigned char>(succ.back()) == 0xff) {
        succ.pop_back();
      }
      if (succ.empty()) {
        *hi = m_;
        if (p.a.empty()) *lo = 0;
      } else {
        succ.back() = static_cast<char>(
            static_cast<unsigned char>(succ.back()) + 1);
        *hi = LowerBound(succ);
      }
      return Status::OK();
    }
    case ValuePredicate::Kind::kRange: {
      *lo = LowerBound(p.a);
      *hi = LowerBound(p.b);
      if (*hi < *lo) *hi = *lo;
      return Status::OK();
    }
  }
  return Status::InvalidPredicate("unknown predicate kind");
}

Status MergeDictionaries(const std::vector<DictionarySource>& sources,
                         DictionaryMergeResult* out) {
  for (const auto& src : sources) {
    if (src.dict == nullptr || src.used.size() != src.dict->size()) {
      return Status::InvalidCode("used-code set does not match dictionary");
    }
  }

  const uint64_t cmps_before =
      Counters::Get().dict_merge_cmps.load(std::memory_order_relaxed);

  // Reverse index: distinct value -> {(old code, source)}. An ordered map
  // keyed by views into the source arenas; one tree insertion per distinct
  // (code, source) pair, so duplicate row values cost nothing here.
  CountingLess less{&Counters::Get().dict_merge_cmps};
  std::map<std::string_view, std::vector<std::pair<uint32_t, uint32_t>>,
           CountingLess>
      reverse(less);
  for (uint32_t si = 0; si < sources.size(); si++) {
    const auto& src = sources[si];
    for (uint32_t code = 0; code < src.used.size(); code++) {
      if (!src.used[code]) continue;
      reverse[src.dict->ValueAt(code)].emplace_back(code, si);
    }
  }

  // The map's key order is the merged dictionary's code order.
  std::string arena;
  std::vector<uint32_t> offsets;
  offsets.reserve(reverse.size() + 1);
  offsets.push_back(0);
  out->reverse_index.clear();
  out->reverse_index.reserve(reverse.size());

  CodeRemapTable remap(sources.size());
  for (uint32_t si = 0; si < sources.size(); si++) {
    remap.Init(si, sources[si].used.size());
  }

  uint32_t next_code = 0;
  for (auto& [value, origins] : reverse) {
    arena.append(value);
    offsets.push_back(static_cast<uint32_t>(arena.size()));
    for (auto [old_code, si] : origins) {
      remap.Set(si, old_code, next_code);
    }
    out->reverse_index.push_back({value, std::move(origins)});
    next_code++;
  }

  out->merged = Dictionary::FromSortedArena(std::move(arena),
                                            std::move(offsets));
  out->remap = std::move(remap);
  out->string_comparisons =
      Counters::Get().dict_merge_cmps.load(std::memory_order_relaxed) -
      cmps_before;
  // reverse_index values still point into the source arenas; callers must
  // keep sources alive while they use it.
  return Status::OK();
}

std::string ValuePredicate::ToString() const {
  switch (kind) {
    case Kind::kEquality:
      return "eq(" + a + ")";
    case Kind::kPrefix:
      return "prefix(" + a + ")";
    case Kind::kRange:
      return "range(" + a + ", " + b + ")";
  }
  return "?";
}

}  // namespace sctdb
