// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/bench/workload.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>

namespace sctdb {
namespace bench {

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void AppendHex64(uint64_t v, std::string* out) {
  static const char* kDigits = "0123456789abcdef";
  for (int shift = 60; shift >= 0; shift -= 4) {
    out->push_back(kDigits[(v >> shift) & 0xf]);
  }
}

}  // namespace

Status WorkloadSpec::Validate() const {
  if (n_entries == 0) return Status::InvalidSpec("n_entries must be > 0");
  if (key_size != 16) return Status::InvalidSpec("key_size must be 16");
  if (value_size < 24 || value_size > 4080) {
    return Status::InvalidSpec("value_size out of range");
  }
  if (ndv_fraction <= 0 || ndv_fraction > 1) {
    return Status::InvalidSpec("ndv_fraction must be in (0, 1]");
  }
  if (zipf_s < 0) return Status::InvalidSpec("zipf s must be >= 0");
  const double mix = insert_frac + update_frac + point_read_frac +
                     range_read_frac + filter_frac;
  if (std::fabs(mix - 1.0) > 1e-6) {
    return Status::InvalidSpec("op mix fractions must sum to 1");
  }
  if (filter_selectivity <= 0 || filter_selectivity > 1) {
    return Status::InvalidSpec("filter selectivity must be in (0, 1]");
  }
  return Status::OK();
}

WorkloadGenerator::WorkloadGenerator(const WorkloadSpec& spec)
    : spec_(spec), rng_(spec.seed) {
  const uint64_t ndv = std::max<uint64_t>(
      1, static_cast<uint64_t>(std::llround(spec.ndv_fraction *
                                            static_cast<double>(spec.n_entries))));

  // Values sort by a random 8-byte prefix; a zero-padded rank suffix keeps
  // them distinct and exactly value_size bytes long.
  std::vector<std::string> prefixes(ndv);
  for (auto& p : prefixes) {
    p.resize(8);
    const uint64_t r = rng_();
    for (int i = 0; i < 8; i++) {
      p[i] = static_cast<char>('a' + ((r >> (i * 8)) % 26));
    }
  }
  std::sort(prefixes.begin(), prefixes.end());

  pool_.resize(ndv);
  for (uint64_t i = 0; i < ndv; i++) {
    std::string v = prefixes[i];
    char rank[24];
    std::snprintf(rank, sizeof(rank), "%016llu",
                  static_cast<unsigned long long>(i));
    v.resize(spec.value_size - 16, '0');
    v.append(rank, 16);
    pool_[i] = std::move(v);
  }

  // Frequency ranks land on random pool positions so skew is independent
  // of value order.
  rank_to_pool_.resize(ndv);
  for (uint64_t i = 0; i < ndv; i++) rank_to_pool_[i] = static_cast<uint32_t>(i);
  std::shuffle(rank_to_pool_.begin(), rank_to_pool_.end(), rng_);

  if (spec.zipf_s > 0) {
    zipf_cdf_.resize(ndv);
    double total = 0;
    for (uint64_t k = 1; k <= ndv; k++) {
      total += 1.0 / std::pow(static_cast<double>(k), spec.zipf_s);
      zipf_cdf_[k - 1] = total;
    }
    for (auto& c : zipf_cdf_) c /= total;
  }

  // Expected write mass of each pool value (value order, not rank order),
  // prefix-summed. Filter windows are sized in mass so they hit the
  // selectivity target under skew as well as under uniform draws.
  pool_mass_prefix_.resize(ndv + 1);
  pool_mass_prefix_[0] = 0;
  std::vector<double> mass(ndv);
  for (uint64_t rank = 0; rank < ndv; rank++) {
    const double p =
        zipf_cdf_.empty()
            ? 1.0 / static_cast<double>(ndv)
            : zipf_cdf_[rank] - (rank == 0 ? 0.0 : zipf_cdf_[rank - 1]);
    mass[rank_to_pool_[rank]] = p;
  }
  for (uint64_t i = 0; i < ndv; i++) {
    pool_mass_prefix_[i + 1] = pool_mass_prefix_[i] + mass[i];
  }
}

std::string WorkloadGenerator::KeyForIndex(uint64_t i) const {
  std::string key;
  key.reserve(spec_.key_size);
  AppendHex64(SplitMix64(i), &key);
  return key;
}

uint64_t WorkloadGenerator::SampleRank() {
  if (zipf_cdf_.empty()) {
    return rng_() % pool_.size();
  }
  const double u =
      static_cast<double>(rng_()) / static_cast<double>(UINT64_MAX);
  const auto it = std::lower_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u);
  return static_cast<uint64_t>(it - zipf_cdf_.begin());
}

const std::string& WorkloadGenerator::SampleValue() {
  return pool_[rank_to_pool_[SampleRank()]];
}

ValuePredicate WorkloadGenerator::SampleFilterPredicate() {
  const uint64_t ndv = pool_.size();
  const double target = spec_.filter_selectivity;

  // Pick a window of consecutive pool values whose expected write mass is
  // close to the target. Under heavy skew a window holding a hot value
  // overshoots by orders of magnitude, so resample around it; the best
  // candidate wins when nothing lands inside the tolerance.
  uint64_t best_start = 0, best_end = std::max<uint64_t>(1, ndv);
  double best_err = 1e9;
  for (int attempt = 0; attempt < 64; attempt++) {
    const uint64_t start = rng_() % ndv;
    const double want = pool_mass_prefix_[start] + target;
    uint64_t end = static_cast<uint64_t>(
        std::lower_bound(pool_mass_prefix_.begin() + start + 1,
                         pool_mass_prefix_.end(), want) -
        pool_mass_prefix_.begin());
    if (end > ndv) end = ndv;  // ran past the pool: window ends at m
    if (end == start) end = start + 1;
    const double mass = pool_mass_prefix_[end] - pool_mass_prefix_[start];
    const double err = std::fabs(mass - target);
    if (err < best_err) {
      best_err = err;
      best_start = start;
      best_end = end;
    }
    if (mass >= 0.7 * target && mass <= 1.3 * target) break;
  }

  std::string high;
  if (best_end < ndv) {
    high = pool_[best_end];
  } else {
    high = pool_.back();
    high.push_back('\xff');  // past the largest value
  }
  return ValuePredicate::Range(pool_[best_start], std::move(high));
}

Op WorkloadGenerator::Next() {
  Op op;
  const double pick =
      static_cast<double>(rng_()) / static_cast<double>(UINT64_MAX);
  double acc = spec_.insert_frac;
  // Until something exists, every op is an insert.
  if (inserted_ == 0 || pick < acc) {
    op.type = OpType::kInsert;
    op.key = KeyForIndex(inserted_++);
    op.value = SampleValue();
    return op;
  }
  acc += spec_.update_frac;
  if (pick < acc) {
    op.type = OpType::kUpdate;
    op.key = KeyForIndex(rng_() % inserted_);
    op.value = SampleValue();
    return op;
  }
  acc += spec_.point_read_frac;
  if (pick < acc) {
    op.type = OpType::kPointRead;
    op.key = KeyForIndex(rng_() % inserted_);
    return op;
  }
  acc += spec_.range_read_frac;
  if (pick < acc) {
    op.type = OpType::kRangeRead;
    const uint64_t low = SplitMix64(rng_() % inserted_);
    // Stride sized so the span covers ~range_span keys of a uniformly
    // hashed keyspace.
    const uint64_t per_key = UINT64_MAX / std::max<uint64_t>(1, inserted_);
    const uint64_t stride = per_key * spec_.range_span;
    const uint64_t high = low > UINT64_MAX - stride ? UINT64_MAX : low + stride;
    op.key.clear();
    AppendHex64(low, &op.key);
    op.range_high.clear();
    AppendHex64(high, &op.range_high);
    return op;
  }
  op.type = OpType::kFilter;
  op.predicate = SampleFilterPredicate();
  return op;
}

}  // namespace bench
}  // namespace sctdb
