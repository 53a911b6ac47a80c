// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Deterministic workload generation: a seeded stream of inserts, updates,
// reads and value filters over a sortable pool of fixed-size values with
// configurable cardinality and skew.

#ifndef SCTDB_BENCH_WORKLOAD_H_
#define SCTDB_BENCH_WORKLOAD_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sctdb/predicate.h"
#include "sctdb/status.h"

namespace sctdb {
namespace bench {

struct WorkloadSpec {
  uint64_t n_entries = 100000;
  size_t key_size = 16;
  size_t value_size = 64;      // 32..1024 in practice; >= 24 required
  double ndv_fraction = 0.01;  // distinct values / n_entries, in (0, 1]
  double zipf_s = 0.0;         // 0 = uniform; p(k) ~ 1/k^s otherwise

  // Operation mix; fractions must sum to 1.
  double insert_frac = 1.0;
  double update_frac = 0.0;
  double point_read_frac = 0.0;
  double range_read_frac = 0.0;
  double filter_frac = 0.0;

  uint64_t range_span = 500;          // expected keys per range read
  double filter_selectivity = 0.01;   // target r
  uint64_t seed = 42;

  Status Validate() const;
};

enum class OpType { kInsert, kUpdate, kPointRead, kRangeRead, kFilter };

struct Op {
  OpType type = OpType::kInsert;
  std::string key;
  std::string value;
  std::string range_high;
  ValuePredicate predicate;
};

class WorkloadGenerator {
 public:
  explicit WorkloadGenerator(const WorkloadSpec& spec);

  // Deterministic stream; identical spec + seed give identical ops.
  Op Next();

  uint64_t inserted() const { return inserted_; }
  // For a run phase over a pre-loaded engine: treat keys 0..n-1 as present.
  void AssumeInserted(uint64_t n) { inserted_ = n; }
  uint64_t ndv() const { return static_cast<uint64_t>(pool_.size()); }
  const std::vector<std::string>& value_pool() const { return pool_; }

  // Distinct fixed-width key for insert index i.
  std::string KeyForIndex(uint64_t i) const;

  // Draws a frequency rank in [0, ndv) under the configured distribution.
  // Rank 0 is the most frequent. Exposed for distribution tests.
  uint64_t SampleRank();

  // Value drawn for a fresh write.
  const std::string& SampleValue();

  // A range predicate over the sorted pool sized to hit the target
  // selectivity.
  ValuePredicate SampleFilterPredicate();

 private:
  const WorkloadSpec spec_;
  std::mt19937_64 rng_;
  std::vector<std::string> pool_;       // sorted ascending
  std::vector<uint32_t> rank_to_pool_;  // frequency rank -> pool index
  std::vector<double> zipf_cdf_;        // empty when uniform
  std::vector<double> pool_mass_prefix_;  // expected mass by value order
  uint64_t inserted_ = 0;
};

}  // namespace bench
}  // namespace sctdb

#endif  // SCTDB_BENCH_WORKLOAD_H_
