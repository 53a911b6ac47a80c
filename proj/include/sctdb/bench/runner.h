// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Drives the engine with a generated workload and reports per-bucket
// latency percentiles, throughput and engine counters as CSV.

#ifndef SCTDB_BENCH_RUNNER_H_
#define SCTDB_BENCH_RUNNER_H_

#include <map>
#include <string>
#include <vector>

#include "sctdb/bench/workload.h"
#include "sctdb/engine.h"
#include "sctdb/options.h"
#include "sctdb/stats.h"

namespace sctdb {
namespace bench {

struct BenchConfig {
  Options engine_options;
  std::string dir;
  uint32_t front_threads = 1;  // 1 = fully deterministic single-thread mode
  uint64_t bucket_ms = 1000;
  std::string csv_path;  // empty: skip CSV
};

struct OpSummary {
  uint64_t count = 0;
  uint64_t p50_us = 0;
  uint64_t p99_us = 0;
};

struct BenchReport {
  uint64_t total_ops = 0;
  uint64_t duration_us = 0;
  std::map<std::string, OpSummary> per_op;
  CounterSnapshot counters_delta;
  uint64_t total_sct_bytes = 0;
  uint64_t compaction_wall_us = 0;
  std::map<std::string, uint64_t> engine_stats;
};

// Inserts spec.n_entries rows, flushes, and compacts to quiescence.
Status RunLoad(const WorkloadSpec& spec, const BenchConfig& config,
               BenchReport* report);

// Executes op_count mixed operations (spec mix) against an engine already
// loaded with spec.n_entries rows under the same seed.
Status RunMixed(const WorkloadSpec& spec, const BenchConfig& config,
                uint64_t op_count, BenchReport* report);

std::string ReportToString(const BenchReport& report);

}  // namespace bench
}  // namespace sctdb

#endif  // SCTDB_BENCH_RUNNER_H_
