// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/bench/runner.h"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "util/env.h"

namespace sctdb {
namespace bench {

namespace {

const char* OpName(OpType t) {
  switch (t) {
    case OpType::kInsert: return "insert";
    case OpType::kUpdate: return "update";
    case OpType::kPointRead: return "point_read";
    case OpType::kRangeRead: return "range_read";
    case OpType::kFilter: return "filter";
  }
  return "?";
}

struct Sample {
  uint64_t bucket;
  OpType op;
  uint32_t latency_us;
};

class MetricsSink {
 public:
  explicit MetricsSink(uint64_t bucket_ms) : bucket_ms_(bucket_ms) {}

  void Record(uint64_t run_start_us, uint64_t op_start_us, OpType op) {
    const uint64_t now = NowMicros();
    Sample s;
    s.bucket = (op_start_us - run_start_us) / (bucket_ms_ * 1000);
    s.op = op;
    const uint64_t lat = now - op_start_us;
    s.latency_us = lat > UINT32_MAX ? UINT32_MAX : static_cast<uint32_t>(lat);
    std::lock_guard<std::mutex> lock(mu_);
    samples_.push_back(s);
  }

  // bucket csv rows + per-op overall summaries
  void Emit(std::ostream& os, std::map<std::string, OpSummary>* per_op) const {
    os << "bucket_start_ms,op,count,p50_us,p99_us,throughput_ops_s\n";
    std::map<std::pair<uint64_t, int>, std::vector<uint32_t>> grouped;
    std::map<int, std::vector<uint32_t>> overall;
    for (const Sample& s : samples_) {
      grouped[{s.bucket, static_cast<int>(s.op)}].push_back(s.latency_us);
      overall[static_cast<int>(s.op)].push_back(s.latency_us);
    }
    auto pct = [](std::vector<uint32_t>& v, double p) -> uint64_t {
      if (v.empty()) return 0;
      const size_t idx = static_cast<size_t>(p * (v.size() - 1));
      std::nth_element(v.begin(), v.begin() + idx, v.end());
      return v[idx];
    };
    for (auto& [key, lats] : grouped) {
      const double secs = bucket_ms_ / 1000.0;
      os << key.first * bucket_ms_ << "," << OpName(static_cast<OpType>(key.second))
         << "," << lats.size() << "," << pct(lats, 0.50) << ","
         << pct(lats, 0.99) << ","
         << static_cast<uint64_t>(lats.size() / secs) << "\n";
    }
    for (auto& [op, lats] : overall) {
      OpSummary s;
      s.count = lats.size();
      s.p50_us = pct(lats, 0.50);
      s.p99_us = pct(lats, 0.99);
      (*per_op)[OpName(static_cast<OpType>(op))] = s;
    }
  }

  size_t total() const {
    std::lock_guard<std::mutex> lock(mu_);
    return samples_.size();
  }

 private:
  const uint64_t bucket_ms_;
  mutable std::mutex mu_;
  std::vector<Sample> samples_;
};

Status ExecuteRead(Engine* engine, const Op& op) {
  switch (op.type) {
    case OpType::kPointRead: {
      std::string value;
      bool found = false;
      return engine->Get(op.key, &value, &found);
    }
    case OpType::kRangeRead: {
      std::vector<std::pair<std::string, std::string>> rows;
      return engine->Scan(op.key, op.range_high, &rows);
    }
    case OpType::kFilter: {
      FilterResult result;
      return engine->Filter(op.predicate, &result);
    }
    default:
      return Status::InvalidArgument("not a read op");
  }
}

void WriteCsv(const BenchConfig& config, const MetricsSink& sink,
              BenchReport* report) {
  std::ostringstream os;
  sink.Emit(os, &report->per_op);
  os << "summary,all," << report->total_ops << ",,,"
     << (report->duration_us
             ? static_cast<uint64_t>(report->total_ops * 1e6 /
                                     report->duration_us)
             : 0)
     << "\n";
  for (const auto& [k, v] : report->engine_stats) {
    os << "# " << k << "," << v << "\n";
  }
  if (!config.csv_path.empty()) {
    std::ofstream f(config.csv_path);
    f << os.str();
  }
}

}  // namespace

Status RunLoad(const WorkloadSpec& spec, const BenchConfig& config,
               BenchReport* report) {
  Status s = spec.Validate();
  if (!s.ok()) return s;

  Options options = config.engine_options;
  options.key_size = spec.key_size;
  std::unique_ptr<Engine> engine;
  s = Engine::Open(options, config.dir, &engine);
  if (!s.ok()) return s;

  const CounterSnapshot before = CounterSnapshot::Take();
  MetricsSink sink(config.bucket_ms);
  WorkloadGenerator gen(spec);
  const uint64_t run_start = NowMicros();

  for (uint64_t i = 0; i < spec.n_entries; i++) {
    const uint64_t t = NowMicros();
    s = engine->Put(gen.KeyForIndex(i), gen.SampleValue());
    if (!s.ok()) return s;
    sink.Record(run_start, t, OpType::kInsert);
  }
  s = engine->CompactAll();
  if (!s.ok()) return s;

  report->total_ops = spec.n_entries;
  report->duration_us = NowMicros() - run_start;
  report->counters_delta = CounterSnapshot::Take().Delta(before);
  report->total_sct_bytes = engine->TotalSctBytes();
  report->compaction_wall_us = report->counters_delta.compaction_wall_us;
  report->engine_stats = engine->GetStats();
  WriteCsv(config, sink, report);
  return Status::OK();
}

Status RunMixed(const WorkloadSpec& spec, const BenchConfig& config,
                uint64_t op_count, BenchReport* report) {
  Status s = spec.Validate();
  if (!s.ok()) return s;

  Options options = config.engine_options;
  options.key_size = spec.key_size;
  std::unique_ptr<Engine> engine;
  s = Engine::Open(options, config.dir, &engine);
  if (!s.ok()) return s;

  const CounterSnapshot before = CounterSnapshot::Take();
  MetricsSink sink(config.bucket_ms);
  WorkloadGenerator gen(spec);
  gen.AssumeInserted(spec.n_entries);
  const uint64_t run_start = NowMicros();

  // Writes stay on this thread (single-writer contract); reads fan out to
  // front worker threads when more than one is configured.
  const uint32_t readers =
      config.front_threads > 1 ? config.front_threads - 1 : 0;
  std::vector<std::thread> pool;
  std::deque<Op> queue;
  std::mutex qmu;
  std::condition_variable qcv;
  std::atomic<bool> done{false};
  std::atomic<bool> failed{false};

  for (uint32_t r = 0; r < readers; r++) {
    pool.emplace_back([&] {
      for (;;) {
        Op op;
        {
          std::unique_lock<std::mutex> lock(qmu);
          qcv.wait(lock, [&] { return done.load() || !queue.empty(); });
          if (queue.empty()) return;
          op = std::move(queue.front());
          queue.pop_front();
        }
        qcv.notify_all();
        const uint64_t t = NowMicros();
        if (!ExecuteRead(engine.get(), op).ok()) failed.store(true);
        sink.Record(run_start, t, op.type);
      }
    });
  }

  for (uint64_t i = 0; i < op_count && !failed.load(); i++) {
    Op op = gen.Next();
    const bool is_write =
        op.type == OpType::kInsert || op.type == OpType::kUpdate;
    if (is_write) {
      const uint64_t t = NowMicros();
      s = engine->Put(op.key, op.value);
      if (!s.ok()) break;
      sink.Record(run_start, t, op.type);
    } else if (readers == 0) {
      const uint64_t t = NowMicros();
      s = ExecuteRead(engine.get(), op);
      if (!s.ok()) break;
      sink.Record(run_start, t, op.type);
    } else {
      {
        std::unique_lock<std::mutex> lock(qmu);
        qcv.wait(lock, [&] { return queue.size() < 1024; });
        queue.push_back(std::move(op));
      }
      qcv.notify_all();
    }
  }
  done.store(true);
  qcv.notify_all();
  for (auto& t : pool) t.join();
  if (s.ok() && failed.load()) s = Status::IoError("read op failed");
  if (!s.ok()) return s;

  s = engine->WaitForQuiescence();
  if (!s.ok()) return s;

  report->total_ops = sink.total();
  report->duration_us = NowMicros() - run_start;
  report->counters_delta = CounterSnapshot::Take().Delta(before);
  report->total_sct_bytes = engine->TotalSctBytes();
  report->compaction_wall_us = report->counters_delta.compaction_wall_us;
  report->engine_stats = engine->GetStats();
  WriteCsv(config, sink, report);
  return Status::OK();
}

std::string ReportToString(const BenchReport& report) {
  std::ostringstream os;
  os << "ops " << report.total_ops << " in " << report.duration_us / 1000
     << " ms";
  if (report.duration_us > 0) {
    os << " (" << static_cast<uint64_t>(report.total_ops * 1e6 /
                                        report.duration_us)
       << " ops/s)";
  }
  os << "\n";
  for (const auto& [op, s] : report.per_op) {
    os << "  " << op << ": count " << s.count << " p50 " << s.p50_us
       << "us p99 " << s.p99_us << "us\n";
  }
  os << "  sct bytes " << report.total_sct_bytes << ", compaction wall "
     << report.compaction_wall_us / 1000 << " ms, compaction written "
     << report.counters_delta.compaction_bytes_written << " bytes, flush written "
     << report.counters_delta.flush_bytes_written << " bytes\n";
  return os.str();
}

}  // namespace bench
}  // namespace sctdb
