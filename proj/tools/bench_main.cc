// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// sctdb_bench: load and run workloads against the engine, or print the
// analytical cost model for a parameter set.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sctdb/bench/runner.h"
#include "sctdb/bench/workload.h"
#include "sctdb/costmodel.h"
#include "sctdb/options.h"

namespace {

using sctdb::Options;
using sctdb::Status;
using sctdb::StorageMode;
using sctdb::bench::BenchConfig;
using sctdb::bench::BenchReport;
using sctdb::bench::WorkloadSpec;

struct CommonFlags {
  std::string dir = "/tmp/sctdb-bench";
  uint64_t entries = 100000;
  size_t value_size = 64;
  double ndv = 0.01;
  std::string dist = "uniform";
  std::string mix = "1:0:0:0:0";
  double selectivity = 0.01;
  uint64_t span = 500;
  uint64_t seed = 42;
  uint64_t file_size = 32ull << 20;
  uint32_t ratio = 10;
  uint64_t memtable = 8ull << 20;
  std::string mode = "opd";
  std::string csv;
  uint32_t threads = 1;
  uint64_t ops = 0;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags* f) {
  cmd->add_option("--dir", f->dir, "engine directory");
  cmd->add_option("--entries", f->entries, "number of loaded key-value pairs");
  cmd->add_option("--value-size", f->value_size, "value size in bytes");
  cmd->add_option("--ndv", f->ndv, "distinct values / entries, in (0,1]");
  cmd->add_option("--dist", f->dist, "uniform or zipf:<s>");
  cmd->add_option("--mix", f->mix,
                  "insert:update:point:range:filter fractions");
  cmd->add_option("--selectivity", f->selectivity, "filter selectivity r");
  cmd->add_option("--span", f->span, "keys per range read");
  cmd->add_option("--seed", f->seed, "rng seed");
  cmd->add_option("--file-size", f->file_size, "table file size F in bytes");
  cmd->add_option("--ratio", f->ratio, "level size ratio T");
  cmd->add_option("--memtable-size", f->memtable, "memtable capacity bytes");
  cmd->add_option("--mode", f->mode, "opd (coded) or naive (plain layout)");
  cmd->add_option("--csv", f->csv, "write metrics CSV to this path");
  cmd->add_option("--threads", f->threads, "front worker threads");
  cmd->add_option("--ops", f->ops, "operation count for run");
}

bool BuildSpecAndConfig(const CommonFlags& f, WorkloadSpec* spec,
                        BenchConfig* config) {
  spec->n_entries = f.entries;
  spec->value_size = f.value_size;
  spec->ndv_fraction = f.ndv;
  spec->seed = f.seed;
  spec->filter_selectivity = f.selectivity;
  spec->range_span = f.span;

  if (f.dist == "uniform") {
    spec->zipf_s = 0;
  } else if (f.dist.rfind("zipf:", 0) == 0) {
    spec->zipf_s = std::stod(f.dist.substr(5));
  } else {
    std::cerr << "bad --dist: " << f.dist << "\n";
    return false;
  }

  double mix[5] = {0, 0, 0, 0, 0};
  if (std::sscanf(f.mix.c_str(), "%lf:%lf:%lf:%lf:%lf", &mix[0], &mix[1],
                  &mix[2], &mix[3], &mix[4]) != 5) {
    std::cerr << "bad --mix: " << f.mix << "\n";
    return false;
  }
  spec->insert_frac = mix[0];
  spec->update_frac = mix[1];
  spec->point_read_frac = mix[2];
  spec->range_read_frac = mix[3];
  spec->filter_frac = mix[4];

  Options options;
  options.file_size = f.file_size;
  options.level_size_ratio = f.ratio;
  options.memtable_capacity = f.memtable;
  options.background_jobs = f.threads > 1;
  if (f.mode == "opd") {
    options.mode = StorageMode::kCoded;
  } else if (f.mode == "naive") {
    options.mode = StorageMode::kPlain;
  } else {
    std::cerr << "bad --mode: " << f.mode << "\n";
    return false;
  }
  config->engine_options = options;
  config->dir = f.dir;
  config->front_threads = f.threads;
  config->csv_path = f.csv;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sctdb benchmark harness"};
  app.require_subcommand(1);

  CommonFlags load_flags;
  CLI::App* load = app.add_subcommand("load", "bulk-load entries and compact");
  AddCommonFlags(load, &load_flags);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run a mixed workload");
  AddCommonFlags(run, &run_flags);

  sctdb::costmodel::CostParams params;
  CLI::App* cost = app.add_subcommand("costmodel", "print the cost model");
  cost->add_option("--entries", params.entries, "N");
  cost->add_option("--file-size", params.file_size, "F bytes");
  cost->add_option("--ratio", params.size_ratio, "T");
  cost->add_option("--ndv-per-file", params.ndv_per_file, "D per file");
  cost->add_option("--key-size", params.key_bytes, "S_K");
  cost->add_option("--value-size", params.value_bytes, "S_V");
  cost->add_option("--code-size", params.code_bytes, "S_O");
  cost->add_option("--ck", params.key_merge_cost, "C_K instructions/byte");
  cost->add_option("--cc", params.copy_cost, "C_C");
  cost->add_option("--ce", params.heavy_compress_cost, "C_E");
  cost->add_option("--cd", params.heavy_decompress_cost, "C_D");
  cost->add_option("--cs", params.string_compare_cost, "C_S");
  cost->add_option("--selectivity", params.selectivity, "r");
  cost->add_option("--simd-bytes", params.simd_bytes, "S_I");
  cost->add_option("--heavy-ratio", params.heavy_ratio,
                   "heavy compression size factor");

  CLI11_PARSE(app, argc, argv);

  if (load->parsed()) {
    WorkloadSpec spec;
    BenchConfig config;
    if (!BuildSpecAndConfig(load_flags, &spec, &config)) return 2;
    spec.insert_frac = 1;
    spec.update_frac = spec.point_read_frac = spec.range_read_frac =
        spec.filter_frac = 0;
    BenchReport report;
    Status s = sctdb::bench::RunLoad(spec, config, &report);
    if (!s.ok()) {
      std::cerr << "load failed: " << s.ToString() << "\n";
      return 1;
    }
    std::cout << sctdb::bench::ReportToString(report);
    return 0;
  }

  if (run->parsed()) {
    WorkloadSpec spec;
    BenchConfig config;
    if (!BuildSpecAndConfig(run_flags, &spec, &config)) return 2;
    const uint64_t ops = run_flags.ops == 0 ? spec.n_entries : run_flags.ops;
    BenchReport report;
    Status s = sctdb::bench::RunMixed(spec, config, ops, &report);
    if (!s.ok()) {
      std::cerr << "run failed: " << s.ToString() << "\n";
      return 1;
    }
    std::cout << sctdb::bench::ReportToString(report);
    return 0;
  }

  if (cost->parsed()) {
    if (!params.Valid()) {
      std::cerr << "invalid cost parameters\n";
      return 2;
    }
    std::cout << sctdb::costmodel::Report(params);
    return 0;
  }
  return 0;
}
