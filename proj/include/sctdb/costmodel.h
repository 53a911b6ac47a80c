// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Closed-form cost model for compaction and filter work under three value
// schemes: no compression, heavy whole-file compression, and
// order-preserving dictionary codes. Pure functions; logs are base 2.

#ifndef SCTDB_COSTMODEL_H_
#define SCTDB_COSTMODEL_H_

#include <cstdint>
#include <string>

namespace sctdb {
namespace costmodel {

struct CostParams {
  double entries = 16777216;          // N: total inserted key-value pairs
  double file_size = 32e6;            // F: bytes per table file
  double size_ratio = 10;             // T: level size ratio
  double ndv_per_file = 1e5;          // D_i, uniform across files
  double key_bytes = 16;              // S_K
  double value_bytes = 64;            // S_V
  double code_bytes = 4;              // S_O: serialized code width
  double key_merge_cost = 1;          // C_K, instructions per byte
  double copy_cost = 0.3;             // C_C
  double heavy_compress_cost = 50;    // C_E
  double heavy_decompress_cost = 20;  // C_D
  double string_compare_cost = 1;     // C_S
  double selectivity = 0.01;          // r in (0, 1]
  double simd_bytes = 512;            // S_I: bytes per vector instruction
  double heavy_ratio = 2.0;           // heavy compression size factor

  bool Valid() const {
    return entries > 0 && file_size > 0 && size_ratio > 1 &&
           ndv_per_file >= 1 && key_bytes > 0 && value_bytes > 0 &&
           code_bytes > 0 && code_bytes <= value_bytes && selectivity > 0 &&
           selectivity <= 1 && simd_bytes > 0 && heavy_ratio >= 1;
  }
};

enum class Scheme { kPlain, kHeavy, kOpd };

// Level of the i-th file (1-based) in a leveled tree with ratio T:
// the smallest l with T^l >= i*(T-1) + 1.
uint32_t LevelOfFile(uint64_t i, double ratio);

// File count under each scheme, derived from the per-entry on-disk size.
uint64_t FileCount(const CostParams& p, Scheme scheme);

// Total compaction I/O in bytes: sum over files of F * l_i * T.
double CompactionIo(const CostParams& p, uint64_t file_count);

// Total compaction CPU in instructions under the given scheme.
double CompactionCpu(const CostParams& p, Scheme scheme);

// Total CPU of one full filter evaluation under the given scheme.
double FilterCpu(const CostParams& p, Scheme scheme);

// Right-hand side of the dictionary-benefit inequality:
// (F / S_V) * (S_V - S_O) / (S_K + S_O).
double I1Rhs(const CostParams& p);

// Largest integer D with D * log2(D) < I1Rhs(p); 0 when the inequality
// has no solution. Below this border the OPD compaction CPU beats the
// uncompressed scheme.
uint64_t I1Border(const CostParams& p);

// Whole-file compression factor d = (S_K + S_V) / (S_K + S_O).
double CompressionFactor(const CostParams& p);

// Human-readable table of every quantity above, for the CLI.
std::string Report(const CostParams& p);

}  // namespace costmodel
}  // namespace sctdb

#endif  // SCTDB_COSTMODEL_H_
