// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/costmodel.h"

#include <cmath>
#include <sstream>

namespace sctdb {
namespace costmodel {

namespace {

double Log2OrZero(double x) { return x <= 1.0 ? 0.0 : std::log2(x); }

double SumLevels(uint64_t m, double ratio) {
  double sum = 0;
  for (uint64_t i = 1; i <= m; i++) {
    sum += LevelOfFile(i, ratio);
  }
  return sum;
}

}  // namespace

uint32_t LevelOfFile(uint64_t i, double ratio) {
  const double x = static_cast<double>(i) * (ratio - 1) + 1;
  uint32_t level = 0;
  double cap = 1;
  while (cap + 1e-9 < x) {
    cap *= ratio;
    level++;
  }
  return level;
}

uint64_t FileCount(const CostParams& p, Scheme scheme) {
  double per_entry;
  switch (scheme) {
    case Scheme::kPlain:
      per_entry = p.key_bytes + p.value_bytes;
      break;
    case Scheme::kHeavy:
      per_entry = (p.key_bytes + p.value_bytes) / p.heavy_ratio;
      break;
    case Scheme::kOpd:
      per_entry = p.key_bytes + p.code_bytes;
      break;
    default:
      per_entry = p.key_bytes + p.value_bytes;
  }
  const double m = p.entries * per_entry / p.file_size;
  return m < 1 ? 1 : static_cast<uint64_t>(std::llround(m));
}

double CompactionIo(const CostParams& p, uint64_t file_count) {
  return p.file_size * p.size_ratio * SumLevels(file_count, p.size_ratio);
}

double CompactionCpu(const CostParams& p, Scheme scheme) {
  const uint64_t m = FileCount(p, scheme);
  const double per_entry_keys =
      p.entries / static_cast<double>(m) * p.key_bytes * p.key_merge_cost;
  double per_file;
  switch (scheme) {
    case Scheme::kPlain:
      per_file = per_entry_keys + p.file_size * p.copy_cost;
      break;
    case Scheme::kHeavy:
      per_file = per_entry_keys +
                 p.file_size * (p.copy_cost + p.heavy_decompress_cost +
                                p.heavy_compress_cost);
      break;
    case Scheme::kOpd:
      per_file = per_entry_keys + p.file_size * p.copy_cost +
                 p.value_bytes * p.string_compare_cost * p.ndv_per_file *
                     Log2OrZero(p.ndv_per_file);
      break;
    default:
      per_file = 0;
  }
  return per_file * p.size_ratio * SumLevels(m, p.size_ratio);
}

double FilterCpu(const CostParams& p, Scheme scheme) {
  const double merge_copy =
      p.selectivity * p.entries *
      (p.key_bytes * p.key_merge_cost +
       (p.key_bytes + p.value_bytes) * p.copy_cost);
  switch (scheme) {
    case Scheme::kPlain:
      return p.entries * p.value_bytes * p.string_compare_cost + merge_copy;
    case Scheme::kHeavy: {
      const uint64_t m = FileCount(p, Scheme::kHeavy);
      return static_cast<double>(m) * p.file_size * p.heavy_decompress_cost +
             p.entries * p.value_bytes * p.string_compare_cost + merge_copy;
    }
    case Scheme::kOpd: {
      const uint64_t m = FileCount(p, Scheme::kOpd);
      return static_cast<double>(m) * Log2OrZero(p.ndv_per_file) *
                 p.value_bytes * p.string_compare_cost +
             p.entries * p.code_bytes * p.string_compare_cost / p.simd_bytes +
             merge_copy;
    }
  }
  return 0;
}

double I1Rhs(const CostParams& p) {
  return (p.file_size / p.value_bytes) * (p.value_bytes - p.code_bytes) /
         (p.key_bytes + p.code_bytes);
}

uint64_t I1Border(const CostParams& p) {
  const double rhs = I1Rhs(p);
  if (rhs <= 0) return 0;
  auto f = [](uint64_t d) {
    return static_cast<double>(d) * Log2OrZero(static_cast<double>(d));
  };
  uint64_t lo = 0;
  uint64_t hi = 1;
  while (f(hi) < rhs && hi < (1ull << 50)) hi <<= 1;
  // Largest d with f(d) < rhs lies in [lo, hi).
  while (lo + 1 < hi) {
    const uint64_t mid = lo + (hi - lo) / 2;
    if (f(mid) < rhs) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double CompressionFactor(const CostParams& p) {
  return (p.key_bytes + p.value_bytes) / (p.key_bytes + p.code_bytes);
}

std::string Report(const CostParams& p) {
  std::ostringstream os;
  os.precision(6);
  const uint64_t m_plain = FileCount(p, Scheme::kPlain);
  const uint64_t m_heavy = FileCount(p, Scheme::kHeavy);
  const uint64_t m_opd = FileCount(p, Scheme::kOpd);
  os << "entries (N)              " << p.entries << "\n"
     << "file size (F)            " << p.file_size << " bytes\n"
     << "size ratio (T)           " << p.size_ratio << "\n"
     << "ndv per file (D)         " << p.ndv_per_file << "\n"
     << "key/value/code bytes     " << p.key_bytes << "/" << p.value_bytes
     << "/" << p.code_bytes << "\n"
     << "compression factor d     " << CompressionFactor(p) << "\n"
     << "\n"
     << "files: plain/heavy/opd   " << m_plain << "/" << m_heavy << "/"
     << m_opd << "\n"
     << "compaction io bytes      plain " << CompactionIo(p, m_plain)
     << "  heavy " << CompactionIo(p, m_heavy) << "  opd "
     << CompactionIo(p, m_opd) << "\n"
     << "compaction cpu instr     plain " << CompactionCpu(p, Scheme::kPlain)
     << "  heavy " << CompactionCpu(p, Scheme::kHeavy) << "  opd "
     << CompactionCpu(p, Scheme::kOpd) << "\n"
     << "filter cpu instr         plain " << FilterCpu(p, Scheme::kPlain)
     << "  heavy " << FilterCpu(p, Scheme::kHeavy) << "  opd "
     << FilterCpu(p, Scheme::kOpd) << "\n"
     << "\n"
     << "dict-benefit rhs         " << I1Rhs(p) << "\n"
     << "dict-benefit border D    " << I1Border(p) << "\n"
     << "border / file capacity   "
     << static_cast<double>(I1Border(p)) /
            (p.file_size / (p.key_bytes + p.code_bytes))
     << "\n";
  return os.str();
}

}  // namespace costmodel
}  // namespace sctdb
