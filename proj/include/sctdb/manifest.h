// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// The manifest records the live file set per level plus id/sequence
// counters. One JSON document, rewritten atomically (temp + fsync +
// rename) on every version change.

#ifndef SCTDB_MANIFEST_H_
#define SCTDB_MANIFEST_H_

#include <string>
#include <vector>

#include "sctdb/options.h"
#include "sctdb/status.h"
#include "sctdb/types.h"

namespace sctdb {

struct ManifestFileMeta {
  uint64_t id = 0;
  std::string min_key;
  std::string max_key;
  uint64_t entries = 0;
  uint64_t bytes = 0;
};

struct ManifestData {
  uint64_t version = 0;
  uint64_t next_sct_id = 1;
  SequenceNumber last_seq = 0;
  uint32_t key_size = 0;
  StorageMode mode = StorageMode::kCoded;
  std::vector<std::vector<ManifestFileMeta>> levels;
};

std::string ManifestPath(const std::string& dir);
std::string SctPath(const std::string& dir, uint64_t id);

// *exists is false (with OK status) when no manifest is present.
Status LoadManifest(const std::string& dir, ManifestData* out, bool* exists);
Status SaveManifest(const std::string& dir, const ManifestData& m);

}  // namespace sctdb

#endif  // SCTDB_MANIFEST_H_
