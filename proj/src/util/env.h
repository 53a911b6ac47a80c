// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Thin POSIX file helpers. Writers go through a temp path and rename so a
// file is either absent or complete.

#ifndef SCTDB_UTIL_ENV_H_
#define SCTDB_UTIL_ENV_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "sctdb/status.h"

namespace sctdb {

// Random-access reads over one open descriptor, safe for concurrent use.
class RandomAccessFile {
 public:
  RandomAccessFile() = default;
  ~RandomAccessFile();
  RandomAccessFile(const RandomAccessFile&) = delete;
  RandomAccessFile& operator=(const RandomAccessFile&) = delete;

  Status Open(const std::string& path);
  Status Pread(uint64_t offset, size_t n, char* dst) const;
  uint64_t size() const { return size_; }
  bool is_open() const { return fd_ >= 0; }
  void Close();

 private:
  int fd_ = -1;
  uint64_t size_ = 0;
};

// Writes contents to a temp file, fsyncs, renames to path, fsyncs the
// parent directory.
Status AtomicWriteFile(const std::string& path, std::string_view contents);

Status ReadFileToString(const std::string& path, std::string* out);
Status RemoveFileIfExists(const std::string& path);
Status SyncDir(const std::string& dir);
bool FileExists(const std::string& path);

uint64_t NowMicros();

}  // namespace sctdb

#endif  // SCTDB_UTIL_ENV_H_
