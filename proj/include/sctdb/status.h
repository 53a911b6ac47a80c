// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_STATUS_H_
#define SCTDB_STATUS_H_

#include <string>
#include <string_view>
#include <utility>

namespace sctdb {

// Operation outcome. Ok carries no payload; every other code may carry a
// message. Copyable and cheap when ok.
class Status {
 public:
  enum class Code : unsigned char {
    kOk = 0,
    kNotFound,
    kCorruption,
    kIoError,
    kInvalidArgument,
    kMemtableFrozen,
    kAlreadyFrozen,
    kKeySizeMismatch,
    kNotInDomain,
    kCodeOutOfRange,
    kInvalidCode,
    kInvalidPredicate,
    kUnsortedInput,
    kEmptyFile,
    kChecksumMismatch,
    kCorruptManifest,
    kStalled,
    kInvalidSpec,
  };

  Status() : code_(Code::kOk) {}
  static Status OK() { return Status(); }

  static Status NotFound(std::string_view m = {}) { return {Code::kNotFound, m}; }
  static Status Corruption(std::string_view m = {}) { return {Code::kCorruption, m}; }
  static Status IoError(std::string_view m = {}) { return {Code::kIoError, m}; }
  static Status InvalidArgument(std::string_view m = {}) { return {Code::kInvalidArgument, m}; }
  static Status MemtableFrozen() { return {Code::kMemtableFrozen, {}}; }
  static Status AlreadyFrozen() { return {Code::kAlreadyFrozen, {}}; }
  static Status KeySizeMismatch(std::string_view m = {}) { return {Code::kKeySizeMismatch, m}; }
  static Status NotInDomain() { return {Code::kNotInDomain, {}}; }
  static Status CodeOutOfRange(std::string_view m = {}) { return {Code::kCodeOutOfRange, m}; }
  static Status InvalidCode(std::string_view m = {}) { return {Code::kInvalidCode, m}; }
  static Status InvalidPredicate(std::string_view m = {}) { return {Code::kInvalidPredicate, m}; }
  static Status UnsortedInput(std::string_view m = {}) { return {Code::kUnsortedInput, m}; }
  static Status EmptyFile(std::string_view m = {}) { return {Code::kEmptyFile, m}; }
  static Status ChecksumMismatch(std::string_view m = {}) { return {Code::kChecksumMismatch, m}; }
  static Status CorruptManifest(std::string_view m = {}) { return {Code::kCorruptManifest, m}; }
  static Status Stalled(std::string_view m = {}) { return {Code::kStalled, m}; }
  static Status InvalidSpec(std::string_view m = {}) { return {Code::kInvalidSpec, m}; }

  bool ok() const { return code_ == Code::kOk; }
  bool IsNotFound() const { return code_ == Code::kNotFound; }
  bool IsCorruption() const { return code_ == Code::kCorruption; }
  bool IsIoError() const { return code_ == Code::kIoError; }
  bool IsInvalidArgument() const { return code_ == Code::kInvalidArgument; }
  bool IsMemtableFrozen() const { return code_ == Code::kMemtableFrozen; }
  bool IsAlreadyFrozen() const { return code_ == Code::kAlreadyFrozen; }
  bool IsKeySizeMismatch() const { return code_ == Code::kKeySizeMismatch; }
  bool IsNotInDomain() const { return code_ == Code::kNotInDomain; }
  bool IsCodeOutOfRange() const { return code_ == Code::kCodeOutOfRange; }
  bool IsInvalidCode() const { return code_ == Code::kInvalidCode; }
  bool IsInvalidPredicate() const { return code_ == Code::kInvalidPredicate; }
  bool IsUnsortedInput() const { return code_ == Code::kUnsortedInput; }
  bool IsEmptyFile() const { return code_ == Code::kEmptyFile; }
  bool IsChecksumMismatch() const { return code_ == Code::kChecksumMismatch; }
  bool IsCorruptManifest() const { return code_ == Code::kCorruptManifest; }
  bool IsStalled() const { return code_ == Code::kStalled; }
  bool IsInvalidSpec() const { return code_ == Code::kInvalidSpec; }

  Code code() const { return code_; }
  const std::string& message() const { return msg_; }

  std::string ToString() const {
    if (ok()) return "OK";
    std::string s(CodeName(code_));
    if (!msg_.empty()) {
      s += ": ";
      s += msg_;
    }
    return s;
  }

 private:
  Status(Code code, std::string_view msg) : code_(code), msg_(msg) {}

  static const char* CodeName(Code c) {
    switch (c) {
      case Code::kOk: return "OK";
      case Code::kNotFound: return "NotFound";
      case Code::kCorruption: return "Corruption";
      case Code::kIoError: return "IoError";
      case Code::kInvalidArgument: return "InvalidArgument";
      case Code::kMemtableFrozen: return "MemtableFrozen";
      case Code::kAlreadyFrozen: return "AlreadyFrozen";
      case Code::kKeySizeMismatch: return "KeySizeMismatch";
      case Code::kNotInDomain: return "NotInDomain";
      case Code::kCodeOutOfRange: return "CodeOutOfRange";
      case Code::kInvalidCode: return "InvalidCode";
      case Code::kInvalidPredicate: return "InvalidPredicate";
      case Code::kUnsortedInput: return "UnsortedInput";
      case Code::kEmptyFile: return "EmptyFile";
      case Code::kChecksumMismatch: return "ChecksumMismatch";
      case Code::kCorruptManifest: return "CorruptManifest";
      case Code::kStalled: return "Stalled";
      case Code::kInvalidSpec: return "InvalidSpec";
    }
    return "Unknown";
  }

  Code code_;
  std::string msg_;
};

}  // namespace sctdb

#endif  // SCTDB_STATUS_H_
