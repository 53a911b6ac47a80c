// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef SCTDB_PREDICATE_H_
#define SCTDB_PREDICATE_H_

#include <string>
#include <string_view>

#include "sctdb/status.h"

namespace sctdb {

// A predicate over value byte strings. Range is half-open [low, high).
struct ValuePredicate {
  enum class Kind { kEquality, kPrefix, kRange };

  Kind kind = Kind::kEquality;
  std::string a;  // equality value, prefix, or range low
  std::string b;  // range high

  static ValuePredicate Equality(std::string v) {
    return {Kind::kEquality, std::move(v), {}};
  }
  static ValuePredicate Prefix(std::string p) {
    return {Kind::kPrefix, std::move(p), {}};
  }
  static ValuePredicate Range(std::string low, std::string high) {
    return {Kind::kRange, std::move(low), std::move(high)};
  }

  Status Validate() const {
    if (kind == Kind::kRange && a > b) {
      return Status::InvalidPredicate("range low > high");
    }
    return Status::OK();
  }

  bool Matches(std::string_view v) const {
    switch (kind) {
      case Kind::kEquality:
        return v == a;
      case Kind::kPrefix:
        return v.substr(0, a.size()) == a;
      case Kind::kRange:
        return v >= a && v < b;
    }
    return false;
  }

  std::string ToString() const;
};

}  // namespace sctdb

#endif  // SCTDB_PREDICATE_H_
