// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "sctdb/manifest.h"

#include <json.hpp>

#include "util/crc32c.h"
#include "util/env.h"

namespace sctdb {

namespace {

using nlohmann::json;

std::string ToHex(std::string_view s) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(s.size() * 2);
  for (unsigned char c : s) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xf]);
  }
  return out;
}

bool FromHex(const std::string& hex, std::string* out) {
  if (hex.size() % 2 != 0) return false;
  out->clear();
  out->reserve(hex.size() / 2);
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  for (size_t i = 0; i < hex.size(); i += 2) {
    const int hi = nibble(hex[i]);
    const int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return false;
    out->push_back(static_cast<char>((hi << 4) | lo));
  }
  return true;
}

}  // namespace

std::string ManifestPath(const std::string& dir) { return dir + "/MANIFEST"; }

std::string SctPath(const std::string& dir, uint64_t id) {
  return dir + "/sct_" + std::to_string(id) + ".sct";
}

Status SaveManifest(const std::string& dir, const ManifestData& m) {
  json j;
  j["format"] = 1;
  j["version"] = m.version;
  j["next_sct_id"] = m.next_sct_id;
  j["last_seq"] = m.last_seq;
  j["key_size"] = m.key_size;
  j["mode"] = static_cast<int>(m.mode);
  json levels = json::array();
  for (const auto& level : m.levels) {
    json files = json::array();
    for (const auto& f : level) {
      files.push_back({{"id", f.id},
                       {"min", ToHex(f.min_key)},
                       {"max", ToHex(f.max_key)},
                       {"entries", f.entries},
                       {"bytes", f.bytes}});
    }
    levels.push_back(std::move(files));
  }
  j["levels"] = std::move(levels);
  const std::string body = j.dump();
  j["crc"] = crc32c::Value(body);
  return AtomicWriteFile(ManifestPath(dir), j.dump(2) + "\n");
}

Status LoadManifest(const std::string& dir, ManifestData* out, bool* exists) {
  const std::string path = ManifestPath(dir);
  *exists = FileExists(path);
  if (!*exists) return Status::OK();

  std::string raw;
  Status s = ReadFileToString(path, &raw);
  if (!s.ok()) return s;

  json j = json::parse(raw, nullptr, false);
  if (j.is_discarded()) return Status::CorruptManifest("not valid json");
  try {
    if (j.at("format").get<int>() != 1) {
      return Status::CorruptManifest("unknown format");
    }
    const uint32_t stored_crc = j.at("crc").get<uint32_t>();
    json body = j;
    body.erase("crc");
    if (crc32c::Value(body.dump()) != stored_crc) {
      return Status::CorruptManifest("crc mismatch");
    }
    out->version = j.at("version").get<uint64_t>();
    out->next_sct_id = j.at("next_sct_id").get<uint64_t>();
    out->last_seq = j.at("last_seq").get<uint64_t>();
    out->key_size = j.at("key_size").get<uint32_t>();
    out->mode = static_cast<StorageMode>(j.at("mode").get<int>());
    out->levels.clear();
    for (const auto& level : j.at("levels")) {
      std::vector<ManifestFileMeta> files;
      for (const auto& f : level) {
        ManifestFileMeta meta;
        meta.id = f.at("id").get<uint64_t>();
        if (!FromHex(f.at("min").get<std::string>(), &meta.min_key) ||
            !FromHex(f.at("max").get<std::string>(), &meta.max_key)) {
          return Status::CorruptManifest("bad key encoding");
        }
        meta.entries = f.at("entries").get<uint64_t>();
        meta.bytes = f.at("bytes").get<uint64_t>();
        files.push_back(std::move(meta));
      }
      out->levels.push_back(std::move(files));
    }
  } catch (const json::exception& e) {
    return Status::CorruptManifest(e.what());
  }
  return Status::OK();
}

}  // namespace sctdb
