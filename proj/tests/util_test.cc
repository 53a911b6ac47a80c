// Copyright (c) 2026 The sctdb Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include <doctest.h>

#include <random>

#include "util/bitpack.h"
#include "util/bloom.h"
#include "util/coding.h"
#include "util/crc32c.h"
#include "util/hash.h"
#include "testutil.h"

namespace sctdb {
namespace {

TEST_CASE("coding fixed-width round trip") {
  std::string buf;
  PutFixed16(&buf, 0xbeef);
  PutFixed32(&buf, 0xdeadbeef);
  PutFixed64(&buf, 0x0123456789abcdefull);
  CHECK_EQ(DecodeFixed16(buf.data()), 0xbeef);
  CHECK_EQ(DecodeFixed32(buf.data() + 2), 0xdeadbeef);
  CHECK_EQ(DecodeFixed64(buf.data() + 6), 0x0123456789abcdefull);
}

TEST_CASE("crc32c known values") {
  // Standard check vector: crc32c of "123456789" is 0xe3069283.
  CHECK_EQ(crc32c::Value("123456789", 9), 0xe3069283u);
  // All-zero 32 bytes: 0x8a9136aa.
  std::string zeros(32, '\0');
  CHECK_EQ(crc32c::Value(zeros.data(), zeros.size()), 0x8a9136aau);
}

TEST_CASE("crc32c detects single byte flips") {
  std::mt19937_64 rng(1);
  std::string data = test::RandomString(rng, 100, 5000);
  const uint32_t base = crc32c::Value(data.data(), data.size());
  for (int trial = 0; trial < 50; trial++) {
    std::string copy = data;
    const size_t pos = rng() % copy.size();
    copy[pos] = static_cast<char>(copy[pos] ^ (1 + rng() % 255));
    CHECK_NE(crc32c::Value(copy.data(), copy.size()), base);
  }
}

TEST_CASE("crc32c extend equals one-shot") {
  std::mt19937_64 rng(2);
  std::string a = test::RandomString(rng, 1, 100);
  std::string b = test::RandomString(rng, 1, 100);
  const uint32_t whole = crc32c::Value((a + b).data(), a.size() + b.size());
  const uint32_t split =
      crc32c::Extend(crc32c::Value(a.data(), a.size()), b.data(), b.size());
  CHECK_EQ(whole, split);
}

TEST_CASE("hash128 is stable and spreads") {
  auto [h1a, h2a] = Hash128("hello", 5);
  auto [h1b, h2b] = Hash128("hello", 5);
  CHECK_EQ(h1a, h1b);
  CHECK_EQ(h2a, h2b);
  auto [h1c, h2c] = Hash128("hellp", 5);
  CHECK_NE(h1a, h1c);
  CHECK_NE(h2a, h2c);
}

TEST_CASE("bitpack round trip over widths 1..32") {
  std::mt19937_64 rng(3);
  for (uint32_t width = 1; width <= 32; width++) {
    const size_t n = 1 + rng() % 3000;
    std::vector<uint32_t> codes(n);
    const uint64_t mask = width == 32 ? 0xffffffffull : ((1ull << width) - 1);
    for (auto& c : codes) c = static_cast<uint32_t>(rng() & mask);

    std::string packed;
    AppendPackedCodes(codes.data(), n, width, &packed);
    CHECK_EQ(packed.size(), PackedBytes(n, width));

    std::vector<uint32_t> out(n);
    UnpackCodes(packed.data(), n, width, out.data());
    CHECK_EQ(codes, out);
  }
}

TEST_CASE("bitpack width-1 example") {
  const uint32_t codes[] = {0, 1, 0, 1};
  std::string packed;
  AppendPackedCodes(codes, 4, 1, &packed);
  REQUIRE_EQ(packed.size(), 1);
  CHECK_EQ(static_cast<unsigned char>(packed[0]), 0b1010);
  uint32_t out[4];
  UnpackCodes(packed.data(), 4, 1, out);
  CHECK_EQ(out[0], 0);
  CHECK_EQ(out[1], 1);
  CHECK_EQ(out[2], 0);
  CHECK_EQ(out[3], 1);
}

TEST_CASE("bloom has no false negatives") {
  std::mt19937_64 rng(4);
  std::vector<std::string> keys;
  for (int i = 0; i < 500; i++) keys.push_back(test::RandomString(rng, 8, 24));
  std::vector<std::string_view> views(keys.begin(), keys.end());
  const std::string filter = BuildBloom(views, 10);
  for (const auto& k : keys) CHECK(BloomMayContain(filter, k));
}

TEST_CASE("bloom false positive rate is low") {
  std::mt19937_64 rng(5);
  std::vector<std::string> keys;
  for (int i = 0; i < 1000; i++) {
    keys.push_back("in-" + test::RandomString(rng, 8, 16));
  }
  std::vector<std::string_view> views(keys.begin(), keys.end());
  const std::string filter = BuildBloom(views, 10);

  int positives = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; i++) {
    if (BloomMayContain(filter, "out-" + test::RandomString(rng, 8, 16))) {
      positives++;
    }
  }
  // 10 bits/key, 7 hashes: ~1% expected; generous ceiling.
  CHECK_LT(positives, trials * 0.03);
}

}  // namespace
}  // namespace sctdb
