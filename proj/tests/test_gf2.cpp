// Copyright 2026 The parsample Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <vector>

#include "gtest/gtest.h"
#include "parsample/gf2.hpp"
#include "parsample/random_tape.hpp"
#include "support/brute_force.hpp"

namespace {

using parsample::gf2::BitMatrix;
using parsample::gf2::BitPin;
using parsample::gf2::BitVector;

struct RandomSystem {
  BitMatrix a;
  BitVector b;
  std::vector<std::vector<int>> rows;
  std::vector<int> rhs;
};

RandomSystem random_system(std::size_t m, std::size_t n, uint64_t seed) {
  parsample::KeyedStream s(seed);
  RandomSystem sys{BitMatrix(m, n), BitVector(m), {}, {}};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<int> row(n);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = static_cast<int>(s.next_u64() & 1U);
      sys.a.set(i, j, row[j]);
    }
    sys.rows.push_back(row);
    const int bit = static_cast<int>(s.next_u64() & 1U);
    sys.b.set(i, bit);
    sys.rhs.push_back(bit);
  }
  return sys;
}

TEST(Gf2, IdentityRankAndCount) {
  const auto id = BitMatrix::identity(5);
  EXPECT_EQ(parsample::gf2::rank(id), 5u);
  EXPECT_EQ(parsample::gf2::solution_count_log2(id, BitVector(5)), 0u);
}

TEST(Gf2, EmptySystemCountsEverything) {
  EXPECT_EQ(parsample::gf2::solution_count_log2(BitMatrix(0, 7), BitVector(0)), 7u);
}

TEST(Gf2, InconsistentSystem) {
  BitMatrix a(2, 3);
  a.set(0, 0, true);
  a.set(1, 0, true);
  BitVector b(2);
  b.set(0, true);
  EXPECT_FALSE(parsample::gf2::solution_count_log2(a, b).has_value());
}

TEST(Gf2, CountsMatchEnumeration) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t n = 1 + seed % 12;
    const std::size_t m = seed % 9;
    const auto sys = random_system(m, n, seed);
    const auto sols = bf::affine_solutions(sys.rows, sys.rhs, n);
    const auto c = parsample::gf2::solution_count_log2(sys.a, sys.b);
    if (sols.empty()) {
      EXPECT_FALSE(c.has_value()) << seed;
    } else {
      ASSERT_TRUE(c.has_value()) << seed;
      EXPECT_EQ(std::size_t{1} << *c, sols.size()) << seed;
      EXPECT_EQ(parsample::gf2::rank(sys.a), n - *c);
    }
  }
}

TEST(Gf2, PinnedCountsMatchEnumeration) {
  for (uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 2 + seed % 10;
    const std::size_t m = seed % 6;
    const auto sys = random_system(m, n, seed * 31 + 5);
    parsample::KeyedStream s(seed);
    std::vector<BitPin> pins;
    uint64_t mask = 0, want = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (s.next_below(3) == 0) {
        const bool v = s.next_u64() & 1U;
        pins.push_back({j, v});
        mask |= uint64_t{1} << j;
        want |= static_cast<uint64_t>(v) << j;
      }
    }
    std::size_t expect = 0;
    for (auto x : bf::affine_solutions(sys.rows, sys.rhs, n)) expect += (x & mask) == want;
    const auto c = parsample::gf2::solve_affine_with_pinning(sys.a, sys.b, pins);
    if (expect == 0) {
      EXPECT_FALSE(c.has_value()) << seed;
    } else {
      ASSERT_TRUE(c.has_value()) << seed;
      EXPECT_EQ(std::size_t{1} << *c, expect) << seed;
    }
  }
}

TEST(Gf2, PinningValidation) {
  const auto sys = random_system(2, 4, 3);
  EXPECT_THROW(parsample::gf2::solve_affine_with_pinning(sys.a, sys.b, std::vector<BitPin>{{4, true}}),
               std::invalid_argument);
  EXPECT_THROW(parsample::gf2::solve_affine_with_pinning(sys.a, sys.b, std::vector<BitPin>{{1, true}, {1, false}}),
               std::invalid_argument);
}

TEST(Gf2, WideRowsAcrossWords) {
  // 130 columns spans three words.
  BitMatrix a(2, 130);
  a.set(0, 0, true);
  a.set(0, 129, true);
  a.set(1, 64, true);
  BitVector b(2);
  b.set(0, true);
  EXPECT_EQ(parsample::gf2::rank(a), 2u);
  EXPECT_EQ(parsample::gf2::solution_count_log2(a, b), 128u);
  EXPECT_EQ(parsample::gf2::solve_affine_with_pinning(a, b, std::vector<BitPin>{{0, true}, {129, true}}), std::nullopt);
}

TEST(Gf2, HexRoundTrip) {
  BitVector v(10);
  v.set(0, true);
  v.set(9, true);
  EXPECT_EQ(parsample::gf2::to_hex(v), "201");
  const auto back = parsample::gf2::from_hex("201", 10);
  EXPECT_EQ(back, v);
  EXPECT_THROW(parsample::gf2::from_hex("g", 4), std::invalid_argument);
  EXPECT_THROW(parsample::gf2::from_hex("10", 4), std::invalid_argument);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const auto sys = random_system(3, 1 + seed % 70, seed);
    for (std::size_t r = 0; r < 3; ++r) {
      const auto row = parsample::gf2::row_vector(sys.a, r);
      EXPECT_EQ(parsample::gf2::from_hex(parsample::gf2::to_hex(row), row.size()), row);
    }
  }
}

}  // namespace
