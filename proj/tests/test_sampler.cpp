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

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "parsample/hardness.hpp"
#include "parsample/oracles/affine_code.hpp"
#include "parsample/oracles/markov.hpp"
#include "parsample/oracles/pair_copy.hpp"
#include "parsample/oracles/product.hpp"
#include "parsample/oracles/table.hpp"
#include "parsample/sampler.hpp"
#include "support/brute_force.hpp"

namespace {

using parsample::CouplerKind;
using parsample::PermutationMode;
using parsample::SamplerConfig;
using parsample::SamplerMode;

SamplerConfig config(uint64_t seed, CouplerKind c = CouplerKind::kMinCoupler,
                     PermutationMode p = PermutationMode::kRandom,
                     std::optional<std::size_t> theta = std::nullopt) {
  return SamplerConfig{seed, c, SamplerMode::kSequential, theta, p};
}

void expect_trace_invariants(const parsample::SamplerTrace& t, std::size_t n) {
  EXPECT_EQ(t.rounds, t.per_round.size());
  EXPECT_EQ(t.rounds, t.a_history.size());
  for (std::size_t i = 1; i < t.a_history.size(); ++i) EXPECT_LT(t.a_history[i - 1], t.a_history[i]);
  if (n > 0) {
    EXPECT_EQ(t.a_history.back(), n);
  }
  EXPECT_GE(t.total_queries, n);
}

TEST(ResolveTheta, Examples) {
  EXPECT_EQ(parsample::resolve_theta(1, 2), 1u);
  const auto big = parsample::resolve_theta(1000000, 2);
  EXPECT_GT(big, 1u);
  EXPECT_LT(big, 1000000u);
  // ceil(10 / (ln(2)^(1/3) * sqrt(2)^(2/3))) = ceil(8.97)
  EXPECT_EQ(parsample::resolve_theta(1000, 2), 9u);
  EXPECT_EQ(parsample::resolve_theta(1000, 1), parsample::resolve_theta(1000, 2));
  EXPECT_EQ(parsample::resolve_theta(2, 2), 2u);
}

TEST(SequentialSample, SingleCoordinate) {
  const parsample::ProductOracle o({parsample::Distribution({0.3, 0.7})});
  std::size_t ones = 0;
  for (uint64_t s = 0; s < 20000; ++s) {
    const auto r = parsample::sequential_sample(o, config(s));
    EXPECT_EQ(r.trace.rounds, 1u);
    EXPECT_EQ(r.trace.total_queries, 1u);
    ones += r.sample.values[0];
  }
  EXPECT_NEAR(ones / 20000.0, 0.7, 0.02);
}

TEST(SequentialSample, PointMassTable) {
  std::vector<double> probs(27, 0.0);
  probs[bf::encode({2, 0, 1}, 3)] = 1.0;
  const parsample::TableOracle o(3, 3, probs);
  for (uint64_t s = 0; s < 100; ++s) {
    for (auto c : {CouplerKind::kMinCoupler, CouplerKind::kGumbelTrick}) {
      EXPECT_EQ(parsample::sequential_sample(o, config(s, c)).sample.values,
                (std::vector<std::size_t>{2, 0, 1}));
    }
  }
}

TEST(SequentialSample, TableDistribution) {
  const auto o = parsample::TableOracle::random(3, 2, 17);
  std::vector<std::size_t> counts(8, 0);
  for (uint64_t s = 0; s < 100000; ++s) {
    const auto r = parsample::sequential_sample(o, config(s));
    ++counts[bf::encode(r.sample.values, 2)];
    ASSERT_EQ(r.trace.rounds, 3u);
  }
  EXPECT_LE(bf::tv(bf::frequencies(counts), o.probabilities()), 0.02);
}

TEST(ParallelSample, ProductTakesOneRound) {
  const auto o = parsample::ProductOracle::uniform(12, 3);
  for (uint64_t s = 0; s < 50; ++s) {
    const auto r = parsample::parallel_sample(o, config(s));
    EXPECT_EQ(r.trace.rounds, 1u);
    expect_trace_invariants(r.trace, 12);
  }
  const auto one = parsample::ProductOracle::uniform(1, 2);
  EXPECT_EQ(parsample::parallel_sample(one, config(3)).trace.rounds, 1u);
}

double mean_rounds(const parsample::ConditionalOracle& o, SamplerMode mode, PermutationMode p,
                   std::size_t seeds, std::optional<std::size_t> theta = std::nullopt) {
  double total = 0;
  for (uint64_t s = 0; s < seeds; ++s) {
    auto cfg = config(s, CouplerKind::kMinCoupler, p, theta);
    cfg.mode = mode;
    total += static_cast<double>(parsample::sample(o, cfg).trace.rounds);
  }
  return total / static_cast<double>(seeds);
}

TEST(ParallelSample, PairCopySlowerThanProduct) {
  const parsample::PairCopyOracle pc(10, 2);
  const auto prod = parsample::ProductOracle::uniform(10, 2);
  EXPECT_GT(mean_rounds(pc, SamplerMode::kParallel, PermutationMode::kIdentity, 200),
            mean_rounds(prod, SamplerMode::kParallel, PermutationMode::kIdentity, 200));
}

TEST(EfficientSample, WideWindowEqualsParallel) {
  const auto o = parsample::MarkovChainOracle::random(30, 3, 4);
  for (uint64_t s = 0; s < 50; ++s) {
    const auto p = parsample::parallel_sample(o, config(s));
    const auto e = parsample::efficient_sample(o, config(s, CouplerKind::kMinCoupler,
                                                          PermutationMode::kRandom, 30));
    const auto e2 = parsample::efficient_sample(o, config(s, CouplerKind::kMinCoupler,
                                                           PermutationMode::kRandom, 1000));
    EXPECT_EQ(p.sample, e.sample);
    EXPECT_EQ(p.trace, e.trace);
    EXPECT_EQ(p.trace, e2.trace);
  }
}

TEST(EfficientSample, UnitWindowIsSequential) {
  const auto o = parsample::MarkovChainOracle::random(20, 2, 5);
  for (uint64_t s = 0; s < 30; ++s) {
    const auto r = parsample::efficient_sample(o, config(s, CouplerKind::kGumbelTrick,
                                                          PermutationMode::kRandom, 1));
    EXPECT_EQ(r.trace.rounds, 20u);
    std::vector<std::size_t> expect(20);
    std::iota(expect.begin(), expect.end(), std::size_t{1});
    EXPECT_EQ(r.trace.a_history, expect);
  }
  EXPECT_THROW(parsample::efficient_sample(o, config(0, CouplerKind::kMinCoupler,
                                                     PermutationMode::kRandom, 0)),
               std::invalid_argument);
}

TEST(EfficientSample, MarkovAutoWindowMatchesSequential) {
  const auto o = parsample::MarkovChainOracle::random(256, 2, 6);
  double rounds = 0;
  for (uint64_t s = 0; s < 100; ++s) {
    const auto seq = parsample::sequential_sample(o, config(s));
    const auto eff = parsample::efficient_sample(o, config(s));
    EXPECT_EQ(seq.sample, eff.sample) << s;
    expect_trace_invariants(eff.trace, 256);
    const std::size_t theta = parsample::resolve_theta(256, 2);
    EXPECT_LE(eff.trace.total_queries, 2 * (256 + theta * eff.trace.rounds));
    rounds += static_cast<double>(eff.trace.rounds);
  }
  EXPECT_LT(rounds / 100, 256.0);
}

TEST(EfficientSample, LinearQueryBudget) {
  for (std::size_t n : {256u, 1024u}) {
    const auto o = parsample::MarkovChainOracle::random(n, 2, n);
    double queries = 0;
    for (uint64_t s = 0; s < 50; ++s) {
      queries += static_cast<double>(parsample::efficient_sample(o, config(s)).trace.total_queries);
    }
    EXPECT_LE(queries / 50, 8.0 * static_cast<double>(n)) << n;
  }
}

TEST(EfficientSample, RoundCountTail) {
  const auto o = parsample::MarkovChainOracle::random(1024, 2, 77);
  std::vector<std::size_t> rounds;
  for (uint64_t s = 0; s < 400; ++s) rounds.push_back(parsample::efficient_sample(o, config(s)).trace.rounds);
  auto sorted = rounds;
  std::nth_element(sorted.begin(), sorted.begin() + 200, sorted.end());
  const double median = static_cast<double>(sorted[200]);
  const auto far = std::count_if(rounds.begin(), rounds.end(),
                                 [&](std::size_t r) { return static_cast<double>(r) > 3 * median; });
  EXPECT_LE(static_cast<double>(far) / 400.0, 0.05);
}

std::vector<std::pair<std::string, parsample::OracleInstance>> small_families(uint64_t seed) {
  std::vector<std::pair<std::string, parsample::OracleInstance>> out;
  out.emplace_back("table", std::make_shared<parsample::TableOracle>(
                                parsample::TableOracle::random(5, 3, seed, 0.3)));
  out.emplace_back("product", std::make_shared<parsample::ProductOracle>(
                                  std::vector<parsample::Distribution>{
                                      parsample::Distribution({0.2, 0.3, 0.5}),
                                      parsample::Distribution({0.9, 0.1, 0.0}),
                                      parsample::Distribution({0.4, 0.4, 0.2})}));
  out.emplace_back("markov", std::make_shared<parsample::MarkovChainOracle>(
                                 parsample::MarkovChainOracle::random(10, 3, seed)));
  out.emplace_back("paircopy", std::make_shared<parsample::PairCopyOracle>(10, 3));
  {
    parsample::gf2::BitMatrix b(4, 10);
    parsample::KeyedStream s(seed);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 10; ++j) b.set(i, j, s.next_u64() & 1U);
    parsample::gf2::BitVector v(4);  // x = 0 is always a solution
    out.emplace_back("affine", std::make_shared<parsample::AffineCodeOracle>(b, v));
  }
  out.emplace_back("hardness", parsample::hardness::marginal_oracle_view(parsample::hardness::generate(
                                   10, 1.0, seed, parsample::hardness::Override{2, 5, {1, 3}})));
  return out;
}

TEST(Sampler, ExactAgreementAcrossModes) {
  for (const auto& [name, o] : small_families(3)) {
    const std::size_t n = o->num_vars();
    for (auto c : {CouplerKind::kMinCoupler, CouplerKind::kGumbelTrick}) {
      for (auto p : {PermutationMode::kRandom, PermutationMode::kIdentity}) {
        for (uint64_t s = 0; s < 500; ++s) {
          const auto ref = parsample::sequential_sample(*o, config(s, c, p));
          const auto par = parsample::parallel_sample(*o, config(s, c, p));
          ASSERT_EQ(ref.sample, par.sample) << name << " seed " << s;
          expect_trace_invariants(par.trace, n);
          for (std::size_t theta : {std::size_t{1}, std::size_t{2}, std::size_t{3}, n}) {
            const auto eff = parsample::efficient_sample(*o, config(s, c, p, theta));
            ASSERT_EQ(ref.sample, eff.sample) << name << " seed " << s << " theta " << theta;
            expect_trace_invariants(eff.trace, n);
          }
          const auto aut = parsample::efficient_sample(*o, config(s, c, p));
          ASSERT_EQ(ref.sample, aut.sample) << name << " seed " << s;
        }
      }
    }
  }
}

TEST(Sampler, SamplesLieInRange) {
  const auto o = parsample::TableOracle::random(4, 3, 2, 0.5);
  for (uint64_t s = 0; s < 200; ++s) {
    const auto r = parsample::efficient_sample(o, config(s));
    ASSERT_EQ(r.sample.values.size(), 4u);
    for (auto v : r.sample.values) EXPECT_LT(v, 3u);
    EXPECT_GT(o.probabilities()[bf::encode(r.sample.values, 3)], 0.0);
  }
}

TEST(SamplingOrder, IdentityAndSeeded) {
  EXPECT_EQ(parsample::sampling_order(4, 9, PermutationMode::kIdentity),
            (std::vector<std::size_t>{0, 1, 2, 3}));
  const auto a = parsample::sampling_order(30, 9, PermutationMode::kRandom);
  EXPECT_EQ(a, parsample::sampling_order(30, 9, PermutationMode::kRandom));
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 30u);
}

TEST(ComputeAbar, ProductIsZero) {
  const auto o = parsample::ProductOracle::uniform(6, 3);
  for (uint64_t s = 0; s < 20; ++s) {
    const auto order = parsample::sampling_order(6, s, PermutationMode::kRandom);
    for (std::size_t i = 1; i <= 6; ++i) {
      EXPECT_EQ(parsample::compute_abar(o, s, order, CouplerKind::kMinCoupler, i), 0u);
    }
  }
}

TEST(ComputeAbar, FirstPositionIsZero) {
  const auto o = parsample::TableOracle::random(4, 2, 1);
  for (uint64_t s = 0; s < 20; ++s) {
    const auto order = parsample::sampling_order(4, s, PermutationMode::kRandom);
    EXPECT_EQ(parsample::compute_abar(o, s, order, CouplerKind::kGumbelTrick, 1), 0u);
  }
}

TEST(ComputeAbar, PairCopyRealizesBothValues) {
  // Position 4 copies position 3: dropping the partner can flip it, dropping
  // anything earlier cannot.
  const parsample::PairCopyOracle o(4, 2);
  const auto order = parsample::sampling_order(4, 0, PermutationMode::kIdentity);
  std::set<std::size_t> seen;
  for (uint64_t s = 0; s < 200; ++s) {
    seen.insert(parsample::compute_abar(o, s, order, CouplerKind::kMinCoupler, 4));
    EXPECT_EQ(parsample::compute_abar(o, s, order, CouplerKind::kMinCoupler, 2), 0u);
  }
  EXPECT_EQ(seen, (std::set<std::size_t>{0, 2}));
}

TEST(ComputeAbar, MatchesDirectDefinition) {
  // Re-derive a-bar from scratch: largest a < i whose re-coupling differs.
  const auto o = parsample::TableOracle::random(5, 2, 11);
  for (uint64_t s = 0; s < 30; ++s) {
    const auto order = parsample::sampling_order(5, s, PermutationMode::kRandom);
    const auto path = parsample::reference_path(o, s, order, CouplerKind::kMinCoupler);
    for (std::size_t i = 1; i <= 5; ++i) {
      std::size_t expect = 0;
      for (std::size_t a = 0; a < i; ++a) {
        parsample::Pinning p(5, 2);
        for (std::size_t k = 0; k < a; ++k) p.pin(order[k], path[k]);
        const auto x = parsample::couple(CouplerKind::kMinCoupler, o.conditional_marginal(order[i - 1], p),
                                         parsample::RandomTape(s, i));
        if (x != path[i - 1]) expect = a;
      }
      EXPECT_EQ(parsample::compute_abar(o, s, order, CouplerKind::kMinCoupler, i), expect);
    }
  }
}

TEST(DeterministicRoundBound, ProductAndFullWindow) {
  const auto o = parsample::ProductOracle::uniform(8, 2);
  const auto order = parsample::sampling_order(8, 1, PermutationMode::kRandom);
  // Every i <= theta qualifies since a-bar >= 0 >= i - theta.
  EXPECT_EQ(parsample::deterministic_round_bound(o, 1, order, CouplerKind::kMinCoupler, 1), 1u + 1 + 8);
  EXPECT_EQ(parsample::deterministic_round_bound(o, 1, order, CouplerKind::kMinCoupler, 3), 3u + 1 + 2);
  EXPECT_EQ(parsample::deterministic_round_bound(o, 1, order, CouplerKind::kMinCoupler, 8), 8u + 2);
}

TEST(DeterministicRoundBound, HoldsOnRandomTables) {
  const auto o = parsample::TableOracle::random(6, 2, 21);
  for (uint64_t s = 0; s < 100; ++s) {
    const std::size_t theta = 1 + s % 6;
    const auto cfg = config(s, CouplerKind::kMinCoupler, PermutationMode::kRandom, theta);
    const auto order = parsample::sampling_order(6, s, PermutationMode::kRandom);
    const auto rounds = parsample::efficient_sample(o, cfg).trace.rounds;
    EXPECT_LE(rounds, parsample::deterministic_round_bound(o, s, order, CouplerKind::kMinCoupler, theta));
  }
}

}  // namespace
