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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "parsample/coupler.hpp"
#include "parsample/oracle.hpp"
#include "parsample/random_tape.hpp"

namespace parsample {

enum class SamplerMode { kSequential, kParallel, kEfficient };
enum class PermutationMode { kRandom, kIdentity };

struct SamplerConfig {
  uint64_t seed = 0;
  CouplerKind coupler = CouplerKind::kMinCoupler;
  SamplerMode mode = SamplerMode::kEfficient;
  std::optional<std::size_t> theta;  // nullopt selects the automatic window
  PermutationMode permutation = PermutationMode::kRandom;
};

/// One guess-and-verify round. Positions are 1-based ranks in the sampling
/// order; the round touched positions [window_begin, window_end].
struct RoundRecord {
  std::size_t batch_size = 0;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  std::optional<std::size_t> first_mismatch;

  bool operator==(const RoundRecord&) const = default;
};

struct SamplerTrace {
  std::size_t rounds = 0;
  std::size_t total_queries = 0;
  std::vector<std::size_t> a_history;
  std::vector<RoundRecord> per_round;

  bool operator==(const SamplerTrace&) const = default;
};

/// Sampled symbols indexed by coordinate.
struct Sample {
  std::vector<std::size_t> values;

  bool operator==(const Sample&) const = default;
};

struct SampleResult {
  Sample sample;
  SamplerTrace trace;
};

/// Window size balancing n/theta large-progress rounds against the expected
/// number of small-progress ones:
/// theta = n^{1/3} / (ln^{1/3} q * min(ln(nq), sqrt q)^{2/3}), rounded up and
/// clamped to [1, n]. q is clamped to >= 2.
inline std::size_t resolve_theta(std::size_t n, std::size_t q) {
  if (n <= 1) {
    return 1;
  }
  const double qq = static_cast<double>(std::max<std::size_t>(q, 2));
  const double nn = static_cast<double>(n);
  const double denom =
      std::cbrt(std::log(qq)) * std::pow(std::min(std::log(nn * qq), std::sqrt(qq)), 2.0 / 3.0);
  const double theta = std::ceil(std::cbrt(nn) / denom);
  return std::clamp<std::size_t>(static_cast<std::size_t>(theta), 1, n);
}

/// Sampling order: entry k is the coordinate visited at position k + 1.
inline std::vector<std::size_t> sampling_order(std::size_t n, uint64_t seed,
                                               PermutationMode mode) {
  if (mode == PermutationMode::kIdentity) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
  }
  return keyed_permutation(n, seed);
}

/// Tape shared by every coupling of the coordinate at 1-based position `pos`.
constexpr RandomTape position_tape(uint64_t seed, std::size_t pos) noexcept {
  return RandomTape(seed, pos);
}

/// The autoregressive reference x~(sigma, u): values in position order.
inline std::vector<std::size_t> reference_path(const ConditionalOracle& oracle, uint64_t seed,
                                               std::span<const std::size_t> order,
                                               CouplerKind coupler) {
  Pinning pinning(oracle.num_vars(), oracle.alphabet_size());
  std::vector<std::size_t> path(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto mu = oracle.conditional_marginal(order[k], pinning);
    path[k] = couple(coupler, mu, position_tape(seed, k + 1));
    pinning.pin(order[k], path[k]);
  }
  return path;
}

inline SampleResult sequential_sample(const ConditionalOracle& oracle, const SamplerConfig& config) {
  const std::size_t n = oracle.num_vars();
  const auto order = sampling_order(n, config.seed, config.permutation);
  const auto path = reference_path(oracle, config.seed, order, config.coupler);
  SampleResult out;
  out.sample.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.sample.values[order[k]] = path[k];
    out.trace.a_history.push_back(k + 1);
    out.trace.per_round.push_back({1, k + 1, k + 1, std::nullopt});
  }
  out.trace.rounds = n;
  out.trace.total_queries = n;
  return out;
}

namespace detail {

// Guess-and-verify with at most `window` fresh positions per round. A window
// of n is the full-batch round; smaller windows give the query-efficient form.
inline SampleResult guess_and_verify(const ConditionalOracle& oracle, const SamplerConfig& config,
                                     std::size_t window) {
  const std::size_t n = oracle.num_vars();
  const auto order = sampling_order(n, config.seed, config.permutation);
  // Invariant between rounds: `pinning` holds exactly the first `a` positions,
  // all equal to the reference path.
  Pinning pinning(n, oracle.alphabet_size());
  std::vector<std::size_t> x(n, 0);
  std::vector<std::size_t> y(n, 0);
  std::vector<std::size_t> targets;
  SampleResult out;
  std::size_t a = 0;
  while (a < n) {
    const std::size_t hi = std::min(a + window, n);
    targets.assign(order.begin() + static_cast<std::ptrdiff_t>(a),
                   order.begin() + static_cast<std::ptrdiff_t>(hi));

    // Guess: every position in the window against the verified prefix.
    const auto guesses = oracle.conditional_marginals(targets, pinning);
    for (std::size_t k = a; k < hi; ++k) {
      y[order[k]] = couple(config.coupler, guesses[k - a], position_tape(config.seed, k + 1));
    }

    // Verify: position k against the guesses before it. Positions after the
    // first mismatch cannot change the outcome, so the scan stops there.
    std::optional<std::size_t> mismatch;
    for (std::size_t k = a; k < hi; ++k) {
      const std::size_t coord = order[k];
      const Distribution mu =
          k == a ? guesses[0] : oracle.conditional_marginal(coord, pinning);
      x[coord] = couple(config.coupler, mu, position_tape(config.seed, k + 1));
      if (x[coord] != y[coord]) {
        mismatch = k + 1;
        pinning.pin(coord, x[coord]);
        break;
      }
      pinning.pin(coord, y[coord]);
    }

    const std::size_t batch = hi - a;
    out.trace.total_queries += 2 * batch;
    out.trace.per_round.push_back({batch, a + 1, hi, mismatch});
    a = mismatch.value_or(hi);
    out.trace.a_history.push_back(a);
    ++out.trace.rounds;
  }
  out.sample.values = std::move(x);
  return out;
}

}  // namespace detail

/// Full-batch guess-and-verify: each round re-guesses every unfixed position.
inline SampleResult parallel_sample(const ConditionalOracle& oracle, const SamplerConfig& config) {
  return detail::guess_and_verify(oracle, config, std::max<std::size_t>(oracle.num_vars(), 1));
}

/// Windowed guess-and-verify touching at most theta positions per round.
inline SampleResult efficient_sample(const ConditionalOracle& oracle, const SamplerConfig& config) {
  const std::size_t theta =
      config.theta.value_or(resolve_theta(oracle.num_vars(), oracle.alphabet_size()));
  if (theta == 0) {
    throw std::invalid_argument("efficient_sample: theta must be at least 1");
  }
  return detail::guess_and_verify(oracle, config, theta);
}

inline SampleResult sample(const ConditionalOracle& oracle, const SamplerConfig& config) {
  switch (config.mode) {
    case SamplerMode::kSequential:
      return sequential_sample(oracle, config);
    case SamplerMode::kParallel:
      return parallel_sample(oracle, config);
    case SamplerMode::kEfficient:
      return efficient_sample(oracle, config);
  }
  return sequential_sample(oracle, config);
}

/// a-bar_i: the largest prefix length a < i for which re-coupling position i
/// against the first a reference values disagrees with x~_i; 0 if none.
inline std::size_t compute_abar(const ConditionalOracle& oracle, uint64_t seed,
                                std::span<const std::size_t> order, CouplerKind coupler,
                                std::size_t i) {
  if (i == 0 || i > order.size()) {
    throw std::out_of_range("compute_abar: position out of range");
  }
  const auto path = reference_path(oracle, seed, order, coupler);
  Pinning pinning(oracle.num_vars(), oracle.alphabet_size());
  for (std::size_t k = 0; k + 1 < i; ++k) {
    pinning.pin(order[k], path[k]);
  }
  const RandomTape tape = position_tape(seed, i);
  for (std::size_t a = i - 1;; --a) {
    const auto mu = oracle.conditional_marginal(order[i - 1], pinning);
    if (couple(coupler, mu, tape) != path[i - 1]) {
      return a;
    }
    if (a == 0) {
      return 0;
    }
    pinning.unpin(order[a - 1]);
  }
}

/// |{i : a-bar_i >= i - theta}| + 1 + floor(n / theta).
inline std::size_t deterministic_round_bound(const ConditionalOracle& oracle, uint64_t seed,
                                             std::span<const std::size_t> order,
                                             CouplerKind coupler, std::size_t theta) {
  if (theta == 0) {
    throw std::invalid_argument("deterministic_round_bound: theta must be at least 1");
  }
  const std::size_t n = order.size();
  std::size_t count = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i <= theta || compute_abar(oracle, seed, order, coupler, i) >= i - theta) {
      ++count;
    }
  }
  return count + 1 + n / theta;
}

constexpr std::string_view to_string(SamplerMode mode) noexcept {
  switch (mode) {
    case SamplerMode::kSequential:
      return "sequential";
    case SamplerMode::kParallel:
      return "parallel";
    case SamplerMode::kEfficient:
      return "efficient";
  }
  return "?";
}

}  // namespace parsample
