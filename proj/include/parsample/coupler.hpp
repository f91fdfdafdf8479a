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

#include <concepts>
#include <cstddef>
#include <limits>
#include <string_view>
#include <utility>

#include "parsample/distribution.hpp"
#include "parsample/random_tape.hpp"

namespace parsample {

enum class CouplerKind { kMinCoupler, kGumbelTrick };

/// Anything that yields an unbounded sequence of uniform pairs on [q] x [0,1].
template <typename S>
concept PairSource = requires(S s, std::size_t q) {
  { s.next_pair(q) } -> std::convertible_to<std::pair<std::size_t, double>>;
};

/// Anything that attaches an Exp(1) variate to every symbol.
template <typename S>
concept ExponentialSource = requires(const S s, std::size_t x) {
  { s.exponential(x) } -> std::convertible_to<double>;
};

/// Rejection-sampling coupler: scan the pairs (x_k, p_k) and return the first
/// x_k with p_k <= mu(x_k). Terminates with probability one; the accepted
/// index is geometric with mean q.
template <PairSource Source>
std::size_t min_coupler(const Distribution& mu, Source&& pairs) {
  const std::size_t q = mu.size();
  while (true) {
    const auto [x, p] = pairs.next_pair(q);
    if (p <= mu[x]) {
      return x;
    }
  }
}

inline std::size_t min_coupler(const Distribution& mu, const RandomTape& tape) {
  return min_coupler(mu, tape.pairs());
}

/// argmin_x r_x / mu(x) with shared exponentials r_x; zero-mass symbols never
/// win and ties go to the lowest symbol.
template <ExponentialSource Source>
std::size_t gumbel_trick(const Distribution& mu, const Source& exponentials) {
  std::size_t best = 0;
  double best_ratio = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (mu[x] <= 0.0) {
      continue;
    }
    const double ratio = exponentials.exponential(x) / mu[x];
    if (!found || ratio < best_ratio) {
      best = x;
      best_ratio = ratio;
      found = true;
    }
  }
  return best;
}

inline std::size_t couple(CouplerKind kind, const Distribution& mu,
                          const RandomTape& tape) {
  switch (kind) {
    case CouplerKind::kMinCoupler:
      return min_coupler(mu, tape);
    case CouplerKind::kGumbelTrick:
      return gumbel_trick(mu, tape);
  }
  return 0;
}

constexpr std::string_view to_string(CouplerKind kind) noexcept {
  return kind == CouplerKind::kMinCoupler ? "min" : "gumbel";
}

}  // namespace parsample
