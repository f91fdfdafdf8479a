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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace parsample {

// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr uint64_t derive_key(uint64_t key, uint64_t salt) noexcept {
  return mix64(key ^ mix64(salt + 0x632be59bd9b4e019ULL));
}

// Domain tags separating the independent streams carved out of one seed.
namespace domain {
inline constexpr uint64_t kMinCoupler = 0x4d494e43504c5231ULL;
inline constexpr uint64_t kGumbel = 0x47554d42454c5431ULL;
inline constexpr uint64_t kPermutation = 0x5045524d55544531ULL;
inline constexpr uint64_t kInstance = 0x494e5354414e4331ULL;
inline constexpr uint64_t kNoise = 0x4e4f495345533031ULL;
inline constexpr uint64_t kTrial = 0x545249414c533031ULL;
}  // namespace domain

/// Counter-based stream of 64-bit words. The i-th word is a pure function of
/// (key, i), so a stream can be replayed from any position without state.
class KeyedStream {
 public:
  constexpr explicit KeyedStream(uint64_t key) noexcept : key_(key) {}

  constexpr uint64_t word(uint64_t index) const noexcept {
    return derive_key(key_, index);
  }

  uint64_t next_u64() noexcept { return word(counter_++); }

  /// Uniform integer in [0, bound) by rejecting the top partial range.
  uint64_t next_below(uint64_t bound) noexcept {
    if (bound <= 1) {
      return 0;
    }
    const uint64_t rem = (0 - bound) % bound;  // 2^64 mod bound
    while (true) {
      const uint64_t w = next_u64();
      if (rem == 0 || w <= std::numeric_limits<uint64_t>::max() - rem) {
        return w % bound;
      }
    }
  }

  /// Uniform on (0, 1] with 53-bit resolution.
  double next_unit_closed() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1).
  double next_unit_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  uint64_t position() const noexcept { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

/// Per-coordinate shared randomness u_i. Everything drawn from a tape is a
/// pure function of (seed, coordinate), so the same tape can be consulted any
/// number of times across rounds and samplers.
class RandomTape {
 public:
  constexpr RandomTape(uint64_t seed, uint64_t coordinate) noexcept
      : seed_(seed), coordinate_(coordinate) {}

  constexpr uint64_t seed() const noexcept { return seed_; }
  constexpr uint64_t coordinate() const noexcept { return coordinate_; }

  uint64_t stream_key(uint64_t domain_tag) const noexcept {
    return derive_key(derive_key(seed_, domain_tag), coordinate_);
  }

  KeyedStream stream(uint64_t domain_tag) const noexcept {
    return KeyedStream(stream_key(domain_tag));
  }

  /// Lazy source of the i.i.d. uniform pairs (x_k, p_k) on [q] x (0,1].
  class PairStream {
   public:
    explicit PairStream(KeyedStream s) noexcept : stream_(s) {}
    std::pair<std::size_t, double> next_pair(std::size_t q) noexcept {
      const auto x = static_cast<std::size_t>(stream_.next_below(q));
      const double p = stream_.next_unit_closed();
      return {x, p};
    }

   private:
    KeyedStream stream_;
  };

  PairStream pairs() const noexcept {
    return PairStream(stream(domain::kMinCoupler));
  }

  /// Exp(1) variate attached to symbol x; the same symbol always sees the same
  /// variate regardless of the distribution it is coupled against.
  double exponential(std::size_t symbol) const noexcept {
    KeyedStream s(derive_key(stream_key(domain::kGumbel), symbol));
    return -std::log(s.next_unit_open());
  }

 private:
  uint64_t seed_;
  uint64_t coordinate_;
};

/// Uniform random permutation of [0, n) by Fisher-Yates over a keyed stream.
inline std::vector<std::size_t> keyed_permutation(std::size_t n,
                                                  uint64_t seed,
                                                  uint64_t tag = domain::kPermutation) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  KeyedStream s(derive_key(seed, tag));
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(s.next_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace parsample
