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
#include <string>
#include <vector>

#include "parsample/oracle.hpp"
#include "parsample/random_tape.hpp"

namespace parsample {

/// Explicit probability table over [q]^n, row-major with coordinate 0 the most
/// significant digit.
///
/// When (q+1)^n is small enough, the constructor tabulates the mass of every
/// partial assignment (digit q standing for "free"), so both query forms are
/// O(q) lookups. Larger tables fall back to direct summation.
class TableOracle final : public ConditionalOracle {
 public:
  static constexpr std::size_t kMaxStates = std::size_t{1} << 24;
  static constexpr std::size_t kMaxLattice = std::size_t{1} << 21;

  TableOracle(std::size_t n, std::size_t q, std::vector<double> probs)
      : n_(n), q_(q), probs_(std::move(probs)) {
    if (n == 0 || q == 0) {
      throw std::invalid_argument("TableOracle: n and q must be positive");
    }
    const std::size_t states = checked_pow(q, n, kMaxStates);
    if (states == 0) {
      throw std::invalid_argument("TableOracle: q^n exceeds 2^24 states");
    }
    if (probs_.size() != states) {
      throw std::invalid_argument("TableOracle: expected " + std::to_string(states) +
                                  " entries, got " + std::to_string(probs_.size()));
    }
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("TableOracle: negative or non-finite entry");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("TableOracle: entries sum to " + std::to_string(total));
    }
    if (checked_pow(q + 1, n, kMaxLattice) != 0) {
      build_lattice();
    }
  }

  /// Random table with i.i.d. Exp(1) weights; `zero_fraction` of the states
  /// (chosen by the same stream) get zero mass.
  static TableOracle random(std::size_t n, std::size_t q, uint64_t seed,
                            double zero_fraction = 0.0) {
    const std::size_t states = checked_pow(q, n, kMaxStates);
    KeyedStream s(derive_key(seed, domain::kInstance));
    std::vector<double> w(states);
    double total = 0.0;
    for (auto& x : w) {
      const double e = -std::log(s.next_unit_open());
      x = s.next_unit() < zero_fraction ? 0.0 : e;
      total += x;
    }
    if (total == 0.0) {
      w[0] = 1.0;
      total = 1.0;
    }
    for (auto& x : w) {
      x /= total;
    }
    return TableOracle(n, q, std::move(w));
  }

  std::size_t num_vars() const noexcept override { return n_; }
  std::size_t alphabet_size() const noexcept override { return q_; }
  std::string_view variant() const noexcept override { return "table"; }

  const std::vector<double>& probabilities() const noexcept { return probs_; }

  /// P[X_S = sigma_S] as a plain probability.
  double mass(const Pinning& pinning) const {
    if (!lattice_.empty()) {
      return lattice_[lattice_index(pinning.dense())];
    }
    double total = 0.0;
    for_each_consistent(pinning.dense(), [&](std::size_t idx, std::span<const std::size_t>) {
      total += probs_[idx];
    });
    return total;
  }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    std::vector<double> w(q_, 0.0);
    if (!lattice_.empty()) {
      std::size_t base = lattice_index(pinning.dense());
      const std::size_t stride = lattice_stride(target);
      base -= q_ * stride;  // target digit is "free" (q) in base
      for (std::size_t x = 0; x < q_; ++x) {
        w[x] = lattice_[base + x * stride];
      }
    } else {
      for_each_consistent(pinning.dense(), [&](std::size_t idx, std::span<const std::size_t> digits) {
        w[digits[target]] += probs_[idx];
      });
    }
    double total = 0.0;
    for (double v : w) {
      total += v;
    }
    if (!(total > 0.0)) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
    return Distribution(std::move(w));
  }

  double log_probability_impl(const Pinning& pinning) const override {
    const double m = mass(pinning);
    return m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
  }

 private:
  // base^exp, or 0 when it exceeds `cap`.
  static std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
    std::size_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
      if (v > cap / base) {
        return 0;
      }
      v *= base;
    }
    return v;
  }

  std::size_t lattice_stride(std::size_t coord) const {
    std::size_t s = 1;
    for (std::size_t k = coord + 1; k < n_; ++k) {
      s *= q_ + 1;
    }
    return s;
  }

  std::size_t lattice_index(std::span<const int32_t> dense) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      idx = idx * (q_ + 1) + (dense[i] == Pinning::kFree ? q_ : static_cast<std::size_t>(dense[i]));
    }
    return idx;
  }

  void build_lattice() {
    const std::size_t base = q_ + 1;
    std::size_t size = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      size *= base;
    }
    lattice_.assign(size, 0.0);
    std::vector<std::size_t> digits(n_, 0);
    // Fully pinned entries.
    for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
      std::size_t rem = idx;
      std::size_t lidx = 0;
      std::size_t mult = 1;
      for (std::size_t k = n_; k-- > 0;) {
        lidx += (rem % q_) * mult;
        rem /= q_;
        mult *= base;
      }
      lattice_[lidx] = probs_[idx];
    }
    // Free coordinate k summed out once every coordinate after k is pinned.
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t stride = lattice_stride(k);
      for (std::size_t lidx = 0; lidx < size; ++lidx) {
        std::size_t rem = lidx;
        bool ok = true;
        std::size_t digit_k = 0;
        for (std::size_t c = n_; c-- > 0;) {
          const std::size_t d = rem % base;
          rem /= base;
          if (c == k) {
            digit_k = d;
          } else if (c > k && d == q_) {
            ok = false;
          }
        }
        if (!ok || digit_k != q_) {
          continue;
        }
        double sum = 0.0;
        const std::size_t first = lidx - q_ * stride;
        for (std::size_t x = 0; x < q_; ++x) {
          sum += lattice_[first + x * stride];
        }
        lattice_[lidx] = sum;
      }
    }
  }

  template <typename F>
  void for_each_consistent(std::span<const int32_t> dense, F&& visit) const {
    std::vector<std::size_t> digits(n_, 0);
    for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
      std::size_t rem = idx;
      bool ok = true;
      for (std::size_t k = n_; k-- > 0;) {
        digits[k] = rem % q_;
        rem /= q_;
        if (dense[k] != Pinning::kFree && static_cast<std::size_t>(dense[k]) != digits[k]) {
          ok = false;
        }
      }
      if (ok) {
        visit(idx, std::span<const std::size_t>(digits));
      }
    }
  }

  std::size_t n_;
  std::size_t q_;
  std::vector<double> probs_;
  std::vector<double> lattice_;
};

}  // namespace parsample
