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
#include <limits>
#include <numbers>
#include <vector>

#include "parsample/gf2.hpp"
#include "parsample/oracle.hpp"

namespace parsample {

/// Uniform distribution over the solutions of Bx = v in F2^n.
class AffineCodeOracle final : public ConditionalOracle {
 public:
  AffineCodeOracle(gf2::BitMatrix b, gf2::BitVector v) : b_(std::move(b)), v_(std::move(v)) {
    if (b_.cols() == 0) {
      throw std::invalid_argument("AffineCodeOracle: need at least one variable");
    }
    const auto count = gf2::solution_count_log2(b_, v_);
    if (!count) {
      throw std::invalid_argument("AffineCodeOracle: inconsistent system has empty support");
    }
    log2_support_ = *count;
  }

  std::size_t num_vars() const noexcept override { return b_.cols(); }
  std::size_t alphabet_size() const noexcept override { return 2; }
  std::string_view variant() const noexcept override { return "affine"; }

  const gf2::BitMatrix& matrix() const noexcept { return b_; }
  const gf2::BitVector& rhs() const noexcept { return v_; }
  std::size_t log2_support() const noexcept { return log2_support_; }

  /// log2 of the number of code words inside the pinned hypercube.
  std::optional<std::size_t> log2_count(const Pinning& pinning) const {
    return gf2::solve_affine_with_pinning(b_, v_, bit_pins(pinning));
  }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    auto pins = bit_pins(pinning);
    pins.push_back({target, false});
    const auto zero = gf2::solve_affine_with_pinning(b_, v_, pins);
    pins.back().value = true;
    const auto one = gf2::solve_affine_with_pinning(b_, v_, pins);
    if (!zero && !one) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
    if (zero && one) {
      const double diff = static_cast<double>(*one) - static_cast<double>(*zero);
      return Distribution({1.0, std::exp2(diff)});
    }
    return Distribution::point_mass(2, zero ? 0 : 1);
  }

  double log_probability_impl(const Pinning& pinning) const override {
    const auto count = log2_count(pinning);
    if (!count) {
      return -std::numeric_limits<double>::infinity();
    }
    return (static_cast<double>(*count) - static_cast<double>(log2_support_)) * std::numbers::ln2;
  }

 private:
  static std::vector<gf2::BitPin> bit_pins(const Pinning& pinning) {
    std::vector<gf2::BitPin> pins;
    pins.reserve(pinning.size() + 1);
    for (const auto& [i, x] : pinning.entries()) {
      pins.push_back({i, x != 0});
    }
    return pins;
  }

  gf2::BitMatrix b_;
  gf2::BitVector v_;
  std::size_t log2_support_ = 0;
};

}  // namespace parsample
