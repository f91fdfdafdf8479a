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
#include <vector>

#include "parsample/oracle.hpp"

namespace parsample {

/// Coordinates (0,1), (2,3), ...: the first of each pair is uniform on [q] and
/// independent of everything else, the second copies it.
class PairCopyOracle final : public ConditionalOracle {
 public:
  PairCopyOracle(std::size_t n, std::size_t q) : n_(n), q_(q) {
    if (n == 0 || n % 2 != 0) {
      throw std::invalid_argument("PairCopyOracle: n must be positive and even");
    }
    if (q == 0) {
      throw std::invalid_argument("PairCopyOracle: q must be positive");
    }
  }

  std::size_t num_vars() const noexcept override { return n_; }
  std::size_t alphabet_size() const noexcept override { return q_; }
  std::string_view variant() const noexcept override { return "paircopy"; }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    require_positive(pinning);
    return local(target, pinning);
  }

  std::vector<Distribution> batch_impl(std::span<const std::size_t> targets,
                                       const Pinning& pinning) const override {
    require_positive(pinning);
    std::vector<Distribution> out;
    out.reserve(targets.size());
    for (std::size_t t : targets) {
      out.push_back(local(t, pinning));
    }
    return out;
  }

  double log_probability_impl(const Pinning& pinning) const override {
    const auto dense = pinning.dense();
    double lp = 0.0;
    for (std::size_t i = 0; i < n_; i += 2) {
      const int32_t a = dense[i];
      const int32_t b = dense[i + 1];
      if (a != Pinning::kFree && b != Pinning::kFree && a != b) {
        return -std::numeric_limits<double>::infinity();
      }
      if (a != Pinning::kFree || b != Pinning::kFree) {
        lp -= std::log(static_cast<double>(q_));
      }
    }
    return lp;
  }

 private:
  Distribution local(std::size_t target, const Pinning& pinning) const {
    const int32_t partner = pinning.dense()[target ^ 1U];
    if (partner == Pinning::kFree) {
      return Distribution::uniform(q_);
    }
    return Distribution::point_mass(q_, static_cast<std::size_t>(partner));
  }

  void require_positive(const Pinning& pinning) const {
    if (!std::isfinite(log_probability_impl(pinning))) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
  }

  std::size_t n_;
  std::size_t q_;
};

}  // namespace parsample
