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

/// n independent coordinates with the given factors.
class ProductOracle final : public ConditionalOracle {
 public:
  explicit ProductOracle(std::vector<Distribution> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) {
      throw std::invalid_argument("ProductOracle: need at least one factor");
    }
    for (const auto& f : factors_) {
      if (f.size() != factors_.front().size()) {
        throw std::invalid_argument("ProductOracle: factors over different alphabets");
      }
    }
  }

  static ProductOracle uniform(std::size_t n, std::size_t q) {
    return ProductOracle(std::vector<Distribution>(n, Distribution::uniform(q)));
  }

  std::size_t num_vars() const noexcept override { return factors_.size(); }
  std::size_t alphabet_size() const noexcept override { return factors_.front().size(); }
  std::string_view variant() const noexcept override { return "product"; }

  const std::vector<Distribution>& factors() const noexcept { return factors_; }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    require_positive(pinning);
    return factors_[target];
  }

  std::vector<Distribution> batch_impl(std::span<const std::size_t> targets,
                                       const Pinning& pinning) const override {
    require_positive(pinning);
    std::vector<Distribution> out;
    out.reserve(targets.size());
    for (std::size_t t : targets) {
      out.push_back(factors_[t]);
    }
    return out;
  }

  double log_probability_impl(const Pinning& pinning) const override {
    double lp = 0.0;
    const auto dense = pinning.dense();
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != Pinning::kFree) {
        lp += std::log(factors_[i][static_cast<std::size_t>(dense[i])]);
      }
    }
    return lp;
  }

 private:
  void require_positive(const Pinning& pinning) const {
    if (!std::isfinite(log_probability_impl(pinning))) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
  }

  std::vector<Distribution> factors_;
};

}  // namespace parsample
