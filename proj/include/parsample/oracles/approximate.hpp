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
#include <numbers>
#include <stdexcept>

#include "parsample/oracle.hpp"
#include "parsample/random_tape.hpp"

namespace parsample {

/// Noisy counting oracle around an exact one.
///
/// Each count P[X_S = y] is reported as inner * (1 + epsilon * U) with U
/// uniform on [-1, 1]; with probability delta the report is instead
/// inner * 2. Both U and the failure event are pure functions of
/// (seed, pinning), so identical queries always agree. Conditional marginals
/// are formed from the perturbed counts of the extended pinnings.
class ApproximateOracle final : public ConditionalOracle {
 public:
  ApproximateOracle(OracleInstance inner, double epsilon, double delta, uint64_t seed)
      : inner_(std::move(inner)), epsilon_(epsilon), delta_(delta), seed_(seed) {
    if (!inner_) {
      throw std::invalid_argument("ApproximateOracle: null inner oracle");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
      throw std::invalid_argument("ApproximateOracle: epsilon must lie in [0, 1)");
    }
    if (!(delta >= 0.0 && delta < 1.0)) {
      throw std::invalid_argument("ApproximateOracle: delta must lie in [0, 1)");
    }
  }

  std::size_t num_vars() const noexcept override { return inner_->num_vars(); }
  std::size_t alphabet_size() const noexcept override { return inner_->alphabet_size(); }
  std::string_view variant() const noexcept override { return "approximate"; }

  const OracleInstance& inner() const noexcept { return inner_; }
  double epsilon() const noexcept { return epsilon_; }
  double delta() const noexcept { return delta_; }
  uint64_t seed() const noexcept { return seed_; }

  /// Multiplicative factor applied to the count of this pinning.
  double noise_factor(const Pinning& pinning) const {
    KeyedStream s(derive_key(derive_key(seed_, domain::kNoise), pinning.fingerprint()));
    const double fail = s.next_unit();
    const double u = 2.0 * s.next_unit() - 1.0;
    if (fail < delta_) {
      return 2.0;
    }
    return 1.0 + epsilon_ * u;
  }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    if (epsilon_ == 0.0 && delta_ == 0.0) {
      return inner_->conditional_marginal(target, pinning);
    }
    return marginal_from_counts(target, pinning);
  }

  double log_probability_impl(const Pinning& pinning) const override {
    const double exact = inner_->joint_log_probability(pinning);
    if (!std::isfinite(exact) || (epsilon_ == 0.0 && delta_ == 0.0)) {
      return exact;
    }
    return exact + std::log(noise_factor(pinning));
  }

 private:
  OracleInstance inner_;
  double epsilon_;
  double delta_;
  uint64_t seed_;
};

inline OracleInstance approximate_wrap(OracleInstance inner, double epsilon, double delta,
                                       uint64_t seed) {
  return std::make_shared<ApproximateOracle>(std::move(inner), epsilon, delta, seed);
}

}  // namespace parsample
