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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parsample/distribution.hpp"
#include "parsample/errors.hpp"
#include "parsample/pinning.hpp"

namespace parsample {

/// Exact access to a distribution mu on [q]^n through conditional marginals
/// P[X_i = . | X_S = sigma_S] and the equivalent counting form log P[X_S = sigma_S].
///
/// Implementations are immutable after construction; every query method is
/// const and safe to call from any number of threads.
class ConditionalOracle {
 public:
  virtual ~ConditionalOracle() = default;

  virtual std::size_t num_vars() const noexcept = 0;
  virtual std::size_t alphabet_size() const noexcept = 0;
  virtual std::string_view variant() const noexcept = 0;

  Distribution conditional_marginal(std::size_t target, const Pinning& pinning) const {
    validate(pinning);
    validate_target(target, pinning);
    return marginal_impl(target, pinning);
  }

  /// One batch of queries sharing a pinning.
  std::vector<Distribution> conditional_marginals(std::span<const std::size_t> targets,
                                                  const Pinning& pinning) const {
    validate(pinning);
    for (std::size_t t : targets) {
      validate_target(t, pinning);
    }
    return batch_impl(targets, pinning);
  }

  /// log P[X_S = sigma_S]; -infinity for zero measure.
  double joint_log_probability(const Pinning& pinning) const {
    validate(pinning);
    return log_probability_impl(pinning);
  }

 protected:
  virtual Distribution marginal_impl(std::size_t target, const Pinning& pinning) const = 0;
  virtual double log_probability_impl(const Pinning& pinning) const = 0;

  virtual std::vector<Distribution> batch_impl(std::span<const std::size_t> targets,
                                               const Pinning& pinning) const {
    std::vector<Distribution> out;
    out.reserve(targets.size());
    for (std::size_t t : targets) {
      out.push_back(marginal_impl(t, pinning));
    }
    return out;
  }

  /// Builds the conditional marginal from the counting form by ratios.
  Distribution marginal_from_counts(std::size_t target, const Pinning& pinning) const {
    Pinning extended = pinning;
    std::vector<double> logw(alphabet_size());
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < alphabet_size(); ++x) {
      extended.pin(target, x);
      logw[x] = log_probability_impl(extended);
      hi = std::max(hi, logw[x]);
    }
    if (!std::isfinite(hi)) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
    std::vector<double> w(alphabet_size());
    for (std::size_t x = 0; x < w.size(); ++x) {
      w[x] = std::exp(logw[x] - hi);
    }
    return Distribution(std::move(w));
  }

  std::string describe_zero(const Pinning& pinning) const {
    std::string s = std::string(variant()) + ": zero-measure pinning {";
    bool first = true;
    for (const auto& [i, x] : pinning.entries()) {
      if (!first) {
        s += ", ";
      }
      s += std::to_string(i) + "=" + std::to_string(x);
      first = false;
    }
    return s + "}";
  }

 private:
  void validate(const Pinning& pinning) const {
    if (pinning.num_vars() != num_vars() || pinning.alphabet_size() != alphabet_size()) {
      throw MalformedQuery(std::string(variant()) + ": pinning shape (" +
                           std::to_string(pinning.num_vars()) + ", " +
                           std::to_string(pinning.alphabet_size()) + ") does not match oracle (" +
                           std::to_string(num_vars()) + ", " + std::to_string(alphabet_size()) +
                           ")");
    }
  }

  void validate_target(std::size_t target, const Pinning& pinning) const {
    if (target >= num_vars()) {
      throw MalformedQuery(std::string(variant()) + ": target " + std::to_string(target) +
                           " out of range");
    }
    if (pinning.contains(target)) {
      throw MalformedQuery(std::string(variant()) + ": target " + std::to_string(target) +
                           " is already pinned");
    }
  }
};

using OracleInstance = std::shared_ptr<const ConditionalOracle>;

}  // namespace parsample
