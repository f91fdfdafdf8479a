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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace parsample {

/// A probability vector over the alphabet [q] = {0, ..., q-1}.
///
/// Entries are validated and renormalized on construction, so every live
/// Distribution sums to one up to rounding.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
      throw std::invalid_argument("Distribution: alphabet must be non-empty");
    }
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("Distribution: invalid entry " +
                                    std::to_string(p));
      }
      total += p;
    }
    if (!(total > 0.0)) {
      throw std::invalid_argument("Distribution: zero total mass");
    }
    for (double& p : probs_) {
      p /= total;
    }
  }

  static Distribution point_mass(std::size_t q, std::size_t symbol) {
    std::vector<double> p(q, 0.0);
    p.at(symbol) = 1.0;
    return Distribution(std::move(p));
  }

  static Distribution uniform(std::size_t q) {
    return Distribution(std::vector<double>(q, 1.0));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t x) const noexcept { return probs_[x]; }
  std::span<const double> probs() const noexcept { return probs_; }

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> probs_;
};

}  // namespace parsample
