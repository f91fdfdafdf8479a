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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "parsample/matching_count.hpp"
#include "parsample/oracle.hpp"

namespace parsample {

/// Edge directions used as symbols for separator variables.
enum GridDirection : std::size_t { kLeft = 0, kRight = 1, kUp = 2, kDown = 3 };

/// Uniform perfect matching of a w x h grid, observed through one separator
/// column: variable y is the matching edge incident to vertex (column, y),
/// encoded as a GridDirection. Off-grid directions and clashing edges carry
/// zero mass.
class GridMatchingOracle final : public ConditionalOracle {
 public:
  static constexpr std::size_t kSymbols = 4;

  GridMatchingOracle(std::size_t width, std::size_t height)
      : GridMatchingOracle(width, height, width == 0 ? 0 : (width - 1) / 2) {}

  GridMatchingOracle(std::size_t width, std::size_t height, std::size_t column)
      : shape_{width, height}, column_(column) {
    if (width == 0 || height == 0 || (width * height) % 2 != 0) {
      throw std::invalid_argument("GridMatchingOracle: w*h must be positive and even");
    }
    if (width > 8 || height > 12) {
      throw std::invalid_argument("GridMatchingOracle: grid exceeds 8 x 12");
    }
    if (column >= width) {
      throw std::invalid_argument("GridMatchingOracle: separator column out of range");
    }
    total_ = matching::count_perfect_matchings(shape_);
    if (total_ == 0) {
      throw std::invalid_argument("GridMatchingOracle: grid has no perfect matching");
    }
  }

  std::size_t num_vars() const noexcept override { return shape_.height; }
  std::size_t alphabet_size() const noexcept override { return kSymbols; }
  std::string_view variant() const noexcept override { return "grid_matching"; }

  const matching::GridShape& shape() const noexcept { return shape_; }
  std::size_t column() const noexcept { return column_; }
  uint64_t total_matchings() const noexcept { return total_; }

  /// Other endpoint of the edge leaving separator vertex y in direction d.
  std::optional<std::size_t> neighbor(std::size_t y, std::size_t d) const {
    switch (d) {
      case kLeft:
        if (column_ == 0) return std::nullopt;
        return shape_.id(column_ - 1, y);
      case kRight:
        if (column_ + 1 >= shape_.width) return std::nullopt;
        return shape_.id(column_ + 1, y);
      case kUp:
        if (y == 0) return std::nullopt;
        return shape_.id(column_, y - 1);
      case kDown:
        if (y + 1 >= shape_.height) return std::nullopt;
        return shape_.id(column_, y + 1);
      default:
        return std::nullopt;
    }
  }

  /// Perfect matchings containing every pinned edge.
  uint64_t count(const Pinning& pinning) const {
    std::vector<int64_t> partner(shape_.vertices(), -1);
    if (!apply(pinning.dense(), partner)) {
      return 0;
    }
    return count_with(partner);
  }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    std::vector<int64_t> partner(shape_.vertices(), -1);
    if (!apply(pinning.dense(), partner)) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
    std::vector<double> w(kSymbols, 0.0);
    const std::size_t v = shape_.id(column_, target);
    for (std::size_t d = 0; d < kSymbols; ++d) {
      const auto u = neighbor(target, d);
      if (!u) {
        continue;
      }
      auto trial = partner;
      if (!add_edge(trial, v, *u)) {
        continue;
      }
      w[d] = static_cast<double>(count_with(trial));
    }
    double total = 0.0;
    for (double x : w) {
      total += x;
    }
    if (!(total > 0.0)) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
    return Distribution(std::move(w));
  }

  double log_probability_impl(const Pinning& pinning) const override {
    const uint64_t c = count(pinning);
    if (c == 0) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::log(static_cast<double>(c)) - std::log(static_cast<double>(total_));
  }

 private:
  // Records edge {v, u}; false when either endpoint is already matched elsewhere.
  static bool add_edge(std::vector<int64_t>& partner, std::size_t v, std::size_t u) {
    const auto sv = static_cast<int64_t>(v);
    const auto su = static_cast<int64_t>(u);
    if (partner[v] == su && partner[u] == sv) {
      return true;
    }
    if (partner[v] != -1 || partner[u] != -1) {
      return false;
    }
    partner[v] = su;
    partner[u] = sv;
    return true;
  }

  bool apply(std::span<const int32_t> dense, std::vector<int64_t>& partner) const {
    for (std::size_t y = 0; y < dense.size(); ++y) {
      if (dense[y] == Pinning::kFree) {
        continue;
      }
      const auto u = neighbor(y, static_cast<std::size_t>(dense[y]));
      if (!u || !add_edge(partner, shape_.id(column_, y), *u)) {
        return false;
      }
    }
    return true;
  }

  uint64_t count_with(const std::vector<int64_t>& partner) const {
    std::vector<bool> removed(partner.size());
    for (std::size_t i = 0; i < partner.size(); ++i) {
      removed[i] = partner[i] != -1;
    }
    return matching::count_perfect_matchings(shape_, removed);
  }

  matching::GridShape shape_;
  std::size_t column_;
  uint64_t total_ = 0;
};

}  // namespace parsample
