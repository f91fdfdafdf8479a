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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parsample/errors.hpp"
#include "parsample/random_tape.hpp"

namespace parsample {

/// Partial assignment {coordinate -> symbol} over [q]^n.
///
/// Stored densely so that pin/unpin/lookup are O(1); iteration visits pinned
/// coordinates in increasing order.
class Pinning {
 public:
  static constexpr int32_t kFree = -1;

  Pinning(std::size_t num_vars, std::size_t alphabet_size)
      : values_(num_vars, kFree), alphabet_size_(alphabet_size) {}

  Pinning(std::size_t num_vars, std::size_t alphabet_size,
          std::initializer_list<std::pair<std::size_t, std::size_t>> entries)
      : Pinning(num_vars, alphabet_size) {
    for (const auto& [i, x] : entries) {
      if (contains(i)) {
        throw MalformedQuery("Pinning: coordinate " + std::to_string(i) + " pinned twice");
      }
      pin(i, x);
    }
  }

  std::size_t num_vars() const noexcept { return values_.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(std::size_t i) const {
    check_index(i);
    return values_[i] != kFree;
  }

  std::optional<std::size_t> get(std::size_t i) const {
    check_index(i);
    if (values_[i] == kFree) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(values_[i]);
  }

  void pin(std::size_t i, std::size_t symbol) {
    check_index(i);
    if (symbol >= alphabet_size_) {
      throw MalformedQuery("Pinning: symbol " + std::to_string(symbol) +
                           " outside alphabet of size " + std::to_string(alphabet_size_));
    }
    if (values_[i] == kFree) {
      ++count_;
    }
    values_[i] = static_cast<int32_t>(symbol);
  }

  void unpin(std::size_t i) {
    check_index(i);
    if (values_[i] != kFree) {
      --count_;
      values_[i] = kFree;
    }
  }

  void clear() {
    std::fill(values_.begin(), values_.end(), kFree);
    count_ = 0;
  }

  /// Dense view: entry i is the pinned symbol or kFree.
  std::span<const int32_t> dense() const noexcept { return values_; }

  std::vector<std::pair<std::size_t, std::size_t>> entries() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] != kFree) {
        out.emplace_back(i, static_cast<std::size_t>(values_[i]));
      }
    }
    return out;
  }

  /// Order-independent-of-history fingerprint of the assignment.
  uint64_t fingerprint() const noexcept {
    uint64_t h = mix64(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] != kFree) {
        h = derive_key(h, (static_cast<uint64_t>(i) << 32) | static_cast<uint32_t>(values_[i]));
      }
    }
    return h;
  }

  bool operator==(const Pinning& other) const noexcept {
    return values_ == other.values_ && alphabet_size_ == other.alphabet_size_;
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= values_.size()) {
      throw MalformedQuery("Pinning: coordinate " + std::to_string(i) + " outside [0, " +
                           std::to_string(values_.size()) + ")");
    }
  }

  std::vector<int32_t> values_;
  std::size_t alphabet_size_;
  std::size_t count_ = 0;
};

}  // namespace parsample
