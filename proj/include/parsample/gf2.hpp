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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parsample::gf2 {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept {
  return (bits + kWordBits - 1) / kWordBits;
}

/// Packed vector over F2; bit j lives in word j / 64 at position j % 64.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

  std::size_t size() const noexcept { return len_; }

  bool get(std::size_t j) const { return (words_.at(j / kWordBits) >> (j % kWordBits)) & 1U; }
  void set(std::size_t j, bool bit) {
    const uint64_t mask = uint64_t{1} << (j % kWordBits);
    auto& w = words_.at(j / kWordBits);
    w = bit ? (w | mask) : (w & ~mask);
  }

  std::span<uint64_t> words() noexcept { return words_; }
  std::span<const uint64_t> words() const noexcept { return words_; }

  bool operator==(const BitVector&) const = default;

 private:
  std::size_t len_ = 0;
  std::vector<uint64_t> words_;
};

/// Row-major packed matrix over F2.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * stride_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m.set(i, i, true);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    check(r, c);
    return (words_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool bit) {
    check(r, c);
    const uint64_t mask = uint64_t{1} << (c % kWordBits);
    auto& w = words_[r * stride_ + c / kWordBits];
    w = bit ? (w | mask) : (w & ~mask);
  }

  std::span<const uint64_t> row(std::size_t r) const {
    return std::span<const uint64_t>(words_).subspan(r * stride_, stride_);
  }
  std::span<uint64_t> row(std::size_t r) {
    return std::span<uint64_t>(words_).subspan(r * stride_, stride_);
  }

  bool operator==(const BitMatrix&) const = default;

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw std::out_of_range("BitMatrix index out of range");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<uint64_t> words_;
};

namespace detail {

// Row-reduces an augmented system in place. Each row holds `cols` coefficient
// bits followed by one right-hand-side bit. Returns (rank of the coefficient
// part, whether a 0 = 1 row survived).
inline std::pair<std::size_t, bool> reduce(std::vector<std::vector<uint64_t>>& rows,
                                           std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    const std::size_t w = c / kWordBits;
    const uint64_t mask = uint64_t{1} << (c % kWordBits);
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot][w] & mask)) {
      ++pivot;
    }
    if (pivot == rows.size()) {
      continue;
    }
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && (rows[r][w] & mask)) {
        for (std::size_t k = w; k < rows[r].size(); ++k) {
          rows[r][k] ^= rows[rank][k];
        }
      }
    }
    ++rank;
  }
  const std::size_t bw = cols / kWordBits;
  const uint64_t bmask = uint64_t{1} << (cols % kWordBits);
  bool inconsistent = false;
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (rows[r][bw] & bmask) {
      inconsistent = true;
      break;
    }
  }
  return {rank, inconsistent};
}

inline std::vector<std::vector<uint64_t>> augment(const BitMatrix& a, const BitVector* b) {
  const std::size_t width = words_for(a.cols() + 1);
  std::vector<std::vector<uint64_t>> rows(a.rows(), std::vector<uint64_t>(width, 0));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto src = a.row(r);
    std::copy(src.begin(), src.end(), rows[r].begin());
    if (b != nullptr && b->get(r)) {
      rows[r][a.cols() / kWordBits] |= uint64_t{1} << (a.cols() % kWordBits);
    }
  }
  return rows;
}

}  // namespace detail

/// Row rank over F2.
inline std::size_t rank(const BitMatrix& a) {
  auto rows = detail::augment(a, nullptr);
  return detail::reduce(rows, a.cols()).first;
}

/// log2 of the number of solutions of Ax = b, or nullopt when inconsistent.
inline std::optional<std::size_t> solution_count_log2(const BitMatrix& a, const BitVector& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("solution_count_log2: A has " + std::to_string(a.rows()) +
                                " rows but b has length " + std::to_string(b.size()));
  }
  auto rows = detail::augment(a, &b);
  const auto [r, inconsistent] = detail::reduce(rows, a.cols());
  if (inconsistent) {
    return std::nullopt;
  }
  return a.cols() - r;
}

/// A fixed coordinate value used to restrict Ax = b to a sub-hypercube.
struct BitPin {
  std::size_t index;
  bool value;
};

/// Solution count of Ax = b inside {x : x_j = y_j for each pin}, obtained by
/// stacking the unit equations e_j^T x = y_j under A.
inline std::optional<std::size_t> solve_affine_with_pinning(const BitMatrix& a, const BitVector& b,
                                                            std::span<const BitPin> pins) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("solve_affine_with_pinning: dimension mismatch");
  }
  std::vector<bool> seen(a.cols(), false);
  for (const auto& pin : pins) {
    if (pin.index >= a.cols()) {
      throw std::invalid_argument("solve_affine_with_pinning: pin index " +
                                  std::to_string(pin.index) + " out of range");
    }
    if (seen[pin.index]) {
      throw std::invalid_argument("solve_affine_with_pinning: duplicate pin index " +
                                  std::to_string(pin.index));
    }
    seen[pin.index] = true;
  }
  BitMatrix stacked(a.rows() + pins.size(), a.cols());
  BitVector rhs(a.rows() + pins.size());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto src = a.row(r);
    std::copy(src.begin(), src.end(), stacked.row(r).begin());
    rhs.set(r, b.get(r));
  }
  for (std::size_t k = 0; k < pins.size(); ++k) {
    stacked.set(a.rows() + k, pins[k].index, true);
    rhs.set(a.rows() + k, pins[k].value);
  }
  return solution_count_log2(stacked, rhs);
}

// Hex form: the integer sum_j bit_j * 2^j, most significant digit first,
// zero-padded to ceil(len / 4) digits.

inline std::string to_hex(const BitVector& v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (v.size() + 3) / 4;
  std::string out(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    unsigned nibble = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t j = 4 * d + k;
      if (j < v.size() && v.get(j)) {
        nibble |= 1U << k;
      }
    }
    out[digits - 1 - d] = kDigits[nibble];
  }
  return out;
}

inline BitVector from_hex(std::string_view hex, std::size_t len) {
  BitVector v(len);
  const std::size_t digits = hex.size();
  for (std::size_t d = 0; d < digits; ++d) {
    const char ch = hex[digits - 1 - d];
    unsigned nibble = 0;
    if (ch >= '0' && ch <= '9') {
      nibble = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      nibble = static_cast<unsigned>(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      nibble = static_cast<unsigned>(ch - 'A' + 10);
    } else {
      throw std::invalid_argument("from_hex: bad digit '" + std::string(1, ch) + "'");
    }
    for (std::size_t k = 0; k < 4; ++k) {
      if (nibble & (1U << k)) {
        const std::size_t j = 4 * d + k;
        if (j >= len) {
          throw std::invalid_argument("from_hex: value wider than " + std::to_string(len) +
                                      " bits");
        }
        v.set(j, true);
      }
    }
  }
  return v;
}

inline BitVector row_vector(const BitMatrix& a, std::size_t r) {
  BitVector v(a.cols());
  const auto src = a.row(r);
  std::copy(src.begin(), src.end(), v.words().begin());
  return v;
}

inline void set_row(BitMatrix& a, std::size_t r, const BitVector& v) {
  if (v.size() != a.cols()) {
    throw std::invalid_argument("set_row: width mismatch");
  }
  const auto src = v.words();
  std::copy(src.begin(), src.end(), a.row(r).begin());
}

}  // namespace parsample::gf2
