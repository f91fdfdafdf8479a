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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parsample::matching {

__extension__ using i128 = __int128;

/// Vertices of a w x h grid graph, column-major: (x, y) -> x * h + y.
struct GridShape {
  std::size_t width;
  std::size_t height;

  std::size_t vertices() const noexcept { return width * height; }
  std::size_t id(std::size_t x, std::size_t y) const noexcept { return x * height + y; }
};

/// Number of perfect matchings of the grid with the vertices flagged in
/// `removed` deleted, by a broken-profile sweep over columns.
///
/// Exact in 64 bits for width <= 8 and height <= 12.
inline uint64_t count_perfect_matchings(const GridShape& g, const std::vector<bool>& removed) {
  if (g.height == 0 || g.width == 0) {
    return 1;
  }
  if (g.height > 20) {
    throw std::invalid_argument("count_perfect_matchings: height above 20 not supported");
  }
  if (removed.size() != g.vertices()) {
    throw std::invalid_argument("count_perfect_matchings: removed mask has wrong size");
  }
  const std::size_t h = g.height;
  const std::size_t states = std::size_t{1} << h;
  std::vector<uint64_t> cur(states, 0);
  std::vector<uint64_t> next(states, 0);
  cur[0] = 1;
  // Bit y' of the profile: for y' < y the cell (x+1, y') is already covered,
  // for y' >= y the cell (x, y') is.
  for (std::size_t x = 0; x < g.width; ++x) {
    for (std::size_t y = 0; y < h; ++y) {
      std::fill(next.begin(), next.end(), 0);
      const uint64_t bit = uint64_t{1} << y;
      const bool gone = removed[g.id(x, y)];
      const bool right_ok = x + 1 < g.width && !removed[g.id(x + 1, y)];
      const bool down_ok = y + 1 < h && !removed[g.id(x, y + 1)];
      for (std::size_t s = 0; s < states; ++s) {
        const uint64_t c = cur[s];
        if (c == 0) {
          continue;
        }
        if (gone) {
          if (!(s & bit)) {
            next[s] += c;
          }
          continue;
        }
        if (s & bit) {
          next[s & ~bit] += c;
          continue;
        }
        if (right_ok) {
          next[s | bit] += c;
        }
        if (down_ok && !(s & (bit << 1))) {
          next[s | (bit << 1)] += c;
        }
      }
      cur.swap(next);
    }
  }
  return cur[0];
}

inline uint64_t count_perfect_matchings(const GridShape& g) {
  return count_perfect_matchings(g, std::vector<bool>(g.vertices(), false));
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
inline i128 bareiss_determinant(std::vector<std::vector<int64_t>> m) {
  const std::size_t n = m.size();
  if (n == 0) {
    return 1;
  }
  i128 sign = 1;
  i128 prev = 1;
  std::vector<std::vector<i128>> a(n, std::vector<i128>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = m[i][j];
    }
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && a[swap_with][k] == 0) {
        ++swap_with;
      }
      if (swap_with == n) {
        return 0;
      }
      std::swap(a[k], a[swap_with]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Kasteleyn-oriented signed adjacency of the full grid: horizontal edges
/// point to +x, vertical edges point to +y in even columns and -y in odd ones,
/// so every unit face has an odd number of clockwise edges.
inline std::vector<std::vector<int64_t>> kasteleyn_matrix(const GridShape& g) {
  const std::size_t n = g.vertices();
  std::vector<std::vector<int64_t>> k(n, std::vector<int64_t>(n, 0));
  auto orient = [&](std::size_t from, std::size_t to) {
    k[from][to] = 1;
    k[to][from] = -1;
  };
  for (std::size_t x = 0; x < g.width; ++x) {
    for (std::size_t y = 0; y < g.height; ++y) {
      if (x + 1 < g.width) {
        orient(g.id(x, y), g.id(x + 1, y));
      }
      if (y + 1 < g.height) {
        if (x % 2 == 0) {
          orient(g.id(x, y), g.id(x, y + 1));
        } else {
          orient(g.id(x, y + 1), g.id(x, y));
        }
      }
    }
  }
  return k;
}

/// |Pfaffian| of the Kasteleyn matrix, i.e. the perfect-matching count of the
/// unpinned grid via FKT. Limited to grids whose minors fit in 128 bits.
inline uint64_t fkt_count(const GridShape& g) {
  if (g.vertices() > 64) {
    throw std::invalid_argument("fkt_count: grid larger than 64 vertices");
  }
  if (g.vertices() % 2 != 0) {
    return 0;
  }
  const i128 det = bareiss_determinant(kasteleyn_matrix(g));
  if (det < 0) {
    throw std::logic_error("fkt_count: negative determinant of a skew-symmetric matrix");
  }
  // Integer square root.
  i128 lo = 0;
  i128 hi = 1;
  while (hi * hi <= det) {
    hi *= 2;
  }
  while (hi - lo > 1) {
    const i128 mid = (lo + hi) / 2;
    (mid * mid <= det ? lo : hi) = mid;
  }
  if (lo * lo != det) {
    throw std::logic_error("fkt_count: determinant is not a perfect square");
  }
  return static_cast<uint64_t>(lo);
}

}  // namespace parsample::matching
