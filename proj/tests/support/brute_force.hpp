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

// Slow, obviously-correct reference computations used as expected values.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace bf {

// Configurations over [q]^n, coordinate 0 most significant.
inline std::vector<std::size_t> digits(std::size_t s, std::size_t n, std::size_t q) {
  std::vector<std::size_t> x(n);
  for (std::size_t i = n; i-- > 0;) {
    x[i] = s % q;
    s /= q;
  }
  return x;
}

inline std::size_t states(std::size_t n, std::size_t q) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < n; ++i) s *= q;
  return s;
}

using Partial = std::vector<int>;  // -1 = free

inline bool consistent(const std::vector<std::size_t>& x, const Partial& pins) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (pins[i] >= 0 && static_cast<std::size_t>(pins[i]) != x[i]) return false;
  }
  return true;
}

inline double mass(const std::vector<double>& joint, std::size_t n, std::size_t q,
                   const Partial& pins) {
  double m = 0.0;
  for (std::size_t s = 0; s < joint.size(); ++s) {
    if (consistent(digits(s, n, q), pins)) m += joint[s];
  }
  return m;
}

inline std::optional<std::vector<double>> marginal(const std::vector<double>& joint, std::size_t n,
                                                   std::size_t q, std::size_t target,
                                                   const Partial& pins) {
  std::vector<double> out(q, 0.0);
  for (std::size_t s = 0; s < joint.size(); ++s) {
    const auto x = digits(s, n, q);
    if (consistent(x, pins)) out[x[target]] += joint[s];
  }
  double t = 0.0;
  for (double v : out) t += v;
  if (t <= 0.0) return std::nullopt;
  for (double& v : out) v /= t;
  return out;
}

inline std::vector<double> markov_joint(const std::vector<double>& init,
                                        const std::vector<std::vector<double>>& trans,
                                        std::size_t n, std::size_t q) {
  std::vector<double> joint(states(n, q));
  for (std::size_t s = 0; s < joint.size(); ++s) {
    const auto x = digits(s, n, q);
    double p = init[x[0]];
    for (std::size_t k = 0; k + 1 < n; ++k) p *= trans[k][x[k] * q + x[k + 1]];
    joint[s] = p;
  }
  return joint;
}

inline std::vector<double> paircopy_joint(std::size_t n, std::size_t q) {
  std::vector<double> joint(states(n, q));
  double per = 1.0;
  for (std::size_t k = 0; k < n / 2; ++k) per /= static_cast<double>(q);
  for (std::size_t s = 0; s < joint.size(); ++s) {
    const auto x = digits(s, n, q);
    bool ok = true;
    for (std::size_t k = 0; k + 1 < n; k += 2) ok = ok && x[k] == x[k + 1];
    joint[s] = ok ? per : 0.0;
  }
  return joint;
}

// Bits as x[j] for j < n; rows given as explicit 0/1 vectors.
inline std::vector<uint64_t> affine_solutions(const std::vector<std::vector<int>>& rows,
                                              const std::vector<int>& rhs, std::size_t n) {
  std::vector<uint64_t> sols;
  for (uint64_t x = 0; x < (uint64_t{1} << n); ++x) {
    bool ok = true;
    for (std::size_t r = 0; ok && r < rows.size(); ++r) {
      int acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc ^= rows[r][j] & static_cast<int>((x >> j) & 1U);
      ok = acc == rhs[r];
    }
    if (ok) sols.push_back(x);
  }
  return sols;
}

// Perfect matchings of a w x h grid minus `removed`, vertex id x*h + y.
// Each matching is a partner array (-1 for removed vertices).
inline std::vector<std::vector<int>> grid_matchings(std::size_t w, std::size_t h,
                                                    const std::vector<bool>& removed) {
  const std::size_t v = w * h;
  std::vector<std::vector<int>> out;
  std::vector<int> partner(v, -1);
  std::vector<bool> used(removed);
  std::function<void()> rec = [&] {
    std::size_t first = v;
    for (std::size_t i = 0; i < v; ++i) {
      if (!used[i]) {
        first = i;
        break;
      }
    }
    if (first == v) {
      out.push_back(partner);
      return;
    }
    const std::size_t x = first / h;
    const std::size_t y = first % h;
    std::vector<std::size_t> nbrs;
    if (y + 1 < h) nbrs.push_back(first + 1);
    if (x + 1 < w) nbrs.push_back(first + h);
    for (auto u : nbrs) {
      if (used[u]) continue;
      used[first] = used[u] = true;
      partner[first] = static_cast<int>(u);
      partner[u] = static_cast<int>(first);
      rec();
      partner[first] = partner[u] = -1;
      used[first] = used[u] = false;
    }
  };
  rec();
  return out;
}

// Law of the incident-edge directions (0 left, 1 right, 2 up, 3 down) along
// one column under the uniform perfect matching. Indexed like digits().
inline std::vector<double> grid_column_joint(std::size_t w, std::size_t h, std::size_t col) {
  const auto ms = grid_matchings(w, h, std::vector<bool>(w * h, false));
  std::vector<double> joint(states(h, 4), 0.0);
  for (const auto& m : ms) {
    std::size_t s = 0;
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t id = col * h + y;
      const auto p = static_cast<std::size_t>(m[id]);
      std::size_t d = 0;
      if (p + h == id) d = 0;
      else if (p == id + h) d = 1;
      else if (p + 1 == id) d = 2;
      else d = 3;
      s = s * 4 + d;
    }
    joint[s] += 1.0 / static_cast<double>(ms.size());
  }
  return joint;
}

inline double tv(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2.0;
}

inline std::vector<double> frequencies(const std::vector<std::size_t>& counts) {
  double t = 0.0;
  for (auto c : counts) t += static_cast<double>(c);
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / t;
  return f;
}

// Index of a sampled vector under the digits() convention.
inline std::size_t encode(const std::vector<std::size_t>& x, std::size_t q) {
  std::size_t s = 0;
  for (auto v : x) s = s * q + v;
  return s;
}

}  // namespace bf
