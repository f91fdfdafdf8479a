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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parsample/errors.hpp"
#include "parsample/gf2.hpp"
#include "parsample/oracle.hpp"
#include "parsample/pinning.hpp"
#include "parsample/random_tape.hpp"

namespace parsample::hardness {

/// Explicit (r, m, a_1..a_r) replacing the asymptotic formulas.
struct Override {
  std::size_t r = 0;
  std::size_t m = 0;
  std::vector<std::size_t> a;
};

/// Product of per-block random linear codes over a random partition of [n].
///
/// Block i accepts x_{S_i} iff B_i x_{S_i} = v_i; B_i has |S_i| - a_i
/// independent rows, so block i has exactly 2^{a_i} accepted strings.
struct HardnessInstance {
  std::size_t n = 0;
  double c = 0.0;
  std::size_t r = 0;
  std::size_t m = 0;
  uint64_t seed = 0;
  bool overridden = false;
  std::vector<std::vector<std::size_t>> blocks;  // sorted coordinates
  std::vector<std::size_t> a;
  std::vector<gf2::BitMatrix> codes;
  std::vector<gf2::BitVector> targets;
  std::vector<std::size_t> rank_rejections;  // resampled B_i per block

  /// Block and in-block column of every coordinate.
  std::vector<std::pair<std::size_t, std::size_t>> locate() const {
    std::vector<std::pair<std::size_t, std::size_t>> where(n);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (std::size_t j = 0; j < blocks[i].size(); ++j) {
        where[blocks[i][j]] = {i, j};
      }
    }
    return where;
  }

  std::size_t log2_support() const {
    std::size_t s = 0;
    for (auto ai : a) {
      s += ai;
    }
    return s;
  }
};

struct Parameters {
  std::size_t r = 0;
  std::size_t m = 0;
  std::vector<std::size_t> a;
};

/// r = (1/4)(n / ((c+2) ln n))^{1/3}, m = n / r,
/// a_i = i * 12 n^{1/3} ((c+2) ln n)^{2/3}; all floored, r at least 1.
inline Parameters asymptotic_parameters(std::size_t n, double c) {
  if (n < 2) {
    throw ParameterInfeasible("n >= 2 required (ln n must be positive)");
  }
  if (!(c > 0.0)) {
    throw ParameterInfeasible("c > 0 required");
  }
  const double nn = static_cast<double>(n);
  const double lg = (c + 2.0) * std::log(nn);
  Parameters p;
  p.r = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(0.25 * std::cbrt(nn / lg))));
  p.m = n / p.r;
  const double step = 12.0 * std::cbrt(nn) * std::pow(lg, 2.0 / 3.0);
  for (std::size_t i = 1; i <= p.r; ++i) {
    p.a.push_back(static_cast<std::size_t>(std::floor(static_cast<double>(i) * step)));
  }
  return p;
}

inline void validate(std::size_t n, const Parameters& p) {
  if (p.r == 0 || p.m == 0) {
    throw ParameterInfeasible("r >= 1 and m >= 1 required");
  }
  if (p.m != n / p.r) {
    throw ParameterInfeasible("m must equal floor(n / r) = " + std::to_string(n / p.r));
  }
  if (p.a.size() != p.r) {
    throw ParameterInfeasible("expected " + std::to_string(p.r) + " values of a_i");
  }
  for (std::size_t i = 1; i < p.a.size(); ++i) {
    if (p.a[i] <= p.a[i - 1]) {
      throw ParameterInfeasible("a_i must be strictly increasing");
    }
  }
  if (p.a.back() >= p.m) {
    throw ParameterInfeasible("a_r >= m (a_r = " + std::to_string(p.a.back()) +
                              ", m = " + std::to_string(p.m) + ")");
  }
}

namespace detail {

inline gf2::BitMatrix random_matrix(std::size_t rows, std::size_t cols, KeyedStream& s) {
  gf2::BitMatrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      b.set(i, j, s.next_u64() & 1U);
    }
  }
  return b;
}

// Uniform full-rank matrix by rejection; counts the redraws.
inline gf2::BitMatrix random_full_rank(std::size_t rows, std::size_t cols, KeyedStream& s,
                                       std::size_t* rejections = nullptr) {
  gf2::BitMatrix b = random_matrix(rows, cols, s);
  while (gf2::rank(b) != rows) {
    if (rejections) ++*rejections;
    b = random_matrix(rows, cols, s);
  }
  return b;
}

inline gf2::BitVector random_vector(std::size_t len, KeyedStream& s) {
  gf2::BitVector v(len);
  for (std::size_t j = 0; j < len; ++j) {
    v.set(j, s.next_u64() & 1U);
  }
  return v;
}

}  // namespace detail

inline HardnessInstance generate(std::size_t n, double c, uint64_t seed,
                                 const std::optional<Override>& override_params = std::nullopt) {
  Parameters p;
  if (override_params) {
    p = {override_params->r, override_params->m, override_params->a};
  } else {
    p = asymptotic_parameters(n, c);
  }
  validate(n, p);

  HardnessInstance inst;
  inst.n = n;
  inst.c = c;
  inst.r = p.r;
  inst.m = p.m;
  inst.a = p.a;
  inst.seed = seed;
  inst.overridden = override_params.has_value();

  const auto perm = keyed_permutation(n, derive_key(seed, domain::kInstance));
  inst.blocks.assign(p.r, {});
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t block = k < p.r * p.m ? k / p.m : k - p.r * p.m;
    inst.blocks[block].push_back(perm[k]);
  }
  for (auto& b : inst.blocks) {
    std::sort(b.begin(), b.end());
  }

  for (std::size_t i = 0; i < p.r; ++i) {
    const std::size_t width = inst.blocks[i].size();
    const std::size_t rows = width - p.a[i];
    KeyedStream s(derive_key(derive_key(seed, domain::kInstance), i + 1));
    std::size_t rejections = 0;
    inst.codes.push_back(detail::random_full_rank(rows, width, s, &rejections));
    inst.targets.push_back(detail::random_vector(rows, s));
    inst.rank_rejections.push_back(rejections);
  }
  return inst;
}

/// Restriction of a pinning over [n] to the columns of block i.
inline std::vector<gf2::BitPin> block_pins(const HardnessInstance& inst, std::size_t block,
                                           std::span<const int32_t> dense) {
  std::vector<gf2::BitPin> pins;
  const auto& cols = inst.blocks[block];
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (dense[cols[j]] != Pinning::kFree) {
      pins.push_back({j, dense[cols[j]] != 0});
    }
  }
  return pins;
}

/// log2 mu(H_{S_i}) for one block, nullopt for zero.
inline std::optional<std::size_t> count_block(const HardnessInstance& inst, std::size_t block,
                                              std::span<const int32_t> dense) {
  return gf2::solve_affine_with_pinning(inst.codes[block], inst.targets[block],
                                        block_pins(inst, block, dense));
}

/// log2 mu(H) = sum over blocks of log2 mu_i(H_{S_i}); nullopt when empty.
inline std::optional<std::size_t> count_hypercube(const HardnessInstance& inst,
                                                  const Pinning& hypercube) {
  if (hypercube.num_vars() != inst.n || hypercube.alphabet_size() != 2) {
    throw MalformedQuery("count_hypercube: hypercube must pin bits of [" +
                         std::to_string(inst.n) + "]");
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < inst.r; ++i) {
    const auto c = count_block(inst, i, hypercube.dense());
    if (!c) {
      return std::nullopt;
    }
    total += *c;
  }
  return total;
}

/// Conditional-marginal view of the instance through hypercube counts.
class HardnessOracle final : public ConditionalOracle {
 public:
  explicit HardnessOracle(HardnessInstance inst) : inst_(std::move(inst)), where_(inst_.locate()) {}

  std::size_t num_vars() const noexcept override { return inst_.n; }
  std::size_t alphabet_size() const noexcept override { return 2; }
  std::string_view variant() const noexcept override { return "hardness"; }

  const HardnessInstance& instance() const noexcept { return inst_; }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    // Blocks other than the target's cancel in the ratio but must be nonempty.
    const std::size_t home = where_[target].first;
    for (std::size_t i = 0; i < inst_.r; ++i) {
      if (i != home && !count_block(inst_, i, pinning.dense())) {
        throw ZeroMeasurePinning(describe_zero(pinning));
      }
    }
    auto pins = block_pins(inst_, home, pinning.dense());
    pins.push_back({where_[target].second, false});
    const auto zero = gf2::solve_affine_with_pinning(inst_.codes[home], inst_.targets[home], pins);
    pins.back().value = true;
    const auto one = gf2::solve_affine_with_pinning(inst_.codes[home], inst_.targets[home], pins);
    if (!zero && !one) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
    if (zero && one) {
      const double diff = static_cast<double>(*one) - static_cast<double>(*zero);
      return Distribution({1.0, std::exp2(diff)});
    }
    return Distribution::point_mass(2, zero ? 0 : 1);
  }

  double log_probability_impl(const Pinning& pinning) const override {
    const auto c = count_hypercube(inst_, pinning);
    if (!c) {
      return -std::numeric_limits<double>::infinity();
    }
    return (static_cast<double>(*c) - static_cast<double>(inst_.log2_support())) * std::log(2.0);
  }

 private:
  HardnessInstance inst_;
  std::vector<std::pair<std::size_t, std::size_t>> where_;
};

inline OracleInstance marginal_oracle_view(HardnessInstance inst) {
  return std::make_shared<HardnessOracle>(std::move(inst));
}

/// One probe cell: block, codimension, and how often the count had the
/// information-free value.
struct NoInfoRow {
  std::size_t block = 0;
  std::size_t block_size = 0;
  std::size_t a = 0;
  std::size_t codim = 0;
  std::size_t trials = 0;
  bool expect_zero = false;     // codim > a: predicted count is 0
  double frequency = 0.0;       // over fresh (B_i, v_i) and random H
  double standard_error = 0.0;
  double instance_frequency = 0.0;  // same hypercubes, the instance's own code
  double bound = 0.0;           // 1 - 2^{-|a - codim|}
};

struct BalanceRow {
  std::size_t codim = 0;
  std::size_t trials = 0;
  double radius = 0.0;       // sqrt(3 m ln n)
  double frequency = 0.0;    // blocks whose codim lies in D/r +- radius
  double bound = 0.0;        // 1 - 2/n
};

struct NoInfoReport {
  std::vector<NoInfoRow> rows;
  std::vector<BalanceRow> balance;
  std::vector<std::size_t> rank_rejections;
};

namespace detail {

// Uniform d-subset of [0, size) and uniform bits on it.
inline std::vector<gf2::BitPin> random_hypercube(std::size_t size, std::size_t d, KeyedStream& s) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<gf2::BitPin> pins;
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(s.next_below(size - k));
    std::swap(idx[k], idx[j]);
    pins.push_back({idx[k], (s.next_u64() & 1U) != 0});
  }
  return pins;
}

}  // namespace detail

/// Empirical check of the information-hiding structure: for every block and
/// codimension d, how often mu_i(H) equals 2^{a_i - d} (d <= a_i) or 0
/// (d > a_i), plus codimension concentration across blocks for random global
/// hypercubes.
inline NoInfoReport probe_no_info(const HardnessInstance& inst, std::size_t trials, uint64_t seed,
                                  std::optional<std::vector<std::size_t>> codims = std::nullopt) {
  NoInfoReport report;
  report.rank_rejections = inst.rank_rejections;
  for (std::size_t i = 0; i < inst.r; ++i) {
    const std::size_t width = inst.blocks[i].size();
    const std::size_t ai = inst.a[i];
    std::vector<std::size_t> ds;
    if (codims) {
      for (auto d : *codims) {
        if (d <= width) ds.push_back(d);
      }
    } else {
      for (std::size_t d = 0; d <= width; ++d) ds.push_back(d);
    }
    for (std::size_t d : ds) {
      KeyedStream s(derive_key(derive_key(derive_key(seed, domain::kTrial), i), d));
      std::size_t hits = 0;
      std::size_t instance_hits = 0;
      const bool expect_zero = d > ai;
      auto matches = [&](const std::optional<std::size_t>& c) {
        return expect_zero ? !c.has_value() : (c.has_value() && *c == ai - d);
      };
      for (std::size_t t = 0; t < trials; ++t) {
        const auto pins = detail::random_hypercube(width, d, s);
        const auto fresh_b = detail::random_full_rank(width - ai, width, s);
        const auto fresh_v = detail::random_vector(width - ai, s);
        if (matches(gf2::solve_affine_with_pinning(fresh_b, fresh_v, pins))) {
          ++hits;
        }
        if (matches(gf2::solve_affine_with_pinning(inst.codes[i], inst.targets[i], pins))) {
          ++instance_hits;
        }
      }
      NoInfoRow row;
      row.block = i;
      row.block_size = width;
      row.a = ai;
      row.codim = d;
      row.trials = trials;
      row.expect_zero = expect_zero;
      const double tr = static_cast<double>(std::max<std::size_t>(trials, 1));
      row.frequency = static_cast<double>(hits) / tr;
      row.standard_error = std::sqrt(row.frequency * (1.0 - row.frequency) / tr);
      row.instance_frequency = static_cast<double>(instance_hits) / tr;
      const double gap = expect_zero ? static_cast<double>(d - ai) : static_cast<double>(ai - d);
      row.bound = 1.0 - std::exp2(-gap);
      report.rows.push_back(row);
    }
  }

  // Codimension balance across blocks for random global hypercubes.
  const auto where = inst.locate();
  const double radius = std::sqrt(3.0 * static_cast<double>(inst.m) *
                                  std::log(static_cast<double>(std::max<std::size_t>(inst.n, 2))));
  for (std::size_t quarter = 1; quarter <= 3; ++quarter) {
    const std::size_t big_d = inst.n * quarter / 4;
    KeyedStream s(derive_key(derive_key(seed, domain::kTrial), 1000 + quarter));
    std::size_t inside = 0;
    std::size_t total = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto pins = detail::random_hypercube(inst.n, big_d, s);
      std::vector<std::size_t> per_block(inst.r, 0);
      for (const auto& p : pins) {
        ++per_block[where[p.index].first];
      }
      const double centre = static_cast<double>(big_d) / static_cast<double>(inst.r);
      for (auto cnt : per_block) {
        inside += std::abs(static_cast<double>(cnt) - centre) <= radius ? 1 : 0;
        ++total;
      }
    }
    BalanceRow row;
    row.codim = big_d;
    row.trials = trials;
    row.radius = radius;
    row.frequency = total ? static_cast<double>(inside) / static_cast<double>(total) : 1.0;
    row.bound = 1.0 - 2.0 / static_cast<double>(std::max<std::size_t>(inst.n, 2));
    report.balance.push_back(row);
  }
  return report;
}

}  // namespace parsample::hardness
