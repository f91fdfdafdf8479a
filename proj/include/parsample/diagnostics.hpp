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
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "parsample/coupler.hpp"
#include "parsample/distribution.hpp"
#include "parsample/errors.hpp"
#include "parsample/oracle.hpp"
#include "parsample/pinning.hpp"
#include "parsample/random_tape.hpp"

namespace parsample::diagnostics {

enum class Evaluation { kExact, kSampled };

inline const char* to_string(Evaluation e) noexcept {
  return e == Evaluation::kExact ? "exact" : "sampled";
}

/// A measured quantity next to the bound it should respect.
struct DistanceReport {
  double lhs = 0.0;
  double rhs_bound = 0.0;
  Evaluation evaluation = Evaluation::kExact;
  double standard_error = 0.0;
  std::size_t samples = 0;  // permutations or trials behind lhs

  bool within(double se_multiplier = 3.0, double slack = 1e-9) const noexcept {
    return lhs <= rhs_bound + se_multiplier * standard_error + slack;
  }
};

namespace detail {
inline void check_sizes(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("alphabet size mismatch: " + std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()));
  }
}
}  // namespace detail

inline double tv(std::span<const double> p, std::span<const double> q) {
  detail::check_sizes(p, q);
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    s += std::abs(p[x] - q[x]);
  }
  return 0.5 * s;
}

inline double tv(const Distribution& p, const Distribution& q) { return tv(p.probs(), q.probs()); }

/// Natural-log KL divergence; +infinity on a support violation.
inline double kl(std::span<const double> p, std::span<const double> q) {
  detail::check_sizes(p, q);
  double s = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0) {
      continue;
    }
    if (q[x] <= 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    s += p[x] * std::log(p[x] / q[x]);
  }
  return std::max(s, 0.0);
}

inline double kl(const Distribution& p, const Distribution& q) { return kl(p.probs(), q.probs()); }

inline std::vector<double> normalize_counts(std::span<const std::size_t> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  std::vector<double> out(counts.size(), 0.0);
  if (total > 0) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      out[i] = static_cast<double>(counts[i]) / total;
    }
  }
  return out;
}

/// Pearson chi-square goodness of fit. Cells with zero expectation must be
/// empty (otherwise the p-value is 0); degrees of freedom = nonzero cells - 1.
struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

inline ChiSquare chi_square(std::span<const std::size_t> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw std::invalid_argument("chi_square: size mismatch");
  }
  const double total =
      static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::size_t{0}));
  ChiSquare r;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected[i] * total;
    if (expected[i] <= 0.0) {
      if (observed[i] > 0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        return r;
      }
      continue;
    }
    ++cells;
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
  }
  r.dof = cells > 0 ? cells - 1 : 0;
  r.p_value = r.dof == 0 ? 1.0
                         : boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, r.statistic / 2.0);
  return r;
}

/// Least-squares line through (ln x, ln y).
struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline ScalingFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_loglog: need at least two paired points");
  }
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw std::invalid_argument("fit_loglog: values must be positive");
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double vx = sxx - sx * sx / k;
  const double vy = syy - sy * sy / k;
  const double cxy = sxy - sx * sy / k;
  if (!(vx > 0.0)) {
    throw std::invalid_argument("fit_loglog: x values must not all coincide");
  }
  ScalingFit f;
  f.exponent = cxy / vx;
  f.intercept = (sy - f.exponent * sx) / k;
  f.r_squared = vy > 0.0 ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 1.0;
  return f;
}

/// Full joint probability table of an oracle, indexed by sum_j x_j q^j.
inline std::vector<double> joint_table(const ConditionalOracle& oracle,
                                       std::size_t max_states = std::size_t{1} << 16) {
  const std::size_t n = oracle.num_vars();
  const std::size_t q = oracle.alphabet_size();
  std::size_t states = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (states > max_states / q) {
      throw std::invalid_argument("joint_table: instance too large for enumeration");
    }
    states *= q;
  }
  std::vector<double> table(states, 0.0);
  Pinning full(n, q);
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t rest = s;
    for (std::size_t i = 0; i < n; ++i) {
      full.pin(i, rest % q);
      rest /= q;
    }
    table[s] = std::exp(oracle.joint_log_probability(full));
  }
  return table;
}

/// Conditional law of `target` given `pinning`, summed straight out of a
/// joint table from joint_table(); nullopt when the pinning has zero mass.
inline std::optional<std::vector<double>> enumerate_marginal(std::span<const double> joint,
                                                             std::size_t n, std::size_t q,
                                                             std::size_t target,
                                                             const Pinning& pinning) {
  std::vector<double> out(q, 0.0);
  const auto dense = pinning.dense();
  for (std::size_t s = 0; s < joint.size(); ++s) {
    std::size_t rest = s;
    bool ok = true;
    std::size_t value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t d = rest % q;
      rest /= q;
      if (dense[i] != Pinning::kFree && static_cast<std::size_t>(dense[i]) != d) {
        ok = false;
        break;
      }
      if (i == target) value = d;
    }
    if (ok) out[value] += joint[s];
  }
  double total = 0.0;
  for (double v : out) total += v;
  if (!(total > 0.0)) return std::nullopt;
  for (double& v : out) v /= total;
  return out;
}

namespace detail {

// E_x[ TV(X_{sigma(i)} | first lo pinned, X_{sigma(i)} | first hi pinned)^2 ]
// for every i of one permutation, summed over i = theta..n.
inline double pinning_sum_for_permutation(std::span<const double> joint, std::size_t n, std::size_t q,
                                          std::span<const std::size_t> sigma, std::size_t theta) {
  const std::size_t states = joint.size();
  std::vector<std::size_t> digits(states * n);
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t rest = s;
    for (std::size_t j = 0; j < n; ++j) {
      digits[s * n + j] = rest % q;
      rest /= q;
    }
  }
  auto prefix_key = [&](std::size_t s, std::size_t len) {
    std::size_t key = 0;
    for (std::size_t k = 0; k < len; ++k) {
      key = key * q + digits[s * n + sigma[k]];
    }
    return key;
  };
  auto conditional_table = [&](std::size_t len, std::size_t target) {
    std::size_t groups = 1;
    for (std::size_t k = 0; k < len; ++k) groups *= q;
    std::vector<double> mass(groups * q, 0.0);
    for (std::size_t s = 0; s < states; ++s) {
      mass[prefix_key(s, len) * q + digits[s * n + target]] += joint[s];
    }
    for (std::size_t g = 0; g < groups; ++g) {
      double t = 0.0;
      for (std::size_t x = 0; x < q; ++x) t += mass[g * q + x];
      if (t > 0.0) {
        for (std::size_t x = 0; x < q; ++x) mass[g * q + x] /= t;
      }
    }
    return mass;
  };

  double total = 0.0;
  for (std::size_t i = theta; i <= n; ++i) {
    const std::size_t target = sigma[i - 1];
    const std::size_t lo = i - theta;
    const std::size_t hi = i - 1;
    if (lo == hi) {
      continue;
    }
    const auto coarse = conditional_table(lo, target);
    const auto fine = conditional_table(hi, target);
    for (std::size_t s = 0; s < states; ++s) {
      if (joint[s] <= 0.0) continue;
      const std::size_t a = prefix_key(s, lo) * q;
      const std::size_t b = prefix_key(s, hi) * q;
      double d = 0.0;
      for (std::size_t x = 0; x < q; ++x) d += std::abs(coarse[a + x] - fine[b + x]);
      d *= 0.5;
      total += joint[s] * d * d;
    }
  }
  return total;
}

}  // namespace detail

/// sum_{i=theta}^{n} E[TV(X_{sigma(i)} | x_{sigma(<=i-theta)}, X_{sigma(i)} | x_{sigma(<i)})^2]
/// averaged over uniform sigma, against (theta - 1) ln q / 2. All n! permutations
/// are enumerated when n! <= 10^4; otherwise `subsample` uniform permutations.
inline DistanceReport check_pinning_lemma(const ConditionalOracle& oracle, std::size_t theta,
                                          uint64_t seed = 0, std::size_t subsample = 200) {
  const std::size_t n = oracle.num_vars();
  const std::size_t q = oracle.alphabet_size();
  if (n > 8 || q > 3) {
    throw std::invalid_argument("check_pinning_lemma: instance too large (n <= 8, q <= 3)");
  }
  if (theta == 0) {
    throw std::invalid_argument("check_pinning_lemma: theta >= 1 required");
  }
  const auto joint = joint_table(oracle);

  DistanceReport report;
  report.rhs_bound = static_cast<double>(theta - 1) * std::log(static_cast<double>(q)) / 2.0;

  std::size_t factorial = 1;
  for (std::size_t k = 2; k <= n; ++k) factorial *= k;

  std::vector<double> values;
  if (factorial <= 10000) {
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    do {
      values.push_back(detail::pinning_sum_for_permutation(joint, n, q, sigma, theta));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    report.evaluation = Evaluation::kExact;
  } else {
    for (std::size_t t = 0; t < subsample; ++t) {
      const auto sigma = keyed_permutation(n, derive_key(seed, t), domain::kTrial);
      values.push_back(detail::pinning_sum_for_permutation(joint, n, q, sigma, theta));
    }
    report.evaluation = Evaluation::kSampled;
  }
  const double k = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
  report.lhs = mean;
  report.samples = values.size();
  if (report.evaluation == Evaluation::kSampled && values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    report.standard_error = std::sqrt(ss / (k - 1.0) / k);
  }
  return report;
}

/// (sum_x max_i mu_i(x) - min_i mu_i(x)) / (sum_x max_i mu_i(x)).
inline double robustness_bound(std::span<const Distribution> mus) {
  if (mus.empty()) {
    return 0.0;
  }
  const std::size_t q = mus.front().size();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t x = 0; x < q; ++x) {
    double hi = 0.0;
    double lo = 1.0;
    for (const auto& mu : mus) {
      if (mu.size() != q) {
        throw std::invalid_argument("robustness_bound: alphabet size mismatch");
      }
      hi = std::max(hi, mu[x]);
      lo = std::min(lo, mu[x]);
    }
    num += hi - lo;
    den += hi;
  }
  return den > 0.0 ? num / den : 0.0;
}

/// Frequency over independent tapes that the coupler's outputs on `mus` are
/// not all equal, against robustness_bound.
inline DistanceReport check_coupler_robustness(CouplerKind kind, std::span<const Distribution> mus,
                                               std::size_t trials, uint64_t seed) {
  if (mus.size() < 2 || mus.size() > 8) {
    throw std::invalid_argument("check_coupler_robustness: 2 <= m <= 8 distributions required");
  }
  if (mus.front().size() > 8) {
    throw std::invalid_argument("check_coupler_robustness: q <= 8 required");
  }
  DistanceReport report;
  report.rhs_bound = robustness_bound(mus);
  report.evaluation = Evaluation::kSampled;
  report.samples = trials;
  const uint64_t key = derive_key(seed, domain::kTrial);
  std::size_t split = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomTape tape(key, t);
    const std::size_t first = couple(kind, mus.front(), tape);
    for (std::size_t j = 1; j < mus.size(); ++j) {
      if (couple(kind, mus[j], tape) != first) {
        ++split;
        break;
      }
    }
  }
  const double tr = static_cast<double>(std::max<std::size_t>(trials, 1));
  report.lhs = static_cast<double>(split) / tr;
  report.standard_error = std::sqrt(report.lhs * (1.0 - report.lhs) / tr);
  return report;
}

}  // namespace parsample::diagnostics
