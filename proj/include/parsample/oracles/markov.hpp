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
#include <vector>

#include "parsample/oracle.hpp"
#include "parsample/random_tape.hpp"

namespace parsample {

/// Inhomogeneous Markov chain X_0 -> X_1 -> ... -> X_{n-1} on [q].
///
/// By the Markov property a conditional marginal only depends on the nearest
/// pinned coordinate on each side, so a query costs O(gap * q^2) where gap is
/// the distance to those neighbors.
class MarkovChainOracle final : public ConditionalOracle {
 public:
  /// `transitions[k]` is the row-major q x q matrix P[X_{k+1} = y | X_k = x].
  MarkovChainOracle(Distribution initial, std::vector<std::vector<double>> transitions)
      : q_(initial.size()), n_(transitions.size() + 1) {
    init_.assign(initial.probs().begin(), initial.probs().end());
    has_zero_ = std::any_of(init_.begin(), init_.end(), [](double p) { return p == 0.0; });
    trans_.reserve(transitions.size() * q_ * q_);
    for (std::size_t k = 0; k < transitions.size(); ++k) {
      if (transitions[k].size() != q_ * q_) {
        throw std::invalid_argument("MarkovChainOracle: transition " + std::to_string(k) +
                                    " is not q x q");
      }
      for (std::size_t x = 0; x < q_; ++x) {
        std::vector<double> row(transitions[k].begin() + static_cast<std::ptrdiff_t>(x * q_),
                                transitions[k].begin() + static_cast<std::ptrdiff_t>((x + 1) * q_));
        const Distribution d(std::move(row));  // validates and renormalizes
        for (double p : d.probs()) {
          has_zero_ = has_zero_ || p == 0.0;
          trans_.push_back(p);
        }
      }
    }
    marginals_.resize(n_ * q_);
    std::copy(init_.begin(), init_.end(), marginals_.begin());
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      for (std::size_t y = 0; y < q_; ++y) {
        double s = 0.0;
        for (std::size_t x = 0; x < q_; ++x) {
          s += marginals_[k * q_ + x] * t(k, x, y);
        }
        marginals_[(k + 1) * q_ + y] = s;
      }
    }
  }

  /// Random chain: initial law and every transition row are uniform on the
  /// simplex, drawn from a keyed stream.
  static MarkovChainOracle random(std::size_t n, std::size_t q, uint64_t seed) {
    if (n == 0 || q == 0) {
      throw std::invalid_argument("MarkovChainOracle: n and q must be positive");
    }
    KeyedStream s(derive_key(seed, domain::kInstance));
    auto simplex = [&](std::size_t len) {
      std::vector<double> v(len);
      for (auto& x : v) {
        x = -std::log(s.next_unit_open());
      }
      return v;
    };
    Distribution init(simplex(q));
    std::vector<std::vector<double>> trans(n - 1);
    for (auto& m : trans) {
      m.reserve(q * q);
      for (std::size_t x = 0; x < q; ++x) {
        auto row = simplex(q);
        m.insert(m.end(), row.begin(), row.end());
      }
    }
    return MarkovChainOracle(std::move(init), std::move(trans));
  }

  std::size_t num_vars() const noexcept override { return n_; }
  std::size_t alphabet_size() const noexcept override { return q_; }
  std::string_view variant() const noexcept override { return "markov"; }

  const std::vector<double>& initial() const noexcept { return init_; }
  double transition(std::size_t k, std::size_t x, std::size_t y) const { return t(k, x, y); }

 protected:
  Distribution marginal_impl(std::size_t target, const Pinning& pinning) const override {
    if (has_zero_) {
      require_positive(pinning);
    }
    return local(target, pinning);
  }

  std::vector<Distribution> batch_impl(std::span<const std::size_t> targets,
                                       const Pinning& pinning) const override {
    if (has_zero_) {
      require_positive(pinning);
    }
    std::vector<Distribution> out;
    out.reserve(targets.size());
    for (std::size_t target : targets) {
      out.push_back(local(target, pinning));
    }
    return out;
  }

  double log_probability_impl(const Pinning& pinning) const override {
    const auto dense = pinning.dense();
    double lp = 0.0;
    std::size_t prev = n_;
    std::vector<double> f(q_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (dense[i] == Pinning::kFree) {
        continue;
      }
      const auto v = static_cast<std::size_t>(dense[i]);
      double p;
      if (prev == n_) {
        p = marginals_[i * q_ + v];
      } else {
        std::fill(f.begin(), f.end(), 0.0);
        f[static_cast<std::size_t>(dense[prev])] = 1.0;
        propagate_forward(f, prev, i);
        p = f[v];
      }
      if (!(p > 0.0)) {
        return -std::numeric_limits<double>::infinity();
      }
      lp += std::log(p);
      prev = i;
    }
    return lp;
  }

 private:
  double t(std::size_t k, std::size_t x, std::size_t y) const {
    return trans_[(k * q_ + x) * q_ + y];
  }

  // f <- f T_from ... T_{to-1}
  void propagate_forward(std::vector<double>& f, std::size_t from, std::size_t to) const {
    std::vector<double> g(q_);
    for (std::size_t k = from; k < to; ++k) {
      for (std::size_t y = 0; y < q_; ++y) {
        double s = 0.0;
        for (std::size_t x = 0; x < q_; ++x) {
          s += f[x] * t(k, x, y);
        }
        g[y] = s;
      }
      f.swap(g);
    }
  }

  Distribution local(std::size_t target, const Pinning& pinning) const {
    const auto dense = pinning.dense();
    std::size_t left = target;
    while (left > 0 && dense[left - 1] == Pinning::kFree) {
      --left;
    }
    std::size_t right = target + 1;
    while (right < n_ && dense[right] == Pinning::kFree) {
      ++right;
    }

    std::vector<double> f(q_);
    if (left == 0) {
      std::copy_n(marginals_.begin() + static_cast<std::ptrdiff_t>(target * q_), q_, f.begin());
    } else {
      f[static_cast<std::size_t>(dense[left - 1])] = 1.0;
      propagate_forward(f, left - 1, target);
    }

    if (right < n_) {
      // b[x] proportional to P[X_right = r | X_target = x].
      std::vector<double> b(q_, 0.0);
      std::vector<double> c(q_);
      b[static_cast<std::size_t>(dense[right])] = 1.0;
      for (std::size_t k = right; k-- > target;) {
        double hi = 0.0;
        for (std::size_t x = 0; x < q_; ++x) {
          double s = 0.0;
          for (std::size_t y = 0; y < q_; ++y) {
            s += t(k, x, y) * b[y];
          }
          c[x] = s;
          hi = std::max(hi, s);
        }
        if (hi > 0.0) {
          for (auto& v : c) {
            v /= hi;
          }
        }
        b.swap(c);
      }
      for (std::size_t x = 0; x < q_; ++x) {
        f[x] *= b[x];
      }
    }

    double total = 0.0;
    for (double v : f) {
      total += v;
    }
    if (!(total > 0.0)) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
    return Distribution(std::move(f));
  }

  void require_positive(const Pinning& pinning) const {
    if (!std::isfinite(log_probability_impl(pinning))) {
      throw ZeroMeasurePinning(describe_zero(pinning));
    }
  }

  std::size_t q_;
  std::size_t n_;
  bool has_zero_ = false;
  std::vector<double> init_;
  std::vector<double> trans_;
  std::vector<double> marginals_;
};

}  // namespace parsample
