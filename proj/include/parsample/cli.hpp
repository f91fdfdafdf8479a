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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parsample/coupler.hpp"
#include "parsample/diagnostics.hpp"
#include "parsample/errors.hpp"
#include "parsample/hardness.hpp"
#include "parsample/io.hpp"
#include "parsample/oracles/affine_code.hpp"
#include "parsample/oracles/approximate.hpp"
#include "parsample/oracles/grid_matching.hpp"
#include "parsample/oracles/markov.hpp"
#include "parsample/oracles/pair_copy.hpp"
#include "parsample/oracles/product.hpp"
#include "parsample/oracles/table.hpp"
#include "parsample/sampler.hpp"

namespace parsample::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kOracleError = 2, kCheckFailed = 3 };

inline constexpr std::string_view kCsvHeader =
    "oracle,n,q,theta,coupler,seed,rounds,total_queries,wall_time_ms";

struct BenchRow {
  std::string oracle;
  std::size_t n = 0;
  std::size_t q = 0;
  std::size_t theta = 0;
  std::string coupler;
  uint64_t seed = 0;
  std::size_t rounds = 0;
  std::size_t total_queries = 0;
  double wall_time_ms = 0.0;

  bool operator==(const BenchRow&) const = default;
};

inline std::string format_row(const BenchRow& r) {
  std::ostringstream os;
  os << r.oracle << ',' << r.n << ',' << r.q << ',' << r.theta << ',' << r.coupler << ',' << r.seed
     << ',' << r.rounds << ',' << r.total_queries << ',' << std::fixed << std::setprecision(3)
     << r.wall_time_ms;
  return os.str();
}

inline BenchRow parse_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) f.push_back(item);
  if (f.size() != 9) {
    throw std::invalid_argument("bench row: expected 9 fields, got " + std::to_string(f.size()));
  }
  BenchRow r;
  r.oracle = f[0];
  r.n = std::stoull(f[1]);
  r.q = std::stoull(f[2]);
  r.theta = std::stoull(f[3]);
  r.coupler = f[4];
  r.seed = std::stoull(f[5]);
  r.rounds = std::stoull(f[6]);
  r.total_queries = std::stoull(f[7]);
  r.wall_time_ms = std::stod(f[8]);
  return r;
}

inline CouplerKind parse_coupler(const std::string& s) {
  return s == "gumbel" ? CouplerKind::kGumbelTrick : CouplerKind::kMinCoupler;
}

inline std::optional<std::size_t> parse_theta(const std::string& s) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size() || v == 0) {
    throw CLI::ValidationError("--theta", "expected a positive integer or 'auto'");
  }
  return v;
}

inline std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// "i=b,i=b,..." over bits of [n].
inline Pinning parse_pins(const std::string& s, std::size_t n) {
  Pinning p(n, 2);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw MalformedQuery("pin: expected i=b, got '" + item + "'");
    }
    const auto i = std::stoull(item.substr(0, eq));
    const auto b = std::stoull(item.substr(eq + 1));
    if (i >= n || b > 1 || p.contains(i)) {
      throw MalformedQuery("pin: invalid or repeated entry '" + item + "'");
    }
    p.pin(i, b);
  }
  return p;
}

// ---- verify suites ---------------------------------------------------------

struct Check {
  std::string name;
  bool passed = true;
  json measured;
};

struct NamedOracle {
  std::string name;
  OracleInstance oracle;
};

inline hardness::HardnessInstance toy_hardness(uint64_t seed) {
  return hardness::generate(16, 1.0, seed, hardness::Override{2, 8, {2, 4}});
}

inline std::vector<NamedOracle> fixture_oracles(uint64_t seed) {
  std::vector<NamedOracle> out;
  out.push_back({"table n=5 q=2", std::make_shared<TableOracle>(TableOracle::random(5, 2, seed))});
  out.push_back({"table n=4 q=3 sparse",
                 std::make_shared<TableOracle>(TableOracle::random(4, 3, seed + 1, 0.3))});
  out.push_back({"markov n=8 q=3", std::make_shared<MarkovChainOracle>(
                                       MarkovChainOracle::random(8, 3, seed + 2))});
  out.push_back({"paircopy n=8 q=2", std::make_shared<PairCopyOracle>(8, 2)});
  out.push_back({"product n=6 q=3", io::builtin_oracle("builtin:product:n=6,q=3,seed=" +
                                                       std::to_string(seed + 3))});
  out.push_back({"affine n=8", io::builtin_oracle("builtin:affine:n=8,rows=4,seed=" +
                                                  std::to_string(seed + 4))});
  out.push_back({"grid 4x4", std::make_shared<GridMatchingOracle>(4, 4)});
  out.push_back({"hardness toy n=16", hardness::marginal_oracle_view(toy_hardness(seed + 5))});
  return out;
}

inline bool strictly_increasing(const std::vector<std::size_t>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) return false;
  }
  return true;
}

inline std::vector<Check> suite_exactness(uint64_t seed) {
  std::vector<Check> checks;
  for (const auto& [name, oracle] : fixture_oracles(seed)) {
    const std::size_t n = oracle->num_vars();
    std::size_t runs = 0;
    std::size_t mismatches = 0;
    std::size_t non_monotone = 0;
    std::size_t bound_violations = 0;
    std::size_t bound_checks = 0;
    for (auto coupler : {CouplerKind::kMinCoupler, CouplerKind::kGumbelTrick}) {
      for (auto perm : {PermutationMode::kRandom, PermutationMode::kIdentity}) {
        for (uint64_t s = 0; s < 40; ++s) {
          SamplerConfig cfg{derive_key(seed, s), coupler, SamplerMode::kSequential, std::nullopt,
                            perm};
          const auto ref = sequential_sample(*oracle, cfg).sample;
          std::vector<SampleResult> results;
          results.push_back(parallel_sample(*oracle, cfg));
          for (std::optional<std::size_t> theta :
               {std::optional<std::size_t>{1}, std::optional<std::size_t>{2},
                std::optional<std::size_t>{}}) {
            cfg.theta = theta;
            results.push_back(efficient_sample(*oracle, cfg));
          }
          for (const auto& r : results) {
            ++runs;
            mismatches += r.sample == ref ? 0 : 1;
            non_monotone += strictly_increasing(r.trace.a_history) ? 0 : 1;
          }
          if (n <= 8 && s < 5) {
            const auto order = sampling_order(n, cfg.seed, perm);
            const auto bound = deterministic_round_bound(*oracle, cfg.seed, order, coupler, 2);
            ++bound_checks;
            bound_violations += results[2].trace.rounds <= bound ? 0 : 1;
          }
        }
      }
    }
    checks.push_back({"agreement: " + name, mismatches == 0,
                      {{"runs", runs}, {"mismatches", mismatches}}});
    checks.push_back({"strict progress: " + name, non_monotone == 0,
                      {{"runs", runs}, {"violations", non_monotone}}});
    if (bound_checks > 0) {
      checks.push_back({"round bound theta=2: " + name, bound_violations == 0,
                        {{"runs", bound_checks}, {"violations", bound_violations}}});
    }
  }
  return checks;
}

inline std::vector<Check> suite_pinning(uint64_t seed) {
  std::vector<Check> checks;
  std::vector<NamedOracle> cases;
  for (std::size_t k = 0; k < 6; ++k) {
    const std::size_t n = 3 + k % 3;
    cases.push_back({"table n=" + std::to_string(n) + " q=2 #" + std::to_string(k),
                     std::make_shared<TableOracle>(TableOracle::random(n, 2, derive_key(seed, k)))});
  }
  cases.push_back({"product n=4 q=3", io::builtin_oracle("builtin:product:n=4,q=3,seed=" +
                                                         std::to_string(seed))});
  cases.push_back({"markov n=6 q=2", std::make_shared<MarkovChainOracle>(
                                         MarkovChainOracle::random(6, 2, seed))});
  for (const auto& [name, oracle] : cases) {
    for (std::size_t theta = 1; theta <= 3; ++theta) {
      const auto rep = diagnostics::check_pinning_lemma(*oracle, theta, seed);
      checks.push_back({"pinning lemma theta=" + std::to_string(theta) + ": " + name,
                        rep.within(3.0), io::to_json(rep)});
    }
  }
  return checks;
}

inline Distribution random_distribution(std::size_t q, KeyedStream& s, double zero_prob) {
  std::vector<double> w(q);
  bool any = false;
  for (auto& x : w) {
    x = s.next_unit() < zero_prob ? 0.0 : -std::log(s.next_unit_open());
    any = any || x > 0.0;
  }
  if (!any) w[s.next_below(q)] = 1.0;
  return Distribution(std::move(w));
}

inline std::vector<Check> suite_robustness(uint64_t seed) {
  std::vector<Check> checks;
  KeyedStream s(derive_key(seed, domain::kTrial));
  for (std::size_t f = 0; f < 20; ++f) {
    const std::size_t m = 2 + s.next_below(4);
    const std::size_t q = 2 + s.next_below(5);
    std::vector<Distribution> mus;
    for (std::size_t i = 0; i < m; ++i) mus.push_back(random_distribution(q, s, 0.15));
    for (auto kind : {CouplerKind::kMinCoupler, CouplerKind::kGumbelTrick}) {
      const auto rep = diagnostics::check_coupler_robustness(kind, mus, 20000, derive_key(seed, f));
      json j = io::to_json(rep);
      j["m"] = m;
      j["q"] = q;
      checks.push_back({"robustness " + std::string(to_string(kind)) + " family " + std::to_string(f),
                        rep.within(3.0), j});
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const auto mu = random_distribution(3 + k, s, 0.2);
    for (auto kind : {CouplerKind::kMinCoupler, CouplerKind::kGumbelTrick}) {
      std::vector<std::size_t> counts(mu.size(), 0);
      const uint64_t key = derive_key(derive_key(seed, 77), k);
      for (std::size_t t = 0; t < 20000; ++t) ++counts[couple(kind, mu, RandomTape(key, t))];
      const auto chi = diagnostics::chi_square(counts, mu.probs());
      checks.push_back({"marginal chi-square " + std::string(to_string(kind)) + " #" +
                            std::to_string(k),
                        chi.p_value > 1e-4,
                        {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}}});
    }
  }
  return checks;
}

/// Support of a hardness instance by evaluating every block on every point.
inline std::vector<uint64_t> enumerate_support(const hardness::HardnessInstance& inst) {
  std::vector<uint64_t> support;
  for (uint64_t x = 0; x < (uint64_t{1} << inst.n); ++x) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < inst.r; ++i) {
      const auto& cols = inst.blocks[i];
      for (std::size_t k = 0; ok && k < inst.codes[i].rows(); ++k) {
        bool bit = false;
        for (std::size_t j = 0; j < cols.size(); ++j) {
          bit ^= inst.codes[i].get(k, j) && ((x >> cols[j]) & 1U);
        }
        ok = bit == inst.targets[i].get(k);
      }
    }
    if (ok) support.push_back(x);
  }
  return support;
}

inline std::vector<Check> suite_hardness(uint64_t seed) {
  std::vector<Check> checks;
  const auto inst = toy_hardness(seed);
  const auto support = enumerate_support(inst);
  checks.push_back({"support size 2^(sum a_i)", support.size() == (uint64_t{1} << inst.log2_support()),
                    {{"enumerated", support.size()}, {"log2_predicted", inst.log2_support()}}});

  KeyedStream s(derive_key(seed, domain::kTrial));
  std::size_t agree = 0;
  const std::size_t trials = 1000;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t d = s.next_below(inst.n + 1);
    const bool anchor = s.next_u64() & 1U;
    const uint64_t ref = anchor ? support[s.next_below(support.size())] : s.next_u64();
    Pinning h(inst.n, 2);
    const auto pins = hardness::detail::random_hypercube(inst.n, d, s);
    uint64_t mask = 0;
    uint64_t want = 0;
    for (const auto& p : pins) {
      const bool bit = anchor ? ((ref >> p.index) & 1U) : p.value;
      h.pin(p.index, bit);
      mask |= uint64_t{1} << p.index;
      want |= static_cast<uint64_t>(bit) << p.index;
    }
    std::size_t brute = 0;
    for (auto x : support) brute += (x & mask) == want ? 1 : 0;
    const auto c = hardness::count_hypercube(inst, h);
    const bool same = c ? (brute == (std::size_t{1} << *c)) : brute == 0;
    agree += same ? 1 : 0;
  }
  checks.push_back({"count_hypercube vs enumeration", agree == trials,
                    {{"hypercubes", trials}, {"agreements", agree}}});

  const auto probe_inst = hardness::generate(40, 1.0, seed + 1, hardness::Override{2, 20, {8, 14}});
  const auto rep = hardness::probe_no_info(probe_inst, 2000, seed);
  for (const auto& r : rep.rows) {
    if (r.expect_zero || r.codim + 4 > r.a) continue;
    checks.push_back({"no-info block " + std::to_string(r.block) + " d=" + std::to_string(r.codim),
                      r.frequency >= r.bound - 3.0 * r.standard_error,
                      {{"frequency", r.frequency}, {"standard_error", r.standard_error},
                       {"bound", r.bound}}});
  }
  for (const auto& b : rep.balance) {
    checks.push_back({"balanced partition D=" + std::to_string(b.codim), b.frequency >= b.bound,
                      {{"frequency", b.frequency}, {"bound", b.bound}, {"radius", b.radius}}});
  }
  return checks;
}

inline std::vector<Check> suite_oracle_consistency(uint64_t seed) {
  std::vector<Check> checks;
  auto fixtures = fixture_oracles(seed);
  fixtures.push_back({"approximate(table n=4 q=2)",
                      approximate_wrap(std::make_shared<TableOracle>(TableOracle::random(4, 2, seed)),
                                       0.01, 0.01, seed)});
  for (const auto& [name, oracle] : fixtures) {
    const std::size_t n = oracle->num_vars();
    const std::size_t q = oracle->alphabet_size();
    const bool exact = oracle->variant() != "approximate";
    std::vector<double> joint;
    if (exact) joint = diagnostics::joint_table(*oracle);
    KeyedStream s(derive_key(seed, std::hash<std::string>{}(name)));
    std::size_t queries = 0;
    std::size_t invalid = 0;
    std::size_t chain_fail = 0;
    std::size_t brute_fail = 0;
    std::size_t nondeterministic = 0;
    double worst = 0.0;
    for (std::size_t t = 0; t < 30; ++t) {
      SamplerConfig cfg{s.next_u64(), CouplerKind::kMinCoupler, SamplerMode::kSequential, std::nullopt,
                        PermutationMode::kRandom};
      const auto point = sequential_sample(*oracle, cfg).sample.values;
      const auto order = keyed_permutation(n, s.next_u64());
      const std::size_t k = s.next_below(n);
      Pinning p(n, q);
      for (std::size_t j = 0; j < k; ++j) p.pin(order[j], point[order[j]]);
      const std::size_t target = order[k];
      const auto mu = oracle->conditional_marginal(target, p);
      ++queries;
      double total = 0.0;
      for (double v : mu.probs()) {
        invalid += v < 0.0 ? 1 : 0;
        total += v;
      }
      invalid += std::abs(total - 1.0) > 1e-9 ? 1 : 0;
      nondeterministic += oracle->conditional_marginal(target, p) == mu ? 0 : 1;
      if (!exact) continue;
      const double base = oracle->joint_log_probability(p);
      for (std::size_t x = 0; x < q; ++x) {
        if (mu[x] <= 0.0) continue;
        Pinning e = p;
        e.pin(target, x);
        const double diff = oracle->joint_log_probability(e) - base;
        chain_fail += std::abs(diff - std::log(mu[x])) > 1e-9 ? 1 : 0;
      }
      const auto brute = diagnostics::enumerate_marginal(joint, n, q, target, p);
      if (!brute) {
        ++brute_fail;
        continue;
      }
      for (std::size_t x = 0; x < q; ++x) worst = std::max(worst, std::abs((*brute)[x] - mu[x]));
    }
    brute_fail += worst > 1e-9 ? 1 : 0;
    checks.push_back({"marginals valid: " + name, invalid == 0, {{"queries", queries}, {"invalid", invalid}}});
    checks.push_back({"deterministic: " + name, nondeterministic == 0,
                      {{"queries", queries}, {"differences", nondeterministic}}});
    if (exact) {
      checks.push_back({"chain rule: " + name, chain_fail == 0, {{"failures", chain_fail}}});
      checks.push_back({"matches enumeration: " + name, brute_fail == 0, {{"max_abs_error", worst}}});
    }
  }
  return checks;
}

// ---- commands --------------------------------------------------------------

struct SampleOptions {
  std::string oracle;
  std::string mode = "efficient";
  uint64_t seed = 0;
  std::string coupler = "min";
  std::string theta = "auto";
  std::string permutation = "random";
  std::string trace;
  std::string out;
};

struct BenchOptions {
  std::string family;
  std::string n_list;
  std::size_t q = 2;
  std::size_t reps = 1;
  uint64_t seed = 0;
  std::string csv;
  bool fit = false;
  std::string theta = "auto";
  std::string coupler = "min";
  std::string permutation;
  bool no_wall_time = false;
};

struct VerifyOptions {
  std::string suite;
  uint64_t seed = 0;
  std::string report;
};

struct HardnessOptions {
  std::size_t n = 0;
  double c = 1.0;
  uint64_t seed = 0;
  std::string override_list;
  std::string out;
  std::string instance;
  std::string pin;
  std::size_t trials = 1000;
};

inline void emit(const std::string& path, const json& j, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    io::write_json_file(path, j);
  }
}

inline int cmd_sample(const SampleOptions& o, std::ostream& out) {
  const auto oracle = io::load_oracle(o.oracle);
  SamplerConfig cfg;
  cfg.seed = o.seed;
  cfg.coupler = parse_coupler(o.coupler);
  cfg.theta = parse_theta(o.theta);
  cfg.permutation = o.permutation == "identity" ? PermutationMode::kIdentity : PermutationMode::kRandom;
  cfg.mode = o.mode == "sequential" ? SamplerMode::kSequential
             : o.mode == "parallel" ? SamplerMode::kParallel
                                    : SamplerMode::kEfficient;
  const auto result = sample(*oracle, cfg);
  if (!o.trace.empty()) io::write_json_file(o.trace, io::to_json(result.trace));
  emit(o.out, io::to_json(result.sample, oracle->alphabet_size()), out);
  return kOk;
}

inline OracleInstance bench_oracle(const std::string& family, std::size_t n, std::size_t q,
                                   uint64_t seed) {
  if (family == "markov") {
    return std::make_shared<MarkovChainOracle>(MarkovChainOracle::random(n, q, derive_key(seed, n)));
  }
  if (family == "paircopy") return std::make_shared<PairCopyOracle>(n, q);
  if (family == "product") return std::make_shared<ProductOracle>(ProductOracle::uniform(n, q));
  throw InstanceFormatError("unknown oracle family '" + family + "'");
}

inline std::vector<BenchRow> run_bench(const BenchOptions& o) {
  const auto ns = parse_list(o.n_list);
  const auto theta = parse_theta(o.theta);
  const auto coupler = parse_coupler(o.coupler);
  const std::string perm = o.permutation.empty() ? (o.family == "paircopy" ? "identity" : "random")
                                                 : o.permutation;
  std::vector<BenchRow> rows;
  for (std::size_t n : ns) {
    const auto oracle = bench_oracle(o.family, n, o.q, o.seed);
    for (std::size_t rep = 0; rep < o.reps; ++rep) {
      SamplerConfig cfg{o.seed + rep, coupler, SamplerMode::kEfficient, theta,
                        perm == "identity" ? PermutationMode::kIdentity : PermutationMode::kRandom};
      const auto start = std::chrono::steady_clock::now();
      const auto res = efficient_sample(*oracle, cfg);
      const auto stop = std::chrono::steady_clock::now();
      BenchRow row{o.family, n, o.q, theta.value_or(resolve_theta(n, o.q)), std::string(to_string(coupler)),
                   cfg.seed, res.trace.rounds, res.trace.total_queries,
                   o.no_wall_time ? 0.0 : std::chrono::duration<double, std::milli>(stop - start).count()};
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return a.n != b.n ? a.n < b.n : a.seed < b.seed;
  });
  return rows;
}

/// Fit of log mean rounds against log n, with the per-n means.
inline json bench_fit(const std::vector<BenchRow>& rows) {
  std::map<std::size_t, std::pair<double, double>> sums;
  std::map<std::size_t, std::size_t> counts;
  for (const auto& r : rows) {
    sums[r.n].first += static_cast<double>(r.rounds);
    sums[r.n].second += static_cast<double>(r.total_queries);
    ++counts[r.n];
  }
  std::vector<double> xs, ys;
  json points = json::array();
  for (const auto& [n, s] : sums) {
    const double k = static_cast<double>(counts[n]);
    xs.push_back(static_cast<double>(n));
    ys.push_back(s.first / k);
    points.push_back({{"n", n}, {"mean_rounds", s.first / k}, {"mean_queries", s.second / k}});
  }
  json j = {{"points", points}};
  if (xs.size() >= 2) {
    j["fit"] = io::to_json(diagnostics::fit_loglog(xs, ys));
  }
  return j;
}

inline int cmd_bench(const BenchOptions& o, std::ostream& out) {
  const auto rows = run_bench(o);
  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  for (const auto& r : rows) csv << format_row(r) << '\n';
  if (o.csv.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(o.csv);
    if (!f) throw std::runtime_error("cannot write '" + o.csv + "'");
    f << csv.str();
  }
  if (o.fit) out << bench_fit(rows).dump(2) << '\n';
  return kOk;
}

inline int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  std::vector<Check> checks;
  if (o.suite == "exactness") checks = suite_exactness(o.seed);
  else if (o.suite == "pinning") checks = suite_pinning(o.seed);
  else if (o.suite == "robustness") checks = suite_robustness(o.seed);
  else if (o.suite == "hardness") checks = suite_hardness(o.seed);
  else checks = suite_oracle_consistency(o.seed);
  bool all = true;
  json list = json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    list.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}});
  }
  const json report = {{"suite", o.suite}, {"seed", o.seed}, {"passed", all}, {"checks", list}};
  if (!o.report.empty()) io::write_json_file(o.report, report);
  for (const auto& c : checks) {
    out << (c.passed ? "ok   " : "FAIL ") << c.name << '\n';
  }
  out << o.suite << ": " << (all ? "all checks passed" : "FAILED") << '\n';
  return all ? kOk : kCheckFailed;
}

inline int cmd_hardness_gen(const HardnessOptions& o, std::ostream& out) {
  std::optional<hardness::Override> ov;
  if (!o.override_list.empty()) {
    const auto v = parse_list(o.override_list);
    if (v.size() < 3) {
      throw ParameterInfeasible("--override expects r,m,a1..ar");
    }
    ov = hardness::Override{v[0], v[1], std::vector<std::size_t>(v.begin() + 2, v.end())};
  }
  const auto inst = hardness::generate(o.n, o.c, o.seed, ov);
  emit(o.out, io::to_json(inst), out);
  return kOk;
}

inline int cmd_hardness_query(const HardnessOptions& o, std::ostream& out) {
  const auto inst = io::hardness_from_json(io::read_json_file(o.instance));
  const auto c = hardness::count_hypercube(inst, parse_pins(o.pin, inst.n));
  if (c) out << *c << '\n';
  else out << "ZERO\n";
  return kOk;
}

inline int cmd_hardness_probe(const HardnessOptions& o, std::ostream& out) {
  const auto inst = io::hardness_from_json(io::read_json_file(o.instance));
  emit(o.out, io::to_json(hardness::probe_no_info(inst, o.trials, o.seed)), out);
  return kOk;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"parallel exact sampling experiments"};
  app.require_subcommand(1);

  SampleOptions so;
  auto* sample_cmd = app.add_subcommand("sample", "draw one sample and its trace");
  sample_cmd->add_option("--oracle", so.oracle, "instance file or builtin:family:key=val,...")->required();
  sample_cmd->add_option("--mode", so.mode)->check(CLI::IsMember({"sequential", "parallel", "efficient"}));
  sample_cmd->add_option("--seed", so.seed);
  sample_cmd->add_option("--coupler", so.coupler)->check(CLI::IsMember({"min", "gumbel"}));
  sample_cmd->add_option("--theta", so.theta, "window size or auto");
  sample_cmd->add_option("--permutation", so.permutation)->check(CLI::IsMember({"random", "identity"}));
  sample_cmd->add_option("--trace", so.trace, "trace JSON output");
  sample_cmd->add_option("--out", so.out, "sample JSON output (stdout if absent)");

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "round-complexity scaling runs");
  bench_cmd->add_option("--oracle-family", bo.family)->required()->check(
      CLI::IsMember({"markov", "paircopy", "product"}));
  bench_cmd->add_option("--n-list", bo.n_list)->required();
  bench_cmd->add_option("--q", bo.q)->check(CLI::Range(2, 64));
  bench_cmd->add_option("--reps", bo.reps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bo.seed);
  bench_cmd->add_option("--csv", bo.csv, "CSV output (stdout if absent)");
  bench_cmd->add_flag("--fit", bo.fit, "print the log-log fit as JSON");
  bench_cmd->add_option("--theta", bo.theta);
  bench_cmd->add_option("--coupler", bo.coupler)->check(CLI::IsMember({"min", "gumbel"}));
  bench_cmd->add_option("--permutation", bo.permutation)->check(CLI::IsMember({"random", "identity"}));
  bench_cmd->add_flag("--no-wall-time", bo.no_wall_time, "write 0 in the wall_time_ms column");

  VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
  verify_cmd->add_option("--suite", vo.suite)->required()->check(CLI::IsMember(
      {"exactness", "pinning", "robustness", "hardness", "oracle-consistency"}));
  verify_cmd->add_option("--seed", vo.seed);
  verify_cmd->add_option("--report", vo.report);

  HardnessOptions ho;
  auto* hard_cmd = app.add_subcommand("hardness", "random linear code instances");
  hard_cmd->require_subcommand(1);
  auto* gen = hard_cmd->add_subcommand("gen", "generate an instance");
  gen->add_option("--n", ho.n)->required();
  gen->add_option("--c", ho.c);
  gen->add_option("--seed", ho.seed);
  gen->add_option("--override", ho.override_list, "r,m,a1,...,ar");
  gen->add_option("--out", ho.out);
  auto* query = hard_cmd->add_subcommand("query", "log2 count of a hypercube");
  query->add_option("--instance", ho.instance)->required();
  query->add_option("--pin", ho.pin, "i=b,...");
  auto* probe = hard_cmd->add_subcommand("probe", "no-information probe");
  probe->add_option("--instance", ho.instance)->required();
  probe->add_option("--trials", ho.trials)->check(CLI::PositiveNumber);
  probe->add_option("--seed", ho.seed);
  probe->add_option("--out", ho.out);

  try {
    app.parse(argc, argv);
    if (so.theta != "auto") parse_theta(so.theta);
    if (bo.theta != "auto") parse_theta(bo.theta);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (sample_cmd->parsed()) return cmd_sample(so, out);
    if (bench_cmd->parsed()) {
      try {
        parse_list(bo.n_list);
      } catch (const std::exception& e) {
        err << "error: --n-list: " << e.what() << '\n';
        return kUsage;
      }
      return cmd_bench(bo, out);
    }
    if (verify_cmd->parsed()) return cmd_verify(vo, out);
    if (gen->parsed()) return cmd_hardness_gen(ho, out);
    if (query->parsed()) return cmd_hardness_query(ho, out);
    if (probe->parsed()) return cmd_hardness_probe(ho, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kOracleError;
  }
  return kUsage;
}

}  // namespace parsample::cli
