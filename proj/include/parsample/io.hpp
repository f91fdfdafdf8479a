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
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parsample/diagnostics.hpp"
#include "parsample/errors.hpp"
#include "parsample/gf2.hpp"
#include "parsample/hardness.hpp"
#include "parsample/oracle.hpp"
#include "parsample/oracles/affine_code.hpp"
#include "parsample/oracles/approximate.hpp"
#include "parsample/oracles/grid_matching.hpp"
#include "parsample/oracles/markov.hpp"
#include "parsample/oracles/pair_copy.hpp"
#include "parsample/oracles/product.hpp"
#include "parsample/oracles/table.hpp"
#include "parsample/sampler.hpp"

namespace parsample::io {

using nlohmann::json;

// ---- hardness instances ----------------------------------------------------

inline json to_json(const hardness::HardnessInstance& inst) {
  json codes = json::array();
  for (std::size_t i = 0; i < inst.r; ++i) {
    json rows = json::array();
    for (std::size_t k = 0; k < inst.codes[i].rows(); ++k) {
      rows.push_back(gf2::to_hex(gf2::row_vector(inst.codes[i], k)));
    }
    codes.push_back({{"rows_hex", rows}, {"v_hex", gf2::to_hex(inst.targets[i])}});
  }
  json j = {{"variant", "hardness"},
            {"n", inst.n},
            {"c", inst.c},
            {"r", inst.r},
            {"m", inst.m},
            {"blocks", inst.blocks},
            {"a", inst.a},
            {"codes", codes},
            {"seed", inst.seed},
            {"rank_rejections", inst.rank_rejections},
            {"log_base", "e"}};
  if (inst.overridden) {
    j["overrides"] = {{"r", inst.r}, {"m", inst.m}, {"a", inst.a}};
  }
  return j;
}

inline hardness::HardnessInstance hardness_from_json(const json& j) {
  hardness::HardnessInstance inst;
  try {
    inst.n = j.at("n").get<std::size_t>();
    inst.c = j.at("c").get<double>();
    inst.r = j.at("r").get<std::size_t>();
    inst.m = j.at("m").get<std::size_t>();
    inst.seed = j.at("seed").get<uint64_t>();
    inst.blocks = j.at("blocks").get<std::vector<std::vector<std::size_t>>>();
    inst.a = j.at("a").get<std::vector<std::size_t>>();
    inst.overridden = j.contains("overrides");
    if (j.contains("rank_rejections")) {
      inst.rank_rejections = j.at("rank_rejections").get<std::vector<std::size_t>>();
    } else {
      inst.rank_rejections.assign(inst.r, 0);
    }
    const auto& codes = j.at("codes");
    if (inst.blocks.size() != inst.r || inst.a.size() != inst.r || codes.size() != inst.r) {
      throw InstanceFormatError("hardness instance: blocks, a and codes must have r entries");
    }
    std::vector<bool> seen(inst.n, false);
    for (std::size_t i = 0; i < inst.r; ++i) {
      const std::size_t width = inst.blocks[i].size();
      for (auto v : inst.blocks[i]) {
        if (v >= inst.n || seen[v]) {
          throw InstanceFormatError("hardness instance: blocks do not partition [n]");
        }
        seen[v] = true;
      }
      const auto rows = codes[i].at("rows_hex").get<std::vector<std::string>>();
      gf2::BitMatrix b(rows.size(), width);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        gf2::set_row(b, k, gf2::from_hex(rows[k], width));
      }
      inst.codes.push_back(std::move(b));
      inst.targets.push_back(gf2::from_hex(codes[i].at("v_hex").get<std::string>(), rows.size()));
    }
    for (bool s : seen) {
      if (!s) {
        throw InstanceFormatError("hardness instance: blocks do not cover [n]");
      }
    }
  } catch (const json::exception& e) {
    throw InstanceFormatError(std::string("hardness instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError(std::string("hardness instance: ") + e.what());
  }
  return inst;
}

inline bool looks_like_hardness(const json& j) {
  return (j.contains("variant") && j.at("variant") == "hardness") ||
         (!j.contains("variant") && j.contains("codes") && j.contains("blocks"));
}

// ---- oracle instances ------------------------------------------------------

inline json to_json(const ConditionalOracle& oracle) {
  if (const auto* t = dynamic_cast<const TableOracle*>(&oracle)) {
    return {{"variant", "table"}, {"n", t->num_vars()}, {"q", t->alphabet_size()},
            {"probs", t->probabilities()}};
  }
  if (const auto* p = dynamic_cast<const ProductOracle*>(&oracle)) {
    json factors = json::array();
    for (const auto& f : p->factors()) {
      factors.push_back(std::vector<double>(f.probs().begin(), f.probs().end()));
    }
    return {{"variant", "product"}, {"factors", factors}};
  }
  if (const auto* m = dynamic_cast<const MarkovChainOracle*>(&oracle)) {
    const std::size_t q = m->alphabet_size();
    json trans = json::array();
    for (std::size_t k = 0; k + 1 < m->num_vars(); ++k) {
      json mat = json::array();
      for (std::size_t x = 0; x < q; ++x) {
        std::vector<double> row(q);
        for (std::size_t y = 0; y < q; ++y) row[y] = m->transition(k, x, y);
        mat.push_back(row);
      }
      trans.push_back(mat);
    }
    return {{"variant", "markov"}, {"initial", m->initial()}, {"transitions", trans}};
  }
  if (const auto* pc = dynamic_cast<const PairCopyOracle*>(&oracle)) {
    return {{"variant", "paircopy"}, {"n", pc->num_vars()}, {"q", pc->alphabet_size()}};
  }
  if (const auto* a = dynamic_cast<const AffineCodeOracle*>(&oracle)) {
    json rows = json::array();
    for (std::size_t k = 0; k < a->matrix().rows(); ++k) {
      rows.push_back(gf2::to_hex(gf2::row_vector(a->matrix(), k)));
    }
    return {{"variant", "affine"}, {"n", a->num_vars()}, {"rows_hex", rows},
            {"v_hex", gf2::to_hex(a->rhs())}};
  }
  if (const auto* g = dynamic_cast<const GridMatchingOracle*>(&oracle)) {
    return {{"variant", "grid_matching"}, {"width", g->shape().width},
            {"height", g->shape().height}, {"column", g->column()}};
  }
  if (const auto* ap = dynamic_cast<const ApproximateOracle*>(&oracle)) {
    return {{"variant", "approximate"}, {"epsilon", ap->epsilon()}, {"delta", ap->delta()},
            {"seed", ap->seed()}, {"inner", to_json(*ap->inner())}};
  }
  if (const auto* h = dynamic_cast<const hardness::HardnessOracle*>(&oracle)) {
    return to_json(h->instance());
  }
  throw InstanceFormatError("cannot serialize oracle variant " + std::string(oracle.variant()));
}

inline OracleInstance oracle_from_json(const json& j) {
  if (looks_like_hardness(j)) {
    return hardness::marginal_oracle_view(hardness_from_json(j));
  }
  try {
    const auto variant = j.at("variant").get<std::string>();
    if (variant == "table") {
      return std::make_shared<TableOracle>(j.at("n").get<std::size_t>(), j.at("q").get<std::size_t>(),
                                           j.at("probs").get<std::vector<double>>());
    }
    if (variant == "product") {
      std::vector<Distribution> factors;
      for (const auto& f : j.at("factors")) {
        factors.emplace_back(f.get<std::vector<double>>());
      }
      return std::make_shared<ProductOracle>(std::move(factors));
    }
    if (variant == "markov") {
      std::vector<std::vector<double>> trans;
      for (const auto& mat : j.at("transitions")) {
        std::vector<double> flat;
        for (const auto& row : mat) {
          const auto r = row.get<std::vector<double>>();
          flat.insert(flat.end(), r.begin(), r.end());
        }
        trans.push_back(std::move(flat));
      }
      return std::make_shared<MarkovChainOracle>(
          Distribution(j.at("initial").get<std::vector<double>>()), std::move(trans));
    }
    if (variant == "paircopy") {
      return std::make_shared<PairCopyOracle>(j.at("n").get<std::size_t>(),
                                              j.at("q").get<std::size_t>());
    }
    if (variant == "affine") {
      const std::size_t n = j.at("n").get<std::size_t>();
      const auto rows = j.at("rows_hex").get<std::vector<std::string>>();
      gf2::BitMatrix b(rows.size(), n);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        gf2::set_row(b, k, gf2::from_hex(rows[k], n));
      }
      return std::make_shared<AffineCodeOracle>(
          std::move(b), gf2::from_hex(j.at("v_hex").get<std::string>(), rows.size()));
    }
    if (variant == "grid_matching") {
      const std::size_t w = j.at("width").get<std::size_t>();
      const std::size_t h = j.at("height").get<std::size_t>();
      const std::size_t col = j.contains("column") ? j.at("column").get<std::size_t>()
                                                   : (w == 0 ? 0 : (w - 1) / 2);
      return std::make_shared<GridMatchingOracle>(w, h, col);
    }
    if (variant == "approximate") {
      return approximate_wrap(oracle_from_json(j.at("inner")), j.at("epsilon").get<double>(),
                              j.at("delta").get<double>(), j.at("seed").get<uint64_t>());
    }
    throw InstanceFormatError("unknown oracle variant '" + variant + "'");
  } catch (const json::exception& e) {
    throw InstanceFormatError(std::string("oracle instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError(std::string("oracle instance: ") + e.what());
  }
}

// ---- builtin specs ---------------------------------------------------------

/// Parses "builtin:family:key=val,..." into its family and key/value map.
inline std::pair<std::string, std::map<std::string, std::string>> split_builtin(std::string_view spec) {
  constexpr std::string_view kPrefix = "builtin:";
  if (spec.substr(0, kPrefix.size()) != kPrefix) {
    throw InstanceFormatError("builtin spec must start with 'builtin:'");
  }
  spec.remove_prefix(kPrefix.size());
  const auto colon = spec.find(':');
  std::string family(spec.substr(0, colon));
  std::map<std::string, std::string> kv;
  if (colon != std::string_view::npos) {
    std::stringstream ss{std::string(spec.substr(colon + 1))};
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InstanceFormatError("builtin spec: expected key=value, got '" + item + "'");
      }
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return {family, kv};
}

/// builtin:product|markov|paircopy|table|grid|affine:key=val,...
/// Common keys: n, q, seed. table: zero (fraction of zero states).
/// grid: w, h, column. affine: n, rows. Any family accepts eps, delta and
/// noise_seed, which wrap the result in an approximate oracle.
inline OracleInstance builtin_oracle(std::string_view spec) {
  auto [family, kv] = split_builtin(spec);
  auto take_u = [&](const std::string& key, std::optional<uint64_t> fallback) -> uint64_t {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      if (!fallback) throw InstanceFormatError("builtin:" + family + " requires " + key + "=");
      return *fallback;
    }
    try {
      std::size_t used = 0;
      const auto v = std::stoull(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing");
      kv.erase(it);
      return v;
    } catch (const std::exception&) {
      throw InstanceFormatError("builtin spec: bad integer for " + key + ": '" + it->second + "'");
    }
  };
  auto take_d = [&](const std::string& key, double fallback) -> double {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing");
      kv.erase(it);
      return v;
    } catch (const std::exception&) {
      throw InstanceFormatError("builtin spec: bad number for " + key + ": '" + it->second + "'");
    }
  };

  const bool wrap = kv.count("eps") || kv.count("delta");
  const double eps = take_d("eps", 0.0);
  const double delta = take_d("delta", 0.0);
  const uint64_t noise_seed = take_u("noise_seed", 0);

  OracleInstance base;
  try {
    if (family == "product") {
      const auto n = take_u("n", std::nullopt);
      const auto q = take_u("q", 2);
      if (kv.count("seed")) {
        KeyedStream s(derive_key(take_u("seed", 0), domain::kInstance));
        std::vector<Distribution> factors;
        for (uint64_t i = 0; i < n; ++i) {
          std::vector<double> w(q);
          for (auto& x : w) x = -std::log(s.next_unit_open());
          factors.emplace_back(std::move(w));
        }
        base = std::make_shared<ProductOracle>(std::move(factors));
      } else {
        base = std::make_shared<ProductOracle>(ProductOracle::uniform(n, q));
      }
    } else if (family == "markov") {
      const auto n = take_u("n", std::nullopt);
      const auto q = take_u("q", 2);
      base = std::make_shared<MarkovChainOracle>(MarkovChainOracle::random(n, q, take_u("seed", 0)));
    } else if (family == "paircopy") {
      const auto n = take_u("n", std::nullopt);
      base = std::make_shared<PairCopyOracle>(n, take_u("q", 2));
    } else if (family == "table") {
      const auto n = take_u("n", std::nullopt);
      const auto q = take_u("q", 2);
      const auto seed = take_u("seed", 0);
      base = std::make_shared<TableOracle>(TableOracle::random(n, q, seed, take_d("zero", 0.0)));
    } else if (family == "grid") {
      const auto w = take_u("w", std::nullopt);
      const auto h = take_u("h", std::nullopt);
      const auto col = take_u("column", w == 0 ? 0 : (w - 1) / 2);
      base = std::make_shared<GridMatchingOracle>(w, h, col);
    } else if (family == "affine") {
      const auto n = take_u("n", std::nullopt);
      const auto rows = take_u("rows", n / 2);
      KeyedStream s(derive_key(take_u("seed", 0), domain::kInstance));
      auto b = hardness::detail::random_matrix(rows, n, s);
      // Right-hand side taken from a random point so the system is consistent.
      const auto point = hardness::detail::random_vector(n, s);
      gf2::BitVector v(rows);
      for (std::size_t k = 0; k < rows; ++k) {
        bool bit = false;
        for (std::size_t c = 0; c < n; ++c) bit ^= b.get(k, c) && point.get(c);
        v.set(k, bit);
      }
      base = std::make_shared<AffineCodeOracle>(std::move(b), std::move(v));
    } else {
      throw InstanceFormatError("unknown builtin family '" + family + "'");
    }
  } catch (const InstanceFormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError("builtin:" + family + ": " + e.what());
  }
  if (!kv.empty()) {
    throw InstanceFormatError("builtin:" + family + ": unknown key '" + kv.begin()->first + "'");
  }
  return wrap ? approximate_wrap(base, eps, delta, noise_seed) : base;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InstanceFormatError("cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InstanceFormatError("'" + path + "': " + e.what());
  }
}

/// A builtin spec or a path to an instance file.
inline OracleInstance load_oracle(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) {
    return builtin_oracle(spec);
  }
  return oracle_from_json(read_json_file(spec));
}

// ---- sampler output --------------------------------------------------------

inline json to_json(const SamplerTrace& trace) {
  json rounds = json::array();
  for (const auto& r : trace.per_round) {
    rounds.push_back({{"batch_size", r.batch_size},
                      {"window", {r.window_begin, r.window_end}},
                      {"first_mismatch", r.first_mismatch ? json(*r.first_mismatch) : json(nullptr)}});
  }
  return {{"rounds", trace.rounds},
          {"total_queries", trace.total_queries},
          {"a_history", trace.a_history},
          {"per_round", rounds}};
}

inline SamplerTrace trace_from_json(const json& j) {
  SamplerTrace t;
  t.rounds = j.at("rounds").get<std::size_t>();
  t.total_queries = j.at("total_queries").get<std::size_t>();
  t.a_history = j.at("a_history").get<std::vector<std::size_t>>();
  for (const auto& r : j.at("per_round")) {
    RoundRecord rec;
    rec.batch_size = r.at("batch_size").get<std::size_t>();
    rec.window_begin = r.at("window").at(0).get<std::size_t>();
    rec.window_end = r.at("window").at(1).get<std::size_t>();
    if (!r.at("first_mismatch").is_null()) {
      rec.first_mismatch = r.at("first_mismatch").get<std::size_t>();
    }
    t.per_round.push_back(rec);
  }
  return t;
}

inline json to_json(const Sample& s, std::size_t q) {
  return {{"n", s.values.size()}, {"q", q}, {"values", s.values}};
}

// ---- diagnostics -----------------------------------------------------------

inline json to_json(const diagnostics::DistanceReport& r) {
  return {{"lhs", r.lhs},
          {"rhs_bound", r.rhs_bound},
          {"evaluation", diagnostics::to_string(r.evaluation)},
          {"standard_error", r.standard_error},
          {"samples", r.samples},
          {"log_base", "e"}};
}

inline json to_json(const diagnostics::ScalingFit& f) {
  return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

inline json to_json(const hardness::NoInfoReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"block", r.block},
                    {"block_size", r.block_size},
                    {"a", r.a},
                    {"codim", r.codim},
                    {"trials", r.trials},
                    {"predicted", r.expect_zero ? "zero" : "2^(a-d)"},
                    {"frequency", r.frequency},
                    {"standard_error", r.standard_error},
                    {"instance_frequency", r.instance_frequency},
                    {"bound", r.bound}});
  }
  json balance = json::array();
  for (const auto& b : rep.balance) {
    balance.push_back({{"codim", b.codim},
                       {"trials", b.trials},
                       {"radius", b.radius},
                       {"frequency", b.frequency},
                       {"bound", b.bound}});
  }
  return {{"blocks", rows}, {"balance", balance}, {"rank_rejections", rep.rank_rejections}};
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << j.dump(2) << '\n';
}

}  // namespace parsample::io
