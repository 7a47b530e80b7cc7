// Copyright 2026 The Quadra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUADRA_REDUCE_HPP_
#define QUADRA_REDUCE_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quadra/multigraph.hpp"
#include "quadra/pbf.hpp"

namespace quadra {

/// How the next variable pair is chosen during reduction. Every candidate
/// pair comes from a monomial of degree >= 3, which guarantees each step
/// lowers the total excess degree; a pair's rank is how often it occurs
/// across *all* stored monomials (the interaction-graph edge multiplicity).
enum class SelectionStrategy {
  /// Scans only the lexicographically-first monomial of maximal degree and
  /// takes its first pair that recurs elsewhere (multiplicity >= 2), or
  /// simply its first pair when none recurs. Cheapest search, weakest
  /// consolidation: later duplication is ignored, so more substitutions are
  /// usually needed, but interactions stay concentrated on the scanned
  /// monomial's variables and the resulting quadratic stays sparse.
  Sparse,
  /// Candidates: pairs inside all monomials of maximal degree; picks the
  /// one occurring in the most maximal-degree monomials, with residual ties
  /// broken by total multiplicity and then lexicographically. Consolidates
  /// the top-degree layer only.
  Medium,
  /// Candidates: pairs inside all monomials of degree >= 3; picks the one
  /// with the highest multiplicity, ties broken lexicographically. Widest
  /// scan, strongest consolidation, densest resulting quadratic.
  Dense,
};

inline std::string to_string(SelectionStrategy s) {
  switch (s) {
    case SelectionStrategy::Sparse: return "sparse";
    case SelectionStrategy::Medium: return "medium";
    case SelectionStrategy::Dense: return "dense";
  }
  throw std::invalid_argument("unknown strategy value");
}

inline SelectionStrategy strategy_from_string(const std::string& s) {
  if (s == "sparse") return SelectionStrategy::Sparse;
  if (s == "medium") return SelectionStrategy::Medium;
  if (s == "dense") return SelectionStrategy::Dense;
  throw std::invalid_argument("unknown strategy '" + s +
                              "' (expected sparse, medium, or dense)");
}

/// One substitution: auxiliary h replaced the product of variables i and j.
/// pair_multiplicity records the interaction-graph multiplicity of (i, j)
/// at the moment of selection (it is not serialized in traces).
struct ReductionStep {
  VarId i = 0;
  VarId j = 0;
  VarId h = 0;
  std::uint64_t pair_multiplicity = 0;
};

inline bool operator==(const ReductionStep& a, const ReductionStep& b) {
  return a.i == b.i && a.j == b.j && a.h == b.h;
}

/// Outcome of a full reduction to degree <= 2.
struct ReductionResult {
  Pbf reduced;
  std::vector<ReductionStep> steps;
  double penalty_weight = 0.0;
  std::size_t original_num_vars = 0;
  double elapsed_ms = 0.0;  ///< wall-clock time of the reduction loop only

  std::size_t introduced_vars() const { return steps.size(); }
};

/// Penalty weight that always preserves minima: 1 + the sum of coefficient
/// magnitudes. Any broken auxiliary then costs more than any possible gain
/// from corrupted monomials, so consistent auxiliaries are forced and the
/// reduced polynomial reproduces the original value at every assignment.
inline double default_penalty_weight(const Pbf& f) {
  double total = 0.0;
  for (const auto& [key, coeff] : f.terms()) total += std::abs(coeff);
  return 1.0 + total;
}

namespace detail {

struct PairChoice {
  VarId i = 0;
  VarId j = 0;
  std::uint64_t multiplicity = 0;
};

/// Core selection against a prebuilt interaction graph of `f`.
inline PairChoice select_on_graph(const Pbf& f, const MultiGraph& graph,
                                  SelectionStrategy strategy) {
  const std::size_t deg = f.degree();
  if (deg <= 2) {
    throw std::invalid_argument(
        "nothing to select: polynomial degree is already <= 2");
  }

  // Collect candidate pairs from the monomials the strategy scans.
  // std::set iterates in ascending (i, j) order, which implements the
  // lexicographic tie-break for free. Medium additionally counts how many
  // scanned (maximal-degree) monomials each pair occurs in.
  std::set<std::pair<VarId, VarId>> candidates;
  std::map<std::pair<VarId, VarId>, std::uint64_t> scan_counts;
  auto add_pairs = [&candidates, &scan_counts](const MonomialKey& key) {
    for (std::size_t a = 0; a + 1 < key.size(); ++a) {
      for (std::size_t b = a + 1; b < key.size(); ++b) {
        candidates.insert({key[a], key[b]});
        ++scan_counts[{key[a], key[b]}];
      }
    }
  };
  switch (strategy) {
    case SelectionStrategy::Sparse: {
      for (const auto& [key, coeff] : f.terms()) {
        if (key.size() == deg) {
          add_pairs(key);  // first maximal-degree key in lexicographic order
          break;
        }
      }
      // Take the first pair that recurs somewhere else (a multi-edge), not
      // the most frequent one: Sparse does not consolidate beyond that.
      PairChoice fallback;
      bool have_fallback = false;
      for (const auto& [a, b] : candidates) {
        auto it = graph.edges.find({a, b});
        const std::uint64_t mult = it == graph.edges.end() ? 0 : it->second;
        if (mult >= 2) return {a, b, mult};
        if (!have_fallback) {
          fallback = {a, b, mult};
          have_fallback = true;
        }
      }
      if (!have_fallback) {
        throw std::logic_error("no candidate pair found at degree >= 3");
      }
      return fallback;
    }
    case SelectionStrategy::Medium:
      for (const auto& [key, coeff] : f.terms()) {
        if (key.size() == deg) add_pairs(key);
      }
      break;
    case SelectionStrategy::Dense:
      for (const auto& [key, coeff] : f.terms()) {
        if (key.size() >= 3) add_pairs(key);
      }
      break;
  }

  // Rank candidates. Dense uses total multiplicity alone; Medium ranks by
  // occurrences within the maximal-degree layer first and total multiplicity
  // second. Ascending iteration plus strictly-greater comparison keeps the
  // lexicographically smallest pair among rank ties.
  PairChoice best;
  std::uint64_t best_scan = 0;
  bool have = false;
  for (const auto& [a, b] : candidates) {
    auto it = graph.edges.find({a, b});
    const std::uint64_t mult = it == graph.edges.end() ? 0 : it->second;
    const std::uint64_t scan =
        strategy == SelectionStrategy::Medium ? scan_counts[{a, b}] : 0;
    if (!have || scan > best_scan ||
        (scan == best_scan && mult > best.multiplicity)) {
      best = {a, b, mult};
      best_scan = scan;
      have = true;
    }
  }
  if (!have) {
    throw std::logic_error("no candidate pair found at degree >= 3");
  }
  return best;
}

}  // namespace detail

/// Picks the next pair to substitute. Throws std::invalid_argument when the
/// polynomial is already quadratic or lower.
inline std::pair<VarId, VarId> select_pair(const Pbf& f,
                                           SelectionStrategy strategy) {
  auto choice = detail::select_on_graph(f, build_graph(f), strategy);
  return {choice.i, choice.j};
}

/// Replaces the product x_i * x_j by a fresh variable x_h in every monomial
/// containing both i and j (the standalone quadratic included), then adds
/// the penalty  w * (3 x_h + x_i x_j - 2 x_i x_h - 2 x_j x_h), which is 0
/// exactly when x_h = x_i * x_j and at least w otherwise.
/// Requires i != j, both < f.num_vars(), h == f.num_vars(), and w > 0.
inline Pbf substitute_pair(const Pbf& f, VarId i, VarId j, VarId h, double w) {
  if (i == j) throw std::invalid_argument("pair variables must be distinct");
  if (i > j) std::swap(i, j);
  if (j >= f.num_vars()) {
    throw std::out_of_range("pair variable " + std::to_string(j) +
                            " out of range for num_vars " +
                            std::to_string(f.num_vars()));
  }
  if (h != f.num_vars()) {
    throw std::out_of_range("auxiliary must be the next fresh index " +
                            std::to_string(f.num_vars()) + ", got " +
                            std::to_string(h));
  }
  if (!(w > 0.0)) throw std::invalid_argument("penalty weight must be positive");

  Pbf out(f.num_vars() + 1);
  MonomialKey rewritten;
  for (const auto& [key, coeff] : f.terms()) {
    bool has_i = std::binary_search(key.begin(), key.end(), i);
    bool has_j = std::binary_search(key.begin(), key.end(), j);
    if (has_i && has_j) {
      rewritten.clear();
      for (VarId v : key) {
        if (v != i && v != j) rewritten.push_back(v);
      }
      rewritten.push_back(h);  // h is larger than every existing index
      out.add_term(rewritten, coeff);
    } else {
      out.add_term(key, coeff);
    }
  }
  out.add_term({h}, 3.0 * w);
  out.add_term({i, j}, w);
  out.add_term({i, h}, -2.0 * w);
  out.add_term({j, h}, -2.0 * w);
  return out;
}

/// Reduces `f` to degree <= 2 by repeated pair substitution. The penalty
/// weight defaults to default_penalty_weight(f) (computed once, on the
/// input); pass an explicit positive weight to override. elapsed_ms times
/// the selection+substitution loop only.
inline ReductionResult quadratize(
    const Pbf& f, SelectionStrategy strategy,
    std::optional<double> penalty_weight = std::nullopt) {
  double w = penalty_weight ? *penalty_weight : default_penalty_weight(f);
  if (!(w > 0.0)) throw std::invalid_argument("penalty weight must be positive");

  ReductionResult result;
  result.penalty_weight = w;
  result.original_num_vars = f.num_vars();

  Pbf current = f;
  auto start = std::chrono::steady_clock::now();
  while (current.degree() > 2) {
    auto choice = detail::select_on_graph(current, build_graph(current), strategy);
    VarId h = static_cast<VarId>(current.num_vars());
    result.steps.push_back({choice.i, choice.j, h, choice.multiplicity});
    current = substitute_pair(current, choice.i, choice.j, h, w);
  }
  auto stop = std::chrono::steady_clock::now();
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  result.reduced = std::move(current);
  return result;
}

/// Result of projecting an extended assignment back to original variables.
struct DecodedAssignment {
  std::vector<std::uint8_t> assignment;  ///< first original_num_vars bits
  /// True when every auxiliary equals the product it stands for.
  bool consistent = true;
};

/// Projects an assignment over the reduced variable set onto the original
/// variables and reports whether all auxiliaries are consistent.
/// Throws std::invalid_argument on a length mismatch.
inline DecodedAssignment decode_assignment(
    const ReductionResult& result, std::span<const std::uint8_t> extended) {
  if (extended.size() != result.reduced.num_vars()) {
    throw std::invalid_argument("extended assignment length " +
                                std::to_string(extended.size()) +
                                " != reduced num_vars " +
                                std::to_string(result.reduced.num_vars()));
  }
  DecodedAssignment out;
  out.assignment.assign(extended.begin(),
                        extended.begin() +
                            static_cast<std::ptrdiff_t>(result.original_num_vars));
  for (const ReductionStep& s : result.steps) {
    // Steps substitute in order, so i and j are always already defined here.
    if (extended[s.h] != (extended[s.i] & extended[s.j])) {
      out.consistent = false;
      break;
    }
  }
  return out;
}

/// Trace serialization:
/// {"penalty_weight": w, "original_num_vars": n, "introduced_vars": m,
///  "elapsed_ms": t, "steps": [{"i":..,"j":..,"h":..}, ...], "reduced": {...}}
inline void to_json(nlohmann::json& j, const ReductionResult& r) {
  j = nlohmann::json::object();
  j["penalty_weight"] = r.penalty_weight;
  j["original_num_vars"] = r.original_num_vars;
  j["introduced_vars"] = r.introduced_vars();
  j["elapsed_ms"] = r.elapsed_ms;
  nlohmann::json steps = nlohmann::json::array();
  for (const ReductionStep& s : r.steps) {
    steps.push_back({{"i", s.i}, {"j", s.j}, {"h", s.h}});
  }
  j["steps"] = std::move(steps);
  j["reduced"] = r.reduced;
}

inline void from_json(const nlohmann::json& j, ReductionResult& r) {
  r = ReductionResult{};
  r.penalty_weight = j.at("penalty_weight").get<double>();
  r.reduced = j.at("reduced").get<Pbf>();
  for (const auto& js : j.at("steps")) {
    ReductionStep s;
    s.i = js.at("i").get<VarId>();
    s.j = js.at("j").get<VarId>();
    s.h = js.at("h").get<VarId>();
    r.steps.push_back(s);
  }
  if (j.contains("original_num_vars")) {
    r.original_num_vars = j.at("original_num_vars").get<std::size_t>();
  } else {
    r.original_num_vars = r.reduced.num_vars() - r.steps.size();
  }
  if (j.contains("elapsed_ms")) r.elapsed_ms = j.at("elapsed_ms").get<double>();
}

}  // namespace quadra

#endif  // QUADRA_REDUCE_HPP_
