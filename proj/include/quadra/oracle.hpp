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

#ifndef QUADRA_ORACLE_HPP_
#define QUADRA_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadra/pbf.hpp"
#include "quadra/qaoa.hpp"
#include "quadra/reduce.hpp"

namespace quadra {

/// Exhaustive-search ceiling. 2^24 doubles is the largest table that still
/// evaluates in seconds at desk scale; larger requests fail loudly instead
/// of silently sampling.
inline constexpr std::size_t kMaxExhaustiveVars = 24;

/// Evaluates f on every assignment, indexed by bitmask (bit v = variable v).
/// Runs one superset-accumulation pass per term, so each table entry is a
/// fixed-order sum — deterministic to the last bit, which makes exact
/// tie collection safe. Throws std::length_error above the capacity guard.
inline std::vector<double> evaluate_all(const Pbf& f) {
  const std::size_t n = f.num_vars();
  if (n > kMaxExhaustiveVars) {
    throw std::length_error("exhaustive evaluation capped at " +
                            std::to_string(kMaxExhaustiveVars) +
                            " variables, got " + std::to_string(n));
  }
  std::vector<double> table(std::size_t{1} << n, 0.0);
  const std::uint32_t full = (n == 0) ? 0u : static_cast<std::uint32_t>(
                                                 (std::uint64_t{1} << n) - 1);
  for (const auto& [key, coeff] : f.terms()) {
    std::uint32_t mask = 0;
    for (VarId v : key) mask |= std::uint32_t{1} << v;
    const std::uint32_t free = full & ~mask;
    // Walk every subset of the complement; the term is live on mask|s.
    std::uint32_t s = free;
    for (;;) {
      table[mask | s] += coeff;
      if (s == 0) break;
      s = (s - 1) & free;
    }
  }
  return table;
}

/// Exhaustive minimisation outcome. argmin_set lists every minimising
/// assignment (exact double-equality ties), in ascending bitmask order.
struct BruteForceReport {
  double min_value = 0.0;
  std::vector<std::vector<std::uint8_t>> argmin_set;
  std::uint64_t evaluations = 0;
};

inline std::vector<std::uint8_t> bits_of(std::uint32_t mask, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  for (std::size_t v = 0; v < n; ++v) bits[v] = (mask >> v) & 1u;
  return bits;
}

/// Enumerates all 2^n assignments. Capacity guard as in evaluate_all.
inline BruteForceReport brute_force_min(const Pbf& f) {
  const std::vector<double> table = evaluate_all(f);
  BruteForceReport report;
  report.evaluations = table.size();
  report.min_value = table[0];
  for (double v : table) report.min_value = std::min(report.min_value, v);
  for (std::size_t x = 0; x < table.size(); ++x) {
    if (table[x] == report.min_value) {
      report.argmin_set.push_back(
          bits_of(static_cast<std::uint32_t>(x), f.num_vars()));
    }
  }
  return report;
}

/// Detailed validity check of a reduction: passes iff for every original
/// assignment x, min over auxiliaries y of reduced(x, y) equals f(x) within
/// `tol`. On failure, `assignment` holds the offending x.
struct QuadratisationCheck {
  bool pass = true;
  std::vector<std::uint8_t> assignment;
  double expected = 0.0;  ///< f(x)
  double observed = 0.0;  ///< min_y reduced(x, y)
};

inline QuadratisationCheck check_quadratisation_detail(
    const Pbf& f, const ReductionResult& result, double tol = 1e-9) {
  const std::size_t n = f.num_vars();
  const std::size_t total = result.reduced.num_vars();
  if (total < n) {
    throw std::invalid_argument("reduced polynomial has fewer variables than input");
  }
  if (result.original_num_vars != n) {
    throw std::invalid_argument("reduction was produced for a different input size");
  }
  if (total > kMaxExhaustiveVars) {
    throw std::length_error("exhaustive check capped at " +
                            std::to_string(kMaxExhaustiveVars) +
                            " variables, got " + std::to_string(total));
  }
  const std::vector<double> reduced_table = evaluate_all(result.reduced);
  const std::vector<double> original_table = evaluate_all(f);
  const std::size_t aux = total - n;
  QuadratisationCheck check;
  for (std::size_t x = 0; x < original_table.size(); ++x) {
    double best = reduced_table[x];
    for (std::size_t y = 1; y < (std::size_t{1} << aux); ++y) {
      best = std::min(best, reduced_table[x | (y << n)]);
    }
    if (std::abs(best - original_table[x]) > tol) {
      check.pass = false;
      check.assignment = bits_of(static_cast<std::uint32_t>(x), n);
      check.expected = original_table[x];
      check.observed = best;
      return check;
    }
  }
  return check;
}

/// True iff the reduction preserves f pointwise under minimisation over the
/// auxiliary variables (tolerance 1e-9).
inline bool check_quadratisation(const Pbf& f, const ReductionResult& result) {
  return check_quadratisation_detail(f, result).pass;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  if (r > std::numbers::pi) r -= two_pi;
  return r;
}

/// Distance between two phases modulo 2*pi.
inline double phase_distance(double a, double b) {
  return std::abs(wrap_phase(a - b));
}

/// Basis-state walk of a circuit. Every supported gate is diagonal or a bit
/// permutation, so a full statevector is never needed.
struct PhaseTrace {
  std::vector<std::uint8_t> input_bits;
  std::vector<std::uint8_t> output_bits;
  double phase = 0.0;  ///< radians, wrapped into (-pi, pi]
};

/// Walks the gate list on one computational basis state. Cx flips the
/// target bit when the control bit is 1; Rz(q, theta) contributes
/// -theta/2 when bit q is 0 and +theta/2 when it is 1; RzK(T, theta)
/// contributes -theta/2 on even parity over T and +theta/2 on odd.
/// Throws std::invalid_argument on an input length mismatch.
inline PhaseTrace simulate_phase(const Circuit& c,
                                 std::span<const std::uint8_t> input_bits) {
  if (input_bits.size() != c.num_qubits) {
    throw std::invalid_argument("input length " +
                                std::to_string(input_bits.size()) +
                                " != num_qubits " +
                                std::to_string(c.num_qubits));
  }
  PhaseTrace trace;
  trace.input_bits.assign(input_bits.begin(), input_bits.end());
  std::vector<std::uint8_t> bits = trace.input_bits;
  double phase = 0.0;
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::Cx:
        bits[g.qubits[1]] ^= bits[g.qubits[0]];
        break;
      case GateKind::Rz:
        phase += bits[g.qubits[0]] ? g.angle / 2.0 : -g.angle / 2.0;
        break;
      case GateKind::RzK: {
        std::uint8_t parity = 0;
        for (VarId q : g.qubits) parity ^= bits[q];
        phase += parity ? g.angle / 2.0 : -g.angle / 2.0;
        break;
      }
    }
  }
  trace.output_bits = std::move(bits);
  trace.phase = wrap_phase(phase);
  return trace;
}

}  // namespace quadra

#endif  // QUADRA_ORACLE_HPP_
