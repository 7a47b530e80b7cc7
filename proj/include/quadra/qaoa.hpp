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

#ifndef QUADRA_QAOA_HPP_
#define QUADRA_QAOA_HPP_

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quadra/pbf.hpp"
#include "quadra/reduce.hpp"

namespace quadra {

/// Diagonal Hamiltonian in the Z basis: constant + sum over non-empty sorted
/// qubit subsets T of w_T * prod_{q in T} Z_q. No stored weight is zero.
struct IsingPoly {
  std::size_t num_qubits = 0;
  std::map<std::vector<VarId>, double> terms;
  double constant = 0.0;
};

enum class GateKind { Rz, Cx, RzK };

/// One gate. Rz holds {qubit}; Cx holds {control, target}; RzK holds a
/// sorted list of >= 2 distinct qubits. `angle` is in radians (unused for
/// Cx). Rz(theta) = diag(e^{-i theta/2}, e^{+i theta/2}); RzK applies
/// e^{-i theta/2} on even parity of its qubits' bits and e^{+i theta/2} on
/// odd parity.
struct Gate {
  GateKind kind = GateKind::Rz;
  std::vector<VarId> qubits;
  double angle = 0.0;

  static Gate rz(VarId q, double theta) { return {GateKind::Rz, {q}, theta}; }
  static Gate cx(VarId control, VarId target) {
    return {GateKind::Cx, {control, target}, 0.0};
  }
  static Gate rzk(std::vector<VarId> qs, double theta) {
    return {GateKind::RzK, std::move(qs), theta};
  }
};

inline bool operator==(const Gate& a, const Gate& b) {
  return a.kind == b.kind && a.qubits == b.qubits && a.angle == b.angle;
}

/// An ordered gate list over a fixed qubit register.
struct Circuit {
  std::size_t num_qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(std::size_t n) : num_qubits(n) {}

  /// Appends after validating qubit indices, Cx distinctness, and RzK shape
  /// (sorted, distinct, arity >= 2). Throws std::invalid_argument.
  void append(Gate g) {
    for (VarId q : g.qubits) {
      if (q >= num_qubits) {
        throw std::invalid_argument("qubit " + std::to_string(q) +
                                    " out of range for register of " +
                                    std::to_string(num_qubits));
      }
    }
    switch (g.kind) {
      case GateKind::Rz:
        if (g.qubits.size() != 1) {
          throw std::invalid_argument("rz takes exactly one qubit");
        }
        break;
      case GateKind::Cx:
        if (g.qubits.size() != 2 || g.qubits[0] == g.qubits[1]) {
          throw std::invalid_argument("cx needs two distinct qubits");
        }
        break;
      case GateKind::RzK:
        if (g.qubits.size() < 2) {
          throw std::invalid_argument("rzk needs at least two qubits");
        }
        for (std::size_t k = 0; k + 1 < g.qubits.size(); ++k) {
          if (g.qubits[k] >= g.qubits[k + 1]) {
            throw std::invalid_argument("rzk qubits must be sorted and distinct");
          }
        }
        break;
    }
    gates.push_back(std::move(g));
  }
};

/// Gate totals by arity class, plus greedy depth. two_qubit counts Cx and
/// arity-2 RzK; higher_order counts RzK of arity >= 3.
struct CircuitMetrics {
  std::uint64_t total_gates = 0;
  std::uint64_t single_qubit_gates = 0;
  std::uint64_t two_qubit_gates = 0;
  std::uint64_t higher_order_gates = 0;
  std::uint64_t depth = 0;
};

inline bool operator==(const CircuitMetrics& a, const CircuitMetrics& b) {
  return a.total_gates == b.total_gates &&
         a.single_qubit_gates == b.single_qubit_gates &&
         a.two_qubit_gates == b.two_qubit_gates &&
         a.higher_order_gates == b.higher_order_gates && a.depth == b.depth;
}

/// Rewrites a 0/1 polynomial into the Z basis via x_j = (1 - Z_j)/2: each
/// monomial of support S contributes coeff * (-1)^{|T|} / 2^{|S|} to every
/// subset T of S. Exact-zero weights are dropped (coefficients here are
/// dyadic, so cancellation is exact).
inline IsingPoly pubo_to_ising(const Pbf& f) {
  IsingPoly h;
  h.num_qubits = f.num_vars();
  for (const auto& [key, coeff] : f.terms()) {
    if (key.empty()) {
      h.constant += coeff;
      continue;
    }
    const std::size_t k = key.size();
    const double base = coeff / static_cast<double>(1ull << k);
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
      std::vector<VarId> subset;
      for (std::size_t b = 0; b < k; ++b) {
        if (mask & (1ull << b)) subset.push_back(key[b]);
      }
      const double w = (subset.size() % 2 == 0) ? base : -base;
      if (subset.empty()) {
        h.constant += w;
      } else {
        h.terms[subset] += w;
      }
    }
  }
  for (auto it = h.terms.begin(); it != h.terms.end();) {
    it = it->second == 0.0 ? h.terms.erase(it) : std::next(it);
  }
  return h;
}

/// One phase gate per Ising term, in lexicographic subset order: Rz for
/// singletons, RzK otherwise, each with angle 2 * gamma * weight. The
/// constant becomes global phase and emits nothing.
inline Circuit map_to_gates(const IsingPoly& h, double gamma) {
  Circuit c(h.num_qubits);
  for (const auto& [subset, w] : h.terms) {
    const double angle = 2.0 * gamma * w;
    if (subset.size() == 1) {
      c.append(Gate::rz(subset[0], angle));
    } else {
      c.append(Gate::rzk(subset, angle));
    }
  }
  return c;
}

/// Expands every RzK over qubits q1 < ... < qk into the parity ladder
/// CX(q1,q2) ... CX(q_{k-1},q_k), Rz(q_k, theta), then the same CX chain
/// mirrored — 2(k-1) CX around one Rz. Rz and Cx pass through unchanged.
inline Circuit decompose(const Circuit& c) {
  Circuit out(c.num_qubits);
  for (const Gate& g : c.gates) {
    if (g.kind != GateKind::RzK) {
      out.append(g);
      continue;
    }
    const auto& q = g.qubits;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) {
      out.append(Gate::cx(q[k], q[k + 1]));
    }
    out.append(Gate::rz(q.back(), g.angle));
    for (std::size_t k = q.size() - 1; k-- > 0;) {
      out.append(Gate::cx(q[k], q[k + 1]));
    }
  }
  return out;
}

/// Greedy layering in the given gate order, no reordering: each gate lands
/// on layer 1 + max(frontier of its qubits); depth is the highest layer.
inline std::uint64_t depth(const Circuit& c) {
  std::vector<std::uint64_t> frontier(c.num_qubits, 0);
  std::uint64_t deepest = 0;
  for (const Gate& g : c.gates) {
    std::uint64_t layer = 0;
    for (VarId q : g.qubits) layer = std::max(layer, frontier[q]);
    ++layer;
    for (VarId q : g.qubits) frontier[q] = layer;
    deepest = std::max(deepest, layer);
  }
  return deepest;
}

inline CircuitMetrics metrics(const Circuit& c) {
  CircuitMetrics m;
  m.total_gates = c.gates.size();
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::Rz:
        ++m.single_qubit_gates;
        break;
      case GateKind::Cx:
        ++m.two_qubit_gates;
        break;
      case GateKind::RzK:
        if (g.qubits.size() == 2) {
          ++m.two_qubit_gates;
        } else {
          ++m.higher_order_gates;
        }
        break;
    }
  }
  m.depth = depth(c);
  return m;
}

/// Result of compiling a polynomial straight into gates (map, then
/// decompose). ising_constant is the dropped global-phase offset.
struct MdCompilation {
  Circuit circuit;  ///< decomposed: Rz and Cx only
  CircuitMetrics metrics;
  double ising_constant = 0.0;
};

/// Result of reducing to quadratic first, then compiling the reduced
/// polynomial. The circuit acts on original + auxiliary qubits.
struct RmdCompilation {
  ReductionResult reduction;
  Circuit circuit;  ///< decomposed: Rz and Cx only
  CircuitMetrics metrics;
  double ising_constant = 0.0;
};

/// Direct path: higher-order terms become multi-qubit parity ladders.
inline MdCompilation compile_md(const Pbf& f, double gamma) {
  MdCompilation out;
  IsingPoly h = pubo_to_ising(f);
  out.ising_constant = h.constant;
  out.circuit = decompose(map_to_gates(h, gamma));
  out.metrics = metrics(out.circuit);
  return out;
}

/// Reduce-first path: quadratise, then compile the reduced polynomial, so
/// every parity ladder has length 2 (one CX pair per coupling).
inline RmdCompilation compile_rmd(const Pbf& f, SelectionStrategy strategy,
                                  double gamma,
                                  std::optional<double> penalty_weight = std::nullopt) {
  RmdCompilation out;
  out.reduction = quadratize(f, strategy, penalty_weight);
  IsingPoly h = pubo_to_ising(out.reduction.reduced);
  out.ising_constant = h.constant;
  out.circuit = decompose(map_to_gates(h, gamma));
  out.metrics = metrics(out.circuit);
  return out;
}

namespace detail {

inline std::string format_angle(double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", a);
  return buf;
}

}  // namespace detail

/// Plain-text circuit listing: `qubits <n>`, then one line per gate —
/// `rz q<i> <angle>`, `cx q<i> q<j>`, `rzk q<i1> ... q<ik> <angle>` —
/// with angles printed to 12 significant digits.
inline std::string to_qasm_text(const Circuit& c) {
  std::ostringstream out;
  out << "qubits " << c.num_qubits << "\n";
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::Rz:
        out << "rz q" << g.qubits[0] << " " << detail::format_angle(g.angle) << "\n";
        break;
      case GateKind::Cx:
        out << "cx q" << g.qubits[0] << " q" << g.qubits[1] << "\n";
        break;
      case GateKind::RzK:
        out << "rzk";
        for (VarId q : g.qubits) out << " q" << q;
        out << " " << detail::format_angle(g.angle) << "\n";
        break;
    }
  }
  return out.str();
}

inline void to_json(nlohmann::json& j, const CircuitMetrics& m) {
  j = nlohmann::json::object();
  j["total_gates"] = m.total_gates;
  j["single_qubit_gates"] = m.single_qubit_gates;
  j["two_qubit_gates"] = m.two_qubit_gates;
  j["higher_order_gates"] = m.higher_order_gates;
  j["depth"] = m.depth;
}

inline std::string metrics_csv_header() {
  return "n,strategy,qubits,single_q,two_q,depth,introduced_vars,reduce_ms";
}

/// One metrics CSV row; `strategy` is empty on the direct path.
inline std::string metrics_csv_row(std::size_t n, const std::string& strategy,
                                   std::size_t qubits, const CircuitMetrics& m,
                                   std::size_t introduced_vars,
                                   double reduce_ms) {
  char ms[64];
  std::snprintf(ms, sizeof ms, "%.3f", reduce_ms);
  std::ostringstream out;
  out << n << "," << strategy << "," << qubits << "," << m.single_qubit_gates
      << "," << m.two_qubit_gates << "," << m.depth << "," << introduced_vars
      << "," << ms;
  return out.str();
}

}  // namespace quadra

#endif  // QUADRA_QAOA_HPP_
