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

#ifndef QUADRA_MULTIGRAPH_HPP_
#define QUADRA_MULTIGRAPH_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quadra/pbf.hpp"

namespace quadra {

/// Undirected multigraph over the variables of a polynomial. The
/// multiplicity of edge {a,b} counts how many stored monomials of size >= 2
/// contain both a and b; monomials of size < 2 contribute nothing.
/// Coefficient values are irrelevant (only which monomials exist matters).
struct MultiGraph {
  std::size_t num_vertices = 0;
  /// (a,b) with a < b  ->  multiplicity (always >= 1 when present).
  std::map<std::pair<VarId, VarId>, std::uint64_t> edges;
};

/// Aggregate statistics of a multigraph.
struct GraphStats {
  std::uint64_t total_edge_count = 0;   ///< sum of multiplicities
  std::uint64_t distinct_edge_count = 0;
  std::uint64_t multi_edge_mass = 0;    ///< sum of multiplicities over edges with multiplicity >= 2
  std::uint64_t max_multiplicity = 0;
  /// Per-vertex degree counting parallel edges (sum of incident multiplicities).
  std::vector<std::uint64_t> vertex_degrees;
};

/// Builds the interaction multigraph of `f`: one edge per unordered variable
/// pair per monomial of size >= 2 that contains the pair.
inline MultiGraph build_graph(const Pbf& f) {
  MultiGraph g;
  g.num_vertices = f.num_vars();
  for (const auto& [key, coeff] : f.terms()) {
    for (std::size_t a = 0; a + 1 < key.size(); ++a) {
      for (std::size_t b = a + 1; b < key.size(); ++b) {
        ++g.edges[{key[a], key[b]}];
      }
    }
  }
  return g;
}

inline GraphStats graph_stats(const MultiGraph& g) {
  GraphStats s;
  s.vertex_degrees.assign(g.num_vertices, 0);
  for (const auto& [edge, mult] : g.edges) {
    s.total_edge_count += mult;
    ++s.distinct_edge_count;
    if (mult >= 2) s.multi_edge_mass += mult;
    s.max_multiplicity = std::max(s.max_multiplicity, mult);
    s.vertex_degrees[edge.first] += mult;
    s.vertex_degrees[edge.second] += mult;
  }
  return s;
}

/// True when any edge has multiplicity >= 2.
inline bool has_multi_edges(const MultiGraph& g) {
  for (const auto& [edge, mult] : g.edges) {
    if (mult >= 2) return true;
  }
  return false;
}

/// Graphviz DOT rendering. Parallel edges are written once per unit of
/// multiplicity. Vertex label lines appear only when `labels` is non-empty,
/// in which case it must cover every vertex. Output is deterministic:
/// vertices ascending, edges in (a,b) order.
inline std::string export_dot(const MultiGraph& g,
                              std::span<const std::string> labels = {}) {
  if (!labels.empty() && labels.size() != g.num_vertices) {
    throw std::invalid_argument("label count " + std::to_string(labels.size()) +
                                " != num_vertices " +
                                std::to_string(g.num_vertices));
  }
  std::ostringstream out;
  out << "graph interactions {\n";
  if (!labels.empty()) {
    for (std::size_t v = 0; v < g.num_vertices; ++v) {
      out << "  v" << v << " [label=\"" << labels[v] << "\"];\n";
    }
  }
  for (const auto& [edge, mult] : g.edges) {
    for (std::uint64_t k = 0; k < mult; ++k) {
      out << "  v" << edge.first << " -- v" << edge.second << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

/// {"num_vertices": n, "edges": [{"a": .., "b": .., "multiplicity": ..}, ...]}
/// in ascending (a,b) order.
inline void to_json(nlohmann::json& j, const MultiGraph& g) {
  j = nlohmann::json::object();
  j["num_vertices"] = g.num_vertices;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [edge, mult] : g.edges) {
    edges.push_back(
        {{"a", edge.first}, {"b", edge.second}, {"multiplicity", mult}});
  }
  j["edges"] = std::move(edges);
}

inline void to_json(nlohmann::json& j, const GraphStats& s) {
  j = nlohmann::json::object();
  j["total_edge_count"] = s.total_edge_count;
  j["distinct_edge_count"] = s.distinct_edge_count;
  j["multi_edge_mass"] = s.multi_edge_mass;
  j["max_multiplicity"] = s.max_multiplicity;
  j["vertex_degrees"] = s.vertex_degrees;
}

}  // namespace quadra

#endif  // QUADRA_MULTIGRAPH_HPP_
