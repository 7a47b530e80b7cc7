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

#ifndef QUADRA_SWEEP_HPP_
#define QUADRA_SWEEP_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "quadra/qaoa.hpp"
#include "quadra/reduce.hpp"
#include "quadra/sched.hpp"

namespace quadra {

/// Grid description for a metrics sweep over scheduling instances: every
/// (N, M) size x seed cell is generated, compiled on the direct path, and
/// reduced + compiled once per strategy.
struct SweepConfig {
  std::vector<std::pair<std::size_t, std::size_t>> sizes;  ///< (N, M) pairs
  std::vector<SelectionStrategy> strategies = {SelectionStrategy::Sparse,
                                               SelectionStrategy::Medium,
                                               SelectionStrategy::Dense};
  std::vector<std::uint64_t> seeds = {0};
  double gamma = 1.0;
  /// Reduction repetitions per cell; reported time is the median.
  std::size_t repeats = 3;
  /// Worker cap; 0 means QUADRA_THREADS from the environment, falling back
  /// to hardware concurrency.
  std::size_t threads = 0;
};

/// One CSV row. Timing is the only non-deterministic field.
struct SweepRow {
  std::size_t n = 0;          ///< variables before reduction (N * M)
  std::size_t num_jobs = 0;   ///< N (sort key; not a CSV column)
  std::size_t num_machines = 0;  ///< M (sort key; not a CSV column)
  std::string path;           ///< "md" or "rmd"
  std::string strategy;       ///< empty on the md path
  std::uint64_t seed = 0;
  std::size_t qubits_after = 0;
  std::size_t introduced_vars = 0;
  double reduce_ms = 0.0;
  double d1 = 0.0;  ///< linear density of the compiled polynomial
  double d2 = 0.0;  ///< quadratic density of the compiled polynomial
  std::uint64_t single_q = 0;
  std::uint64_t two_q = 0;
  std::uint64_t total_gates = 0;
  std::uint64_t depth = 0;
};

namespace detail {

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

inline void density_pair(const Pbf& f, double& d1, double& d2) {
  const DensityProfile profile = f.density_profile();
  d1 = profile.densities.size() > 1 ? profile.densities[1] : 0.0;
  d2 = profile.densities.size() > 2 ? profile.densities[2] : 0.0;
}

inline std::size_t resolve_threads(std::size_t requested, std::size_t cells) {
  std::size_t cap = requested;
  if (cap == 0) {
    if (const char* env = std::getenv("QUADRA_THREADS")) {
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(env, &end, 10);
      if (end != env && parsed > 0) cap = static_cast<std::size_t>(parsed);
    }
  }
  if (cap == 0) cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(cap, std::max<std::size_t>(1, cells)));
}

}  // namespace detail

/// Runs every cell of the grid and returns rows sorted by
/// (n, N, M, path, strategy, seed). Cells run in parallel (capped by
/// config.threads / QUADRA_THREADS); each cell's rows land in a
/// preallocated slot, so the output is identical regardless of scheduling.
inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.sizes.empty()) throw std::invalid_argument("sweep needs sizes");
  if (config.strategies.empty()) throw std::invalid_argument("sweep needs strategies");
  if (config.seeds.empty()) throw std::invalid_argument("sweep needs seeds");
  if (config.repeats == 0) throw std::invalid_argument("repeats must be positive");

  struct Cell {
    std::size_t N, M;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& [N, M] : config.sizes) {
    for (std::uint64_t seed : config.seeds) cells.push_back({N, M, seed});
  }

  std::vector<std::vector<SweepRow>> per_cell(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      const Cell& cell = cells[c];
      const SchedulingInstance inst =
          generate_instance(cell.N, cell.M, cell.seed);
      const Pbf f = build_full_pubo(inst);

      SweepRow base;
      base.n = f.num_vars();
      base.num_jobs = cell.N;
      base.num_machines = cell.M;
      base.seed = cell.seed;

      SweepRow md = base;
      md.path = "md";
      md.qubits_after = f.num_vars();
      detail::density_pair(f, md.d1, md.d2);
      {
        const MdCompilation compiled = compile_md(f, config.gamma);
        md.single_q = compiled.metrics.single_qubit_gates;
        md.two_q = compiled.metrics.two_qubit_gates;
        md.total_gates = compiled.metrics.total_gates;
        md.depth = compiled.metrics.depth;
      }
      per_cell[c].push_back(md);

      for (SelectionStrategy strategy : config.strategies) {
        std::vector<double> times;
        times.reserve(config.repeats);
        ReductionResult reduction;
        for (std::size_t r = 0; r < config.repeats; ++r) {
          ReductionResult run = quadratize(f, strategy);
          times.push_back(run.elapsed_ms);
          if (r == 0) reduction = std::move(run);
        }
        SweepRow row = base;
        row.path = "rmd";
        row.strategy = to_string(strategy);
        row.qubits_after = reduction.reduced.num_vars();
        row.introduced_vars = reduction.introduced_vars();
        row.reduce_ms = detail::median(std::move(times));
        detail::density_pair(reduction.reduced, row.d1, row.d2);
        IsingPoly h = pubo_to_ising(reduction.reduced);
        const CircuitMetrics m = metrics(decompose(map_to_gates(h, config.gamma)));
        row.single_q = m.single_qubit_gates;
        row.two_q = m.two_qubit_gates;
        row.total_gates = m.total_gates;
        row.depth = m.depth;
        per_cell[c].push_back(row);
      }
    }
  };

  const std::size_t workers = detail::resolve_threads(config.threads, cells.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<SweepRow> rows;
  for (auto& cell_rows : per_cell) {
    for (SweepRow& row : cell_rows) rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.n, a.num_jobs, a.num_machines, a.path, a.strategy, a.seed) <
           std::tie(b.n, b.num_jobs, b.num_machines, b.path, b.strategy, b.seed);
  });
  return rows;
}

inline std::string sweep_csv_header() {
  return "n,path,strategy,seed,qubits_after,introduced_vars,reduce_ms,d1,d2,"
         "single_q,two_q,total_gates,depth";
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << sweep_csv_header() << "\n";
  char buf[64];
  for (const SweepRow& row : rows) {
    out << row.n << "," << row.path << "," << row.strategy << "," << row.seed
        << "," << row.qubits_after << "," << row.introduced_vars << ",";
    std::snprintf(buf, sizeof buf, "%.3f", row.reduce_ms);
    out << buf << ",";
    std::snprintf(buf, sizeof buf, "%.12g", row.d1);
    out << buf << ",";
    std::snprintf(buf, sizeof buf, "%.12g", row.d2);
    out << buf << "," << row.single_q << "," << row.two_q << ","
        << row.total_gates << "," << row.depth << "\n";
  }
  return out.str();
}

inline void to_json(nlohmann::json& j, const SweepConfig& config) {
  j = nlohmann::json::object();
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& [N, M] : config.sizes) sizes.push_back({N, M});
  j["sizes"] = std::move(sizes);
  nlohmann::json strategies = nlohmann::json::array();
  for (SelectionStrategy s : config.strategies) strategies.push_back(to_string(s));
  j["strategies"] = std::move(strategies);
  j["seeds"] = config.seeds;
  j["gamma"] = config.gamma;
  j["repeats"] = config.repeats;
  j["threads"] = config.threads;
}

inline void from_json(const nlohmann::json& j, SweepConfig& config) {
  config = SweepConfig{};
  for (const auto& pair : j.at("sizes")) {
    config.sizes.emplace_back(pair.at(0).get<std::size_t>(),
                              pair.at(1).get<std::size_t>());
  }
  if (j.contains("strategies")) {
    config.strategies.clear();
    for (const auto& s : j.at("strategies")) {
      config.strategies.push_back(strategy_from_string(s.get<std::string>()));
    }
  }
  if (j.contains("seeds")) config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("gamma")) config.gamma = j.at("gamma").get<double>();
  if (j.contains("repeats")) config.repeats = j.at("repeats").get<std::size_t>();
  if (j.contains("threads")) config.threads = j.at("threads").get<std::size_t>();
}

}  // namespace quadra

#endif  // QUADRA_SWEEP_HPP_
