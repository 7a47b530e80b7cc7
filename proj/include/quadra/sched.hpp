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

#ifndef QUADRA_SCHED_HPP_
#define QUADRA_SCHED_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadra/pbf.hpp"
#include "quadra/rng.hpp"

namespace quadra {

/// A machine-assignment scheduling problem: N jobs to place on M machines.
/// Binary variable x_ij = 1 means job i runs on machine j; the flat variable
/// id is i*M + j, for n = N*M variables in total. The cost model balances
/// machine loads (A), charges setup changes (B), and enforces that each job
/// is assigned exactly once (C); C must dominate A and B so that minimisers
/// are valid assignments.
struct SchedulingInstance {
  std::size_t num_jobs = 0;      ///< N
  std::size_t num_machines = 0;  ///< M
  /// Job durations, length N, positive.
  std::vector<double> durations;
  /// Setup-change times between job pairs on the same machine: N x N,
  /// non-negative, zero diagonal.
  std::vector<std::vector<double>> setup_between;
  /// Initial setup time of job i on machine j: N x M, non-negative.
  std::vector<std::vector<double>> setup_initial;
  double A = 1.0;  ///< load-balancing objective weight
  double B = 1.0;  ///< setup-cost weight
  double C = 2.0;  ///< assignment-constraint weight; must exceed A and B
  std::uint64_t seed = 0;  ///< seed used when generated (0 if hand-built)

  std::size_t num_vars() const { return num_jobs * num_machines; }

  VarId var(std::size_t job, std::size_t machine) const {
    return static_cast<VarId>(job * num_machines + machine);
  }

  /// Validates dimensions, sign constraints, and the weight dominance
  /// C > A, C > B. Throws std::invalid_argument on violation.
  void validate() const {
    if (num_jobs == 0 || num_machines == 0) {
      throw std::invalid_argument("instance needs at least one job and machine");
    }
    if (durations.size() != num_jobs) {
      throw std::invalid_argument("durations length != num_jobs");
    }
    for (double d : durations) {
      if (!(d > 0.0)) throw std::invalid_argument("durations must be positive");
    }
    if (setup_between.size() != num_jobs) {
      throw std::invalid_argument("setup_between must be N x N");
    }
    for (std::size_t i = 0; i < num_jobs; ++i) {
      if (setup_between[i].size() != num_jobs) {
        throw std::invalid_argument("setup_between must be N x N");
      }
      if (setup_between[i][i] != 0.0) {
        throw std::invalid_argument("setup_between diagonal must be zero");
      }
      for (double v : setup_between[i]) {
        if (v < 0.0) throw std::invalid_argument("setup_between must be non-negative");
      }
    }
    if (setup_initial.size() != num_jobs) {
      throw std::invalid_argument("setup_initial must be N x M");
    }
    for (const auto& row : setup_initial) {
      if (row.size() != num_machines) {
        throw std::invalid_argument("setup_initial must be N x M");
      }
      for (double v : row) {
        if (v < 0.0) throw std::invalid_argument("setup_initial must be non-negative");
      }
    }
    if (!(A > 0.0 && B > 0.0 && C > 0.0)) {
      throw std::invalid_argument("weights must be positive");
    }
    if (!(C > A && C > B)) {
      throw std::invalid_argument("assignment weight C must exceed A and B");
    }
  }
};

namespace detail {

/// Exact rank of an integer matrix via Bareiss fraction-free elimination.
/// Entries stay integral (they are minors' determinants); __int128
/// intermediates are ample for the small matrices generated here.
inline std::size_t integer_rank(std::vector<std::vector<long long>> m) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m[r][c];
  }
  std::size_t rank = 0;
  __int128 prev = 1;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
      }
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Deterministically generates an instance from a seed: integer durations in
/// [5, 20] (jobs are longer than any setup change), symmetric zero-diagonal
/// setup_between with entries in [1, 4], setup_initial entries in [1, 4].
/// Matrices are redrawn (bounded retries) until setup_initial has rank
/// min(N, M) and, for N >= 2, setup_between has rank N; the 1 x 1
/// setup_between is structurally zero, so no rank condition applies at N=1.
/// Weights: A = 1, B = 2 * max duration, C = 4 * (max duration)^2.
/// Throws std::runtime_error if the retry budget is exhausted.
inline SchedulingInstance generate_instance(std::size_t N, std::size_t M,
                                            std::uint64_t seed) {
  if (N == 0 || M == 0) {
    throw std::invalid_argument("need at least one job and one machine");
  }
  std::mt19937_64 rng(seed);

  SchedulingInstance inst;
  inst.num_jobs = N;
  inst.num_machines = M;
  inst.seed = seed;
  inst.durations.resize(N);
  double max_d = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    inst.durations[i] = static_cast<double>(uniform_int(rng, 5, 20));
    max_d = std::max(max_d, inst.durations[i]);
  }

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::vector<long long>> r(N, std::vector<long long>(N, 0));
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = i + 1; k < N; ++k) {
        r[i][k] = uniform_int(rng, 1, 4);
        r[k][i] = r[i][k];
      }
    }
    std::vector<std::vector<long long>> s(N, std::vector<long long>(M, 0));
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < M; ++j) s[i][j] = uniform_int(rng, 1, 4);
    }
    const bool r_ok = N < 2 || detail::integer_rank(r) == N;
    const bool s_ok = detail::integer_rank(s) == std::min(N, M);
    if (!r_ok || !s_ok) continue;

    inst.setup_between.assign(N, std::vector<double>(N, 0.0));
    inst.setup_initial.assign(N, std::vector<double>(M, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = 0; k < N; ++k) {
        inst.setup_between[i][k] = static_cast<double>(r[i][k]);
      }
      for (std::size_t j = 0; j < M; ++j) {
        inst.setup_initial[i][j] = static_cast<double>(s[i][j]);
      }
    }
    inst.A = 1.0;
    inst.B = 2.0 * max_d;
    inst.C = 4.0 * max_d * max_d;
    inst.validate();
    return inst;
  }
  throw std::runtime_error("could not draw full-rank setup matrices after " +
                           std::to_string(kMaxAttempts) + " attempts");
}

/// Load-balancing objective: for every machine pair j < j', the squared
/// difference of the machines' accumulated runtimes, where machine j's
/// runtime is sum_i x_ij (d_i + S_ij) + sum_{i<i'} x_ij x_i'j R_ii'
/// (every co-assigned job pair may force a setup change). Degree <= 4.
inline Pbf build_objective(const SchedulingInstance& inst) {
  const std::size_t n = inst.num_vars();
  auto machine_load = [&inst, n](std::size_t j) {
    Pbf load(n);
    for (std::size_t i = 0; i < inst.num_jobs; ++i) {
      load.add_term({inst.var(i, j)},
                    inst.durations[i] + inst.setup_initial[i][j]);
    }
    for (std::size_t i = 0; i < inst.num_jobs; ++i) {
      for (std::size_t k = i + 1; k < inst.num_jobs; ++k) {
        load.add_term({inst.var(i, j), inst.var(k, j)}, inst.setup_between[i][k]);
      }
    }
    return load;
  };
  Pbf h(n);
  for (std::size_t j = 0; j + 1 < inst.num_machines; ++j) {
    Pbf load_j = machine_load(j);
    for (std::size_t jp = j + 1; jp < inst.num_machines; ++jp) {
      h = add(h, square(load_j - machine_load(jp)));
    }
  }
  return h;
}

/// Total setup cost across machines:
/// sum_j [ sum_{i<i'} x_ij x_i'j R_ii' + sum_i x_ij S_ij ]. Degree <= 2.
inline Pbf build_setup_cost(const SchedulingInstance& inst) {
  Pbf h(inst.num_vars());
  for (std::size_t j = 0; j < inst.num_machines; ++j) {
    for (std::size_t i = 0; i < inst.num_jobs; ++i) {
      for (std::size_t k = i + 1; k < inst.num_jobs; ++k) {
        h.add_term({inst.var(i, j), inst.var(k, j)}, inst.setup_between[i][k]);
      }
      h.add_term({inst.var(i, j)}, inst.setup_initial[i][j]);
    }
  }
  return h;
}

/// One-hot assignment penalty: sum_i (sum_j x_ij - 1)^2. Zero exactly on
/// assignments placing every job on exactly one machine.
inline Pbf build_assignment_constraint(const SchedulingInstance& inst) {
  const std::size_t n = inst.num_vars();
  Pbf h(n);
  for (std::size_t i = 0; i < inst.num_jobs; ++i) {
    Pbf row(n);
    for (std::size_t j = 0; j < inst.num_machines; ++j) {
      row.add_term({inst.var(i, j)}, 1.0);
    }
    row.add_term({}, -1.0);
    h = add(h, square(row));
  }
  return h;
}

/// Full cost function f = A*H_obj + B*H_r + C*H_single. Degree 4 for generic
/// instances with M >= 2 and N >= 3.
inline Pbf build_full_pubo(const SchedulingInstance& inst) {
  inst.validate();
  return add(add(scale(build_objective(inst), inst.A),
                 scale(build_setup_cost(inst), inst.B)),
             scale(build_assignment_constraint(inst), inst.C));
}

inline void to_json(nlohmann::json& j, const SchedulingInstance& inst) {
  j = nlohmann::json::object();
  j["num_jobs"] = inst.num_jobs;
  j["num_machines"] = inst.num_machines;
  j["durations"] = inst.durations;
  j["setup_between"] = inst.setup_between;
  j["setup_initial"] = inst.setup_initial;
  j["A"] = inst.A;
  j["B"] = inst.B;
  j["C"] = inst.C;
  j["seed"] = inst.seed;
}

inline void from_json(const nlohmann::json& j, SchedulingInstance& inst) {
  inst = SchedulingInstance{};
  inst.num_jobs = j.at("num_jobs").get<std::size_t>();
  inst.num_machines = j.at("num_machines").get<std::size_t>();
  inst.durations = j.at("durations").get<std::vector<double>>();
  inst.setup_between = j.at("setup_between").get<std::vector<std::vector<double>>>();
  inst.setup_initial = j.at("setup_initial").get<std::vector<std::vector<double>>>();
  inst.A = j.at("A").get<double>();
  inst.B = j.at("B").get<double>();
  inst.C = j.at("C").get<double>();
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  inst.validate();
}

}  // namespace quadra

#endif  // QUADRA_SCHED_HPP_
