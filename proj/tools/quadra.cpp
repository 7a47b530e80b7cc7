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

// Command-line frontend: instance generation, degree reduction, polynomial
// analysis, circuit compilation, verification, and metric sweeps.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadra/quadra.hpp"

namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Loads either a polynomial JSON ("terms") or a scheduling-instance JSON
/// ("durations", converted to its full cost polynomial).
quadra::Pbf load_polynomial(const std::string& path) {
  const json j = json::parse(read_text(path));
  if (j.is_object() && j.contains("terms")) return j.get<quadra::Pbf>();
  if (j.is_object() && j.contains("durations")) {
    return quadra::build_full_pubo(j.get<quadra::SchedulingInstance>());
  }
  throw std::runtime_error(path +
                           ": expected polynomial JSON (with \"terms\") or "
                           "instance JSON (with \"durations\")");
}

/// Parses "NxM" (e.g. "4x3"); a bare integer n is shorthand for nx1.
std::pair<std::size_t, std::size_t> parse_size(const std::string& token) {
  const auto x = token.find('x');
  try {
    if (x == std::string::npos) return {std::stoull(token), 1};
    return {std::stoull(token.substr(0, x)), std::stoull(token.substr(x + 1))};
  } catch (const std::exception&) {
    throw std::runtime_error("bad size '" + token + "' (expected NxM, e.g. 4x3)");
  }
}

std::vector<quadra::SelectionStrategy> parse_strategies(
    const std::vector<std::string>& names) {
  std::vector<quadra::SelectionStrategy> out;
  for (const std::string& name : names) {
    out.push_back(quadra::strategy_from_string(name));
  }
  return out;
}

/// Reduction with the trace's elapsed time replaced by the median over
/// `repeats` identical runs (the result itself is deterministic).
quadra::ReductionResult timed_reduce(const quadra::Pbf& f,
                                     quadra::SelectionStrategy strategy,
                                     std::optional<double> weight,
                                     std::size_t repeats) {
  if (repeats == 0) throw std::runtime_error("--repeats must be positive");
  quadra::ReductionResult result;
  std::vector<double> times;
  times.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    quadra::ReductionResult run = quadra::quadratize(f, strategy, weight);
    times.push_back(run.elapsed_ms);
    if (r == 0) result = std::move(run);
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  result.elapsed_ms = times.size() % 2 == 1
                          ? times[mid]
                          : (times[mid - 1] + times[mid]) / 2.0;
  return result;
}

json metrics_json(std::size_t n, const std::string& path_name,
                  const std::string& strategy, std::size_t qubits,
                  const quadra::CircuitMetrics& m, double ising_constant,
                  std::size_t introduced_vars, double reduce_ms) {
  json j;
  j["n"] = n;
  j["path"] = path_name;
  j["strategy"] = strategy;
  j["qubits"] = qubits;
  j["metrics"] = m;
  j["ising_constant"] = ising_constant;
  j["introduced_vars"] = introduced_vars;
  j["reduce_ms"] = reduce_ms;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"pseudo-Boolean quadratisation and QAOA circuit metrics"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* gen = app.add_subcommand(
      "generate", "Generate a random machine-assignment scheduling instance");
  std::size_t gen_jobs = 0, gen_machines = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "-";
  gen->add_option("-N,--jobs", gen_jobs, "Number of jobs")->required();
  gen->add_option("-M,--machines", gen_machines, "Number of machines")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "Output path (- for stdout)")
      ->capture_default_str();
  gen->callback([&] {
    const quadra::SchedulingInstance inst =
        quadra::generate_instance(gen_jobs, gen_machines, gen_seed);
    write_text(gen_out, dump(json(inst)));
  });

  // ---- reduce ----
  auto* red = app.add_subcommand(
      "reduce", "Reduce a polynomial (or instance cost) to degree <= 2");
  std::string red_in, red_strategy = "sparse", red_out = "-";
  std::optional<double> red_weight;
  std::size_t red_repeats = 3;
  red->add_option("-i,--in", red_in, "Polynomial or instance JSON (- for stdin)")
      ->required();
  red->add_option("--strategy", red_strategy, "sparse|medium|dense")
      ->capture_default_str();
  red->add_option("--weight", red_weight,
                  "Penalty weight override (default: 1 + sum of |coeff|)");
  red->add_option("--repeats", red_repeats,
                  "Timing repetitions; the trace reports the median")
      ->capture_default_str();
  red->add_option("-o,--out", red_out, "Trace output path")->capture_default_str();
  red->callback([&] {
    const quadra::Pbf f = load_polynomial(red_in);
    const quadra::ReductionResult result = timed_reduce(
        f, quadra::strategy_from_string(red_strategy), red_weight, red_repeats);
    if (result.reduced.degree() > 2) {
      throw std::runtime_error("internal error: residual degree > 2 after reduction");
    }
    if (result.steps.empty()) {
      std::cerr << "note: input is already quadratic; trace has zero steps\n";
    }
    write_text(red_out, dump(json(result)));
  });

  // ---- analyze ----
  auto* ana = app.add_subcommand(
      "analyze", "Report degree densities and interaction-graph statistics");
  std::string ana_in, ana_format = "json", ana_out = "-";
  ana->add_option("-i,--in", ana_in, "Polynomial or instance JSON")->required();
  ana->add_option("--format", ana_format, "json|csv|dot")->capture_default_str();
  ana->add_option("-o,--out", ana_out, "Output path")->capture_default_str();
  ana->callback([&] {
    const quadra::Pbf f = load_polynomial(ana_in);
    const quadra::DensityProfile profile = f.density_profile();
    const quadra::MultiGraph graph = quadra::build_graph(f);
    if (ana_format == "json") {
      json j;
      j["num_vars"] = f.num_vars();
      j["degree"] = f.degree();
      j["term_count"] = f.term_count();
      j["density"] = {{"term_counts", profile.term_counts},
                      {"densities", profile.densities}};
      j["graph"] = graph;
      j["graph_stats"] = quadra::graph_stats(graph);
      write_text(ana_out, dump(j));
    } else if (ana_format == "csv") {
      std::ostringstream out;
      out << "k,t_k,d_k\n";
      char buf[64];
      for (std::size_t k = 0; k < profile.term_counts.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.12g", profile.densities[k]);
        out << k << "," << profile.term_counts[k] << "," << buf << "\n";
      }
      write_text(ana_out, out.str());
    } else if (ana_format == "dot") {
      std::vector<std::string> labels;
      labels.reserve(f.num_vars());
      for (std::size_t v = 0; v < f.num_vars(); ++v) {
        labels.push_back("x" + std::to_string(v));
      }
      write_text(ana_out, quadra::export_dot(graph, labels));
    } else {
      throw std::runtime_error("analyze --format must be json, csv, or dot");
    }
  });

  // ---- circuit ----
  auto* cir = app.add_subcommand(
      "circuit", "Compile a polynomial into a single problem-layer circuit");
  std::string cir_in, cir_path = "md", cir_strategy = "sparse", cir_out = "-";
  std::string cir_metrics_path, cir_format = "qasm";
  double cir_gamma = 1.0;
  std::optional<double> cir_weight;
  std::size_t cir_repeats = 3;
  cir->add_option("-i,--in", cir_in, "Polynomial or instance JSON")->required();
  cir->add_option("--path", cir_path, "md (map directly) | rmd (reduce first)")
      ->capture_default_str();
  cir->add_option("--strategy", cir_strategy, "Reduction strategy for rmd")
      ->capture_default_str();
  cir->add_option("--gamma", cir_gamma, "Phase-layer angle multiplier")
      ->capture_default_str();
  cir->add_option("--weight", cir_weight, "Penalty weight override (rmd)");
  cir->add_option("--repeats", cir_repeats, "Reduction timing repetitions (rmd)")
      ->capture_default_str();
  cir->add_option("-o,--out", cir_out, "Output path")->capture_default_str();
  cir->add_option("--format", cir_format,
                  "Main output: qasm (gate listing) | json | csv (metrics)")
      ->capture_default_str();
  cir->add_option("--metrics", cir_metrics_path,
                  "Also write the metrics JSON to this path");
  cir->callback([&] {
    const quadra::Pbf f = load_polynomial(cir_in);
    quadra::Circuit circuit;
    quadra::CircuitMetrics m;
    double constant = 0.0;
    std::string strategy_field;
    std::size_t introduced = 0;
    double reduce_ms = 0.0;
    if (cir_path == "md") {
      quadra::MdCompilation compiled = quadra::compile_md(f, cir_gamma);
      circuit = std::move(compiled.circuit);
      m = compiled.metrics;
      constant = compiled.ising_constant;
    } else if (cir_path == "rmd") {
      const quadra::SelectionStrategy strategy =
          quadra::strategy_from_string(cir_strategy);
      const quadra::ReductionResult reduction =
          timed_reduce(f, strategy, cir_weight, cir_repeats);
      quadra::IsingPoly h = quadra::pubo_to_ising(reduction.reduced);
      constant = h.constant;
      circuit = quadra::decompose(quadra::map_to_gates(h, cir_gamma));
      m = quadra::metrics(circuit);
      strategy_field = cir_strategy;
      introduced = reduction.introduced_vars();
      reduce_ms = reduction.elapsed_ms;
    } else {
      throw std::runtime_error("circuit --path must be md or rmd");
    }
    const json mj = metrics_json(f.num_vars(), cir_path, strategy_field,
                                 circuit.num_qubits, m, constant, introduced,
                                 reduce_ms);
    if (cir_format == "qasm") {
      write_text(cir_out, quadra::to_qasm_text(circuit));
    } else if (cir_format == "json") {
      json j = mj;
      j["qasm"] = quadra::to_qasm_text(circuit);
      write_text(cir_out, dump(j));
    } else if (cir_format == "csv") {
      write_text(cir_out, quadra::metrics_csv_header() + "\n" +
                              quadra::metrics_csv_row(
                                  f.num_vars(), strategy_field,
                                  circuit.num_qubits, m, introduced, reduce_ms) +
                              "\n");
    } else {
      throw std::runtime_error("circuit --format must be qasm, json, or csv");
    }
    if (!cir_metrics_path.empty()) write_text(cir_metrics_path, dump(mj));
  });

  // ---- verify ----
  auto* ver = app.add_subcommand(
      "verify", "Check reductions (and small circuits) against the oracle");
  std::string ver_in, ver_trace, ver_out = "-";
  double ver_gamma = 1.0;
  std::optional<double> ver_weight;
  ver->add_option("-i,--in", ver_in, "Polynomial or instance JSON")->required();
  ver->add_option("--trace", ver_trace, "Reduction trace JSON to validate");
  ver->add_option("--gamma", ver_gamma, "Angle multiplier for phase checks")
      ->capture_default_str();
  ver->add_option("--weight", ver_weight, "Penalty weight override");
  ver->add_option("-o,--out", ver_out, "Report output path")->capture_default_str();
  ver->callback([&] {
    const quadra::Pbf f = load_polynomial(ver_in);
    json checks = json::array();
    bool all_pass = true;

    auto record = [&checks, &all_pass](const std::string& name,
                                       const quadra::QuadratisationCheck& check) {
      json entry;
      entry["name"] = name;
      entry["pass"] = check.pass;
      if (!check.pass) {
        entry["counterexample"] = check.assignment;
        entry["expected"] = check.expected;
        entry["observed"] = check.observed;
        all_pass = false;
      }
      checks.push_back(std::move(entry));
    };

    constexpr std::size_t kPhaseLimit = 12;  // 2^12 basis states is instant
    auto record_phase = [&checks, &all_pass, ver_gamma](
                            const std::string& name, const quadra::Pbf& poly,
                            const quadra::Circuit& circuit, double constant) {
      json entry;
      entry["name"] = name;
      bool pass = true;
      const std::vector<double> table = quadra::evaluate_all(poly);
      for (std::size_t x = 0; x < table.size() && pass; ++x) {
        const auto bits =
            quadra::bits_of(static_cast<std::uint32_t>(x), poly.num_vars());
        const quadra::PhaseTrace trace = quadra::simulate_phase(circuit, bits);
        const double want = -ver_gamma * (table[x] - constant);
        if (trace.output_bits != bits ||
            quadra::phase_distance(trace.phase, want) > 1e-9) {
          pass = false;
          entry["counterexample"] = bits;
          entry["expected"] = quadra::wrap_phase(want);
          entry["observed"] = trace.phase;
        }
      }
      entry["pass"] = pass;
      all_pass &= pass;
      checks.push_back(std::move(entry));
    };

    if (!ver_trace.empty()) {
      const auto trace = json::parse(read_text(ver_trace)).get<quadra::ReductionResult>();
      record("trace", quadra::check_quadratisation_detail(f, trace));
    } else {
      for (quadra::SelectionStrategy strategy :
           {quadra::SelectionStrategy::Sparse, quadra::SelectionStrategy::Medium,
            quadra::SelectionStrategy::Dense}) {
        const quadra::ReductionResult reduction =
            quadra::quadratize(f, strategy, ver_weight);
        record("reduce-" + quadra::to_string(strategy),
               quadra::check_quadratisation_detail(f, reduction));
        if (reduction.reduced.num_vars() <= kPhaseLimit) {
          quadra::IsingPoly h = quadra::pubo_to_ising(reduction.reduced);
          record_phase("phase-rmd-" + quadra::to_string(strategy),
                       reduction.reduced,
                       quadra::decompose(quadra::map_to_gates(h, ver_gamma)),
                       h.constant);
        }
      }
      if (f.num_vars() <= kPhaseLimit) {
        const quadra::MdCompilation compiled = quadra::compile_md(f, ver_gamma);
        record_phase("phase-md", f, compiled.circuit, compiled.ising_constant);
      }
    }

    json report;
    report["pass"] = all_pass;
    report["checks"] = std::move(checks);
    write_text(ver_out, dump(report));
    if (!all_pass) throw std::runtime_error("verification failed");
  });

  // ---- sweep ----
  auto* swp = app.add_subcommand(
      "sweep", "Run the metrics pipeline over a grid of instances");
  std::vector<std::string> swp_sizes, swp_strategies;
  std::vector<std::uint64_t> swp_seeds;
  std::string swp_config, swp_out = "-";
  double swp_gamma = 1.0;
  std::size_t swp_repeats = 3, swp_threads = 0;
  swp->add_option("--config", swp_config, "SweepConfig JSON (overrides grid flags)");
  swp->add_option("--sizes", swp_sizes, "Sizes as NxM tokens (e.g. 3x2 4x3)")
      ->delimiter(',');
  swp->add_option("--seeds", swp_seeds, "Seeds")->delimiter(',');
  swp->add_option("--strategies", swp_strategies,
                  "Subset of sparse,medium,dense (default: all)")
      ->delimiter(',');
  swp->add_option("--gamma", swp_gamma, "Angle multiplier")->capture_default_str();
  swp->add_option("--repeats", swp_repeats, "Timing repetitions per cell")
      ->capture_default_str();
  swp->add_option("--threads", swp_threads,
                  "Worker cap (0: QUADRA_THREADS or hardware)")
      ->capture_default_str();
  swp->add_option("-o,--out", swp_out, "CSV output path")->capture_default_str();
  swp->callback([&] {
    quadra::SweepConfig config;
    if (!swp_config.empty()) {
      if (!swp_sizes.empty() || !swp_seeds.empty() || !swp_strategies.empty()) {
        throw std::runtime_error("use either --config or the grid flags, not both");
      }
      config = json::parse(read_text(swp_config)).get<quadra::SweepConfig>();
    } else {
      if (swp_sizes.empty()) throw std::runtime_error("sweep needs --sizes or --config");
      for (const std::string& token : swp_sizes) {
        config.sizes.push_back(parse_size(token));
      }
      if (!swp_seeds.empty()) config.seeds = swp_seeds;
      if (!swp_strategies.empty()) {
        config.strategies = parse_strategies(swp_strategies);
      }
      config.gamma = swp_gamma;
      config.repeats = swp_repeats;
      config.threads = swp_threads;
    }
    write_text(swp_out, quadra::sweep_csv(quadra::run_sweep(config)));
  });

  // ---- bench ----
  auto* ben = app.add_subcommand(
      "bench", "Time the reduction loop over a grid of instances");
  std::vector<std::string> ben_sizes, ben_strategies;
  std::vector<std::uint64_t> ben_seeds = {0};
  std::string ben_out = "-";
  std::size_t ben_repeats = 5;
  ben->add_option("--sizes", ben_sizes, "Sizes as NxM tokens")
      ->delimiter(',')
      ->required();
  ben->add_option("--seeds", ben_seeds, "Seeds")->delimiter(',');
  ben->add_option("--strategies", ben_strategies,
                  "Subset of sparse,medium,dense (default: all)")
      ->delimiter(',');
  ben->add_option("--repeats", ben_repeats, "Runs per cell (median reported)")
      ->capture_default_str();
  ben->add_option("-o,--out", ben_out, "CSV output path")->capture_default_str();
  ben->callback([&] {
    if (ben_repeats == 0) throw std::runtime_error("--repeats must be positive");
    std::vector<quadra::SelectionStrategy> strategies =
        ben_strategies.empty()
            ? std::vector<quadra::SelectionStrategy>{quadra::SelectionStrategy::Sparse,
                                                     quadra::SelectionStrategy::Medium,
                                                     quadra::SelectionStrategy::Dense}
            : parse_strategies(ben_strategies);
    std::ostringstream out;
    out << "n,strategy,seed,repeats,introduced_vars,reduce_ms_median,reduce_ms_min\n";
    char buf[64];
    for (const std::string& token : ben_sizes) {
      const auto [N, M] = parse_size(token);
      for (std::uint64_t seed : ben_seeds) {
        const quadra::Pbf f =
            quadra::build_full_pubo(quadra::generate_instance(N, M, seed));
        for (quadra::SelectionStrategy strategy : strategies) {
          std::vector<double> times;
          times.reserve(ben_repeats);
          std::size_t introduced = 0;
          for (std::size_t r = 0; r < ben_repeats; ++r) {
            const quadra::ReductionResult run = quadra::quadratize(f, strategy);
            times.push_back(run.elapsed_ms);
            introduced = run.introduced_vars();
          }
          std::sort(times.begin(), times.end());
          const std::size_t mid = times.size() / 2;
          const double median = times.size() % 2 == 1
                                    ? times[mid]
                                    : (times[mid - 1] + times[mid]) / 2.0;
          out << f.num_vars() << "," << quadra::to_string(strategy) << ","
              << seed << "," << ben_repeats << "," << introduced << ",";
          std::snprintf(buf, sizeof buf, "%.3f", median);
          out << buf << ",";
          std::snprintf(buf, sizeof buf, "%.3f", times.front());
          out << buf << "\n";
        }
      }
    }
    write_text(ben_out, out.str());
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
