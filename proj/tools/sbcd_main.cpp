// Copyright 2026 The sbcd Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// sbcd: community detection by simulated bifurcation.
//
//   sbcd solve  --dataset karate --k 4
//   sbcd sweep  --dataset ieee33 --k-range 2:12 --csv curve.csv
//   sbcd bound  --dataset karate
//   sbcd oracle --dataset graph.txt --k-max 3
//
// Exit codes: 0 success, 1 runtime/solver error, 2 usage error.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sbcd/detect.hpp"
#include "sbcd/error.hpp"
#include "sbcd/graph.hpp"
#include "sbcd/qubo.hpp"
#include "sbcd/report.hpp"
#include "sbcd/sb.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string dataset;
    bool unweighted = false;
    bool include_tie_lines = false;
    double gamma = 1.0;

    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::size_t> dmax;

    std::string variant = "discrete";
    std::string select = "modularity";
    double a0 = 1.0;
    std::optional<double> c0;
    double dt = sbcd::sb::SbParams{}.dt;
    int steps = sbcd::sb::SbParams{}.steps;
    int replicas = sbcd::sb::SbParams{}.replicas;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    int k = 0;
    std::string k_range;
    int k_max = 0;

    std::string json_path;
    std::string csv_path;
    std::string trace_path;
    int trace_every = 100;
    std::string qubo_path;
};

sbcd::WeightedGraph load_dataset(const RunConfig& cfg) {
    if (cfg.dataset == "karate") return sbcd::load_karate(cfg.unweighted);
    if (cfg.dataset == "ieee33") return sbcd::load_ieee33(cfg.include_tie_lines);
    return sbcd::load_edge_list_file(cfg.dataset);
}

sbcd::DetectOptions detect_options(const RunConfig& cfg) {
    sbcd::DetectOptions o;
    o.qubo.gamma = cfg.gamma;
    o.qubo.alpha = cfg.alpha;
    o.qubo.beta = cfg.beta;
    o.qubo.slack_bits = cfg.dmax;
    o.solver.variant =
        cfg.variant == "ballistic" ? sbcd::sb::Variant::Ballistic : sbcd::sb::Variant::Discrete;
    o.solver.a0 = cfg.a0;
    o.solver.c0 = cfg.c0;
    o.solver.dt = cfg.dt;
    o.solver.steps = cfg.steps;
    o.solver.replicas = cfg.replicas;
    o.solver.seed = cfg.seed;
    o.solver.threads = cfg.threads;
    o.selection = cfg.select == "energy" ? sbcd::ReplicaSelection::Energy
                                         : sbcd::ReplicaSelection::Modularity;
    try {
        o.solver.validate();
    } catch (const sbcd::Error& e) {
        throw UsageError(e.what());
    }
    if (!(cfg.gamma > 0.0)) throw UsageError("--gamma must be positive");
    if (cfg.alpha && !(*cfg.alpha > 0.0)) throw UsageError("--alpha must be positive");
    if (cfg.beta && !(*cfg.beta > 0.0)) throw UsageError("--beta must be positive");
    if (cfg.dmax && *cfg.dmax < 1) throw UsageError("--dmax must be at least 1");
    return o;
}

void check_k(std::size_t k, std::size_t n) {
    if (k < 2 || k > n) {
        throw UsageError("K must satisfy 2 <= K <= n (n = " + std::to_string(n) + "), got " +
                         std::to_string(k));
    }
}

std::pair<std::size_t, std::size_t> parse_k_range(const std::string& text, const RunConfig& cfg,
                                                  std::size_t n) {
    if (text.empty()) {
        if (cfg.dataset == "karate") return {2, 10};
        if (cfg.dataset == "ieee33") return {2, 12};
        return {2, std::min<std::size_t>(n, 10)};
    }
    const auto colon = text.find(':');
    auto parse = [&](std::string_view s) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
            throw UsageError("--k-range expects MIN:MAX, got '" + text + "'");
        }
        return v;
    };
    if (colon == std::string::npos) throw UsageError("--k-range expects MIN:MAX");
    const std::string_view view(text);
    const std::size_t lo = parse(view.substr(0, colon));
    const std::size_t hi = parse(view.substr(colon + 1));
    if (lo > hi) throw UsageError("--k-range minimum exceeds maximum");
    check_k(lo, n);
    check_k(hi, n);
    return {lo, hi};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sbcd::Error(sbcd::ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << content;
}

void print_summary(const RunConfig& cfg, const sbcd::WeightedGraph& g) {
    std::cout << "dataset: " << cfg.dataset << '\n'
              << "nodes: " << g.node_count() << "  edges: " << g.edge_count()
              << "  total_weight: " << sbcd::format_fixed(g.total_weight()) << '\n'
              << "bell_bound: " << sbcd::format_bound(sbcd::bell_bound(g.node_count())) << '\n';
}

void print_solver(const sbcd::DetectOptions& o) {
    const auto& s = o.solver;
    std::cout << "solver: variant="
              << (s.variant == sbcd::sb::Variant::Discrete ? "discrete" : "ballistic")
              << " a0=" << s.a0 << " c0=" << (s.c0 ? std::to_string(*s.c0) : std::string("auto"))
              << " dt=" << s.dt << " steps=" << s.steps << " replicas=" << s.replicas
              << " seed=" << s.seed << '\n';
}

void print_communities(const sbcd::WeightedGraph& g, const sbcd::Partition& p) {
    for (int c = 0; c < p.community_count; ++c) {
        std::cout << "community " << c << ':';
        for (std::size_t i = 0; i < p.assignment.size(); ++i) {
            if (p.assignment[i] == c) std::cout << ' ' << g.label(i);
        }
        std::cout << '\n';
    }
}

int cmd_solve(const RunConfig& cfg) {
    const auto g = load_dataset(cfg);
    const auto k = static_cast<std::size_t>(std::max(cfg.k, 0));
    check_k(k, g.node_count());
    const auto options = detect_options(cfg);

    print_summary(cfg, g);
    print_solver(options);
    const sbcd::QuboProblem qubo = sbcd::assemble(g, k, options.qubo);
    std::cout << "qubo: K=" << k << " variables=" << qubo.size()
              << " alpha=" << sbcd::format_fixed(qubo.alpha)
              << " beta=" << sbcd::format_fixed(qubo.beta)
              << " d_max=" << qubo.index.slack_bits() << '\n';
    if (!cfg.qubo_path.empty()) {
        std::ostringstream text;
        sbcd::write_qubo(qubo, text);
        write_file(cfg.qubo_path, text.str());
    }
    if (!cfg.trace_path.empty()) {
        std::ostringstream trace;
        trace << "step,a,energy\n";
        const auto ising = sbcd::qubo_to_ising(qubo);
        sbcd::sb::run(
            ising, options.solver, 0,
            [&trace](int step, double a, double energy) {
                trace << step << ',' << sbcd::format_fixed(a) << ',' << sbcd::format_fixed(energy)
                      << '\n';
            },
            cfg.trace_every);
        write_file(cfg.trace_path, trace.str());
    }

    const auto result = sbcd::detect_k(g, k, options);
    std::cout << "modularity: " << sbcd::format_fixed(result.modularity) << '\n'
              << "hamiltonian: " << sbcd::format_fixed(result.hamiltonian) << '\n'
              << "feasible: " << (result.feasible ? "true" : "false")
              << "  repaired: " << (result.repaired ? "true" : "false")
              << "  effective_K: " << result.effective_k << '\n';
    print_communities(g, result.partition);
    if (!cfg.json_path.empty()) write_file(cfg.json_path, sbcd::partition_json(cfg.dataset, g, result));
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const auto g = load_dataset(cfg);
    const auto [lo, hi] = parse_k_range(cfg.k_range, cfg, g.node_count());
    const auto options = detect_options(cfg);

    const auto sweep = sbcd::sweep_k(g, lo, hi, options);
    std::ostringstream csv;
    sbcd::write_sweep_csv(sweep, csv);
    if (cfg.csv_path.empty()) {
        std::cout << csv.str();
    } else {
        write_file(cfg.csv_path, csv.str());
    }
    std::cout << "K_opt=" << sweep.k_opt << ", Q_e=" << sbcd::format_fixed(sweep.q_opt) << '\n';
    if (!cfg.json_path.empty()) {
        const auto& best = sweep.per_k[sweep.k_opt - lo];
        write_file(cfg.json_path, sbcd::partition_json(cfg.dataset, g, best));
    }
    return 0;
}

int cmd_bound(const RunConfig& cfg) {
    const auto g = load_dataset(cfg);
    std::cout << "n: " << g.node_count() << '\n'
              << "bell_bound: " << sbcd::format_bound(sbcd::bell_bound(g.node_count())) << '\n';
    return 0;
}

int cmd_oracle(const RunConfig& cfg) {
    const auto g = load_dataset(cfg);
    const std::size_t n = g.node_count();
    if (n > sbcd::kBruteForceNodeLimit) {
        std::cerr << "error: exhaustive search is limited to " << sbcd::kBruteForceNodeLimit
                  << " nodes; " << cfg.dataset << " has " << n << '\n';
        return kExitRuntime;
    }
    if (cfg.k_max < 0) throw UsageError("--k-max must be positive");
    const std::size_t k_max = cfg.k_max == 0 ? n : static_cast<std::size_t>(cfg.k_max);
    const auto result = sbcd::brute_force(g, k_max, cfg.gamma);
    std::cout << "n: " << n << "  partitions: " << result.partitions_examined << '\n'
              << "modularity: " << sbcd::format_fixed(result.best.modularity) << '\n'
              << "K: " << result.best.community_count << '\n';
    print_communities(g, result.best);
    return 0;
}

void add_dataset_options(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_option("--dataset", cfg.dataset, "karate, ieee33, or a path to an edge list")
        ->required();
    cmd.add_flag("--unweighted", cfg.unweighted, "Karate Club with unit weights");
    cmd.add_flag("--include-tie-lines", cfg.include_tie_lines,
                 "IEEE 33-bus with the five normally open tie lines");
    cmd.add_option("--gamma", cfg.gamma, "Modularity resolution parameter")->capture_default_str();
}

void add_solver_options(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_option("--alpha", cfg.alpha, "One-hot penalty multiplier (default: 1.5 / n)");
    cmd.add_option("--beta", cfg.beta, "Non-empty penalty multiplier (default: alpha / 50)");
    cmd.add_option("--dmax", cfg.dmax, "Slack bits per community (default: smallest sufficient)");
    cmd.add_option("--variant", cfg.variant, "SB variant")
        ->check(CLI::IsMember({"discrete", "ballistic"}))
        ->capture_default_str();
    cmd.add_option("--select", cfg.select,
                   "Replica kept per K: best decoded modularity or lowest energy")
        ->check(CLI::IsMember({"modularity", "energy"}))
        ->capture_default_str();
    cmd.add_option("--a0", cfg.a0, "Final value of the control ramp a(t)")->capture_default_str();
    cmd.add_option("--c0", cfg.c0, "Coupling strength (default: 0.5 / (sigma_J sqrt(N)))");
    cmd.add_option("--dt", cfg.dt, "Integration time step")->capture_default_str();
    cmd.add_option("--steps", cfg.steps, "Integration steps per replica")->capture_default_str();
    cmd.add_option("--replicas", cfg.replicas, "Independent trajectories per K")
        ->capture_default_str();
    cmd.add_option("--seed", cfg.seed, "Master random seed")->capture_default_str();
    cmd.add_option("--threads", cfg.threads, "Worker threads (0: all cores)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Community detection by simulated bifurcation"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* solve = app.add_subcommand("solve", "Detect communities for a fixed K");
    add_dataset_options(*solve, cfg);
    add_solver_options(*solve, cfg);
    solve->add_option("--k", cfg.k, "Number of communities")->required();
    solve->add_option("--json", cfg.json_path, "Write the partition as JSON");
    solve->add_option("--trace", cfg.trace_path, "Write a CSV trace (step,a,energy) of replica 0");
    solve->add_option("--trace-every", cfg.trace_every, "Trace sampling interval in steps")
        ->capture_default_str();
    solve->add_option("--export-qubo", cfg.qubo_path, "Write the QUBO as 'i j value' text");

    auto* sweep = app.add_subcommand("sweep", "Detect communities for a range of K");
    add_dataset_options(*sweep, cfg);
    add_solver_options(*sweep, cfg);
    sweep->add_option("--k-range", cfg.k_range,
                      "MIN:MAX (default 2:10 karate, 2:12 ieee33, 2:min(n,10) otherwise)");
    sweep->add_option("--csv", cfg.csv_path, "Write the K,modularity curve to a file");
    sweep->add_option("--json", cfg.json_path, "Write the best partition as JSON");

    auto* bound = app.add_subcommand("bound", "Print the Bell-number upper bound for the dataset");
    add_dataset_options(*bound, cfg);

    auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for graphs up to 12 nodes");
    add_dataset_options(*oracle, cfg);
    oracle->add_option("--k-max", cfg.k_max, "Maximum number of communities (default: n)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve) return cmd_solve(cfg);
        if (*sweep) return cmd_sweep(cfg);
        if (*bound) return cmd_bound(cfg);
        if (*oracle) return cmd_oracle(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
