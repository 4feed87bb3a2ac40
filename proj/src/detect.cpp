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

#include "sbcd/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "sbcd/error.hpp"

namespace sbcd {

DecodedState decode(std::span<const std::uint8_t> x, const IndexMap& index) {
    if (x.size() != index.size()) throw Error(ErrorCode::LengthMismatch, "state length mismatch");
    DecodedState out;
    out.assignment.assign(index.nodes(), -1);
    std::vector<bool> used(index.communities(), false);
    for (std::size_t i = 0; i < index.nodes(); ++i) {
        int label = -1;
        std::size_t set_bits = 0;
        for (std::size_t k = 0; k < index.communities(); ++k) {
            if (x[index.assign(i, k)]) {
                ++set_bits;
                label = static_cast<int>(k);
            }
        }
        if (set_bits == 1) {
            out.assignment[i] = label;
            used[static_cast<std::size_t>(label)] = true;
        } else {
            out.violated.push_back(i);
        }
    }
    out.one_hot = out.violated.empty();
    out.all_nonempty = std::all_of(used.begin(), used.end(), [](bool u) { return u; });
    return out;
}

namespace {

// Modularity change (times m) of putting `node` into `community`, counting
// only placed nodes other than `node` itself.
double placement_gain(const WeightedGraph& g, std::span<const int> labels, std::size_t node,
                      int community, double gamma) {
    const double two_m = 2.0 * g.total_weight();
    const auto row = g.adjacency().row(node);
    double links = 0.0;
    double degree_sum = 0.0;
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (j == node || labels[j] != community) continue;
        links += row[j];
        degree_sum += g.degree(j);
    }
    return links - gamma * g.degree(node) * degree_sum / two_m;
}

int best_community(const WeightedGraph& g, std::span<const int> labels, std::size_t node,
                   std::size_t communities, double gamma, double* best_gain) {
    int best = 0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < communities; ++c) {
        const double gain = placement_gain(g, labels, node, static_cast<int>(c), gamma);
        if (gain > top) {
            top = gain;
            best = static_cast<int>(c);
        }
    }
    if (best_gain) *best_gain = top;
    return best;
}

}  // namespace

std::vector<int> repair(const DecodedState& decoded, const WeightedGraph& g,
                        std::size_t communities, double gamma) {
    std::vector<int> labels = decoded.assignment;
    if (labels.size() != g.node_count()) {
        throw Error(ErrorCode::LengthMismatch, "decoded state does not match graph");
    }
    if (decoded.violated.empty()) return labels;
    if (!(g.total_weight() > 0.0)) throw Error(ErrorCode::EmptyGraph, "graph has no edges");

    for (std::size_t node : decoded.violated) {
        labels[node] = best_community(g, labels, node, communities, gamma, nullptr);
    }

    // Local moves restricted to the repaired nodes; modularity strictly
    // increases with every move, so this terminates.
    const double tolerance = 1e-12 * g.total_weight();
    for (bool moved = true; moved;) {
        moved = false;
        for (std::size_t node : decoded.violated) {
            double gain = 0.0;
            const int target = best_community(g, labels, node, communities, gamma, &gain);
            if (target == labels[node]) continue;
            if (gain > placement_gain(g, labels, node, labels[node], gamma) + tolerance) {
                labels[node] = target;
                moved = true;
            }
        }
    }
    return labels;
}

namespace {

DetectionResult score_state(const WeightedGraph& g, const QuboProblem& qubo,
                            const sb::SbSolution& solution, double gamma) {
    const std::size_t communities = qubo.index.communities();
    DetectionResult result;
    result.k_requested = communities;
    result.replica = solution.replica_index;
    result.raw_state.resize(solution.spins.size());
    for (std::size_t i = 0; i < result.raw_state.size(); ++i) {
        result.raw_state[i] = solution.spins[i] > 0 ? 1 : 0;
    }
    result.hamiltonian = evaluate(qubo, result.raw_state);

    const DecodedState decoded = decode(result.raw_state, qubo.index);
    result.feasible = decoded.feasible();
    result.repaired = !decoded.one_hot;
    const std::vector<int> labels =
        result.repaired ? repair(decoded, g, communities, gamma) : decoded.assignment;
    result.partition = make_partition(g, labels, gamma);
    result.modularity = result.partition.modularity;
    result.effective_k = static_cast<std::size_t>(result.partition.community_count);
    return result;
}

}  // namespace

DetectionResult detect_k(const WeightedGraph& g, std::size_t communities,
                         const DetectOptions& options) {
    const QuboProblem qubo = assemble(g, communities, options.qubo);
    const IsingProblem ising = qubo_to_ising(qubo);
    const sb::ReplicaSummary summary = sb::run_replicas(ising, options.solver);
    const double gamma = options.qubo.gamma;

    if (options.selection == ReplicaSelection::Energy) {
        return score_state(g, qubo, summary.best, gamma);
    }
    auto rank = [communities](const DetectionResult& r) {
        return std::tuple(r.effective_k == communities, r.modularity, -r.hamiltonian);
    };
    DetectionResult best = score_state(g, qubo, summary.replicas.front(), gamma);
    for (std::size_t r = 1; r < summary.replicas.size(); ++r) {
        DetectionResult candidate = score_state(g, qubo, summary.replicas[r], gamma);
        if (rank(candidate) > rank(best)) best = std::move(candidate);
    }
    return best;
}

SweepResult sweep_k(const WeightedGraph& g, std::size_t k_min, std::size_t k_max,
                    const DetectOptions& options) {
    if (k_min < 2 || k_min > k_max || k_max > g.node_count()) {
        throw Error(ErrorCode::InvalidArgument,
                    "K range must satisfy 2 <= k_min <= k_max <= n (n = " +
                        std::to_string(g.node_count()) + ")");
    }
    SweepResult sweep;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        DetectOptions per_k = options;
        per_k.solver.seed = options.solver.seed + k;
        sweep.per_k.push_back(detect_k(g, k, per_k));
        const DetectionResult& r = sweep.per_k.back();
        if (sweep.per_k.size() == 1 || r.modularity > sweep.q_opt) {
            sweep.k_opt = k;
            sweep.q_opt = r.modularity;
        }
    }
    return sweep;
}

BellBound bell_bound(std::size_t n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "Bell bound needs n >= 1");
    const double nd = static_cast<double>(n);
    const double base = 0.792 * nd / std::log(nd + 1.0);
    BellBound bound;
    bound.log10 = nd * std::log10(base);
    bound.value = std::pow(base, nd);
    return bound;
}

namespace {

class PartitionSearch {
public:
    PartitionSearch(const WeightedGraph& g, std::size_t min_blocks, std::size_t max_blocks,
                    double gamma)
        : g_(g),
          min_blocks_(min_blocks),
          max_blocks_(max_blocks),
          gamma_(gamma),
          two_m_(2.0 * g.total_weight()),
          labels_(g.node_count(), 0),
          block_degree_(max_blocks, 0.0) {}

    void run() { place(0, 0, 0.0); }

    std::vector<int> best_labels;
    double best_score = -std::numeric_limits<double>::infinity();
    std::uint64_t examined = 0;

private:
    // Restricted growth string: node i takes a label in [0, used] where
    // `used` counts the blocks opened so far.
    void place(std::size_t node, std::size_t used, double internal) {
        const std::size_t n = labels_.size();
        if (node == n) {
            if (used < min_blocks_) return;
            ++examined;
            double null_model = 0.0;
            for (std::size_t b = 0; b < used; ++b) null_model += block_degree_[b] * block_degree_[b];
            const double q = (internal - gamma_ * null_model / two_m_) / two_m_;
            if (q > best_score) {
                best_score = q;
                best_labels = labels_;
            }
            return;
        }
        if (used + (n - node) < min_blocks_) return;
        const std::size_t limit = std::min(used + 1, max_blocks_);
        const auto row = g_.adjacency().row(node);
        for (std::size_t b = 0; b < limit; ++b) {
            double links = 0.0;
            for (std::size_t j = 0; j < node; ++j) {
                if (labels_[j] == static_cast<int>(b)) links += row[j];
            }
            labels_[node] = static_cast<int>(b);
            block_degree_[b] += g_.degree(node);
            place(node + 1, std::max(used, b + 1), internal + 2.0 * links);
            block_degree_[b] -= g_.degree(node);
        }
    }

    const WeightedGraph& g_;
    std::size_t min_blocks_;
    std::size_t max_blocks_;
    double gamma_;
    double two_m_;
    std::vector<int> labels_;
    std::vector<double> block_degree_;
};

}  // namespace

BruteForceResult brute_force(const WeightedGraph& g, std::size_t max_blocks, double gamma,
                             std::size_t min_blocks) {
    const std::size_t n = g.node_count();
    if (n > kBruteForceNodeLimit) {
        throw Error(ErrorCode::GraphTooLarge,
                    "exhaustive search is limited to " + std::to_string(kBruteForceNodeLimit) +
                        " nodes, graph has " + std::to_string(n));
    }
    if (!(g.total_weight() > 0.0)) throw Error(ErrorCode::EmptyGraph, "graph has no edges");
    max_blocks = std::min(max_blocks, n);
    if (min_blocks < 1 || min_blocks > max_blocks) {
        throw Error(ErrorCode::InvalidArgument, "block range must satisfy 1 <= min <= max");
    }
    PartitionSearch search(g, min_blocks, max_blocks, gamma);
    search.run();
    BruteForceResult result;
    result.best = make_partition(g, search.best_labels, gamma);
    result.partitions_examined = search.examined;
    return result;
}

}  // namespace sbcd
