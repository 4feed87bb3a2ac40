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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sbcd/graph.hpp"
#include "sbcd/qubo.hpp"
#include "sbcd/sb.hpp"

namespace sbcd {

/// Result of reading community labels off a binary QUBO state.
struct DecodedState {
    std::vector<int> assignment;         // -1 where the node's one-hot group is violated
    std::vector<std::size_t> violated;   // ascending node indices
    bool one_hot = true;                 // every node has exactly one bit set
    bool all_nonempty = true;            // every community 0..K-1 has a member
    bool feasible() const noexcept { return one_hot && all_nonempty; }
};

DecodedState decode(std::span<const std::uint8_t> x, const IndexMap& index);

/// Assigns every violated node of `decoded`, returning a total labelling.
///
/// Violated nodes are placed in ascending order into the community with the
/// largest modularity gain given the nodes already placed (ties to the lower
/// label). The placed nodes are then revisited until none of them can raise
/// modularity by moving alone.
std::vector<int> repair(const DecodedState& decoded, const WeightedGraph& g,
                        std::size_t communities, double gamma = 1.0);

/// How detect_k picks one replica's final state.
enum class ReplicaSelection {
    Modularity,  // K non-empty communities first, then highest modularity after
                 // decode and repair, then lowest H
    Energy,      // lowest Ising energy
};

struct DetectOptions {
    QuboOptions qubo;
    sb::SbParams solver;
    ReplicaSelection selection = ReplicaSelection::Modularity;
};

struct DetectionResult {
    std::size_t k_requested = 0;
    Partition partition;
    double modularity = 0.0;
    double hamiltonian = 0.0;  // H of the raw binary state
    bool feasible = false;     // raw state met the one-hot and non-empty constraints
    bool repaired = false;
    std::size_t effective_k = 0;
    std::size_t replica = 0;  // replica whose final state was kept
    std::vector<std::uint8_t> raw_state;
};

/// assemble -> qubo_to_ising -> run_replicas -> decode -> repair -> score,
/// with one replica kept according to options.selection.
DetectionResult detect_k(const WeightedGraph& g, std::size_t communities,
                         const DetectOptions& options = {});

struct SweepResult {
    std::vector<DetectionResult> per_k;
    std::size_t k_opt = 0;
    double q_opt = 0.0;
};

/// detect_k for every K in [k_min, k_max]; each K runs with seed
/// (master seed + K). Ties in modularity go to the smaller K.
SweepResult sweep_k(const WeightedGraph& g, std::size_t k_min, std::size_t k_max,
                    const DetectOptions& options = {});

/// Upper bound (0.792 n / ln(n+1))^n on the Bell number B_n. `value`
/// overflows to infinity for large n; `log10` stays finite.
struct BellBound {
    double value = 0.0;
    double log10 = 0.0;
};
BellBound bell_bound(std::size_t n);

inline constexpr std::size_t kBruteForceNodeLimit = 12;

struct BruteForceResult {
    Partition best;
    std::uint64_t partitions_examined = 0;
};

/// Exact modularity optimum over every set partition with between
/// `min_blocks` and `max_blocks` blocks, enumerated as restricted growth
/// strings. Throws GraphTooLarge beyond kBruteForceNodeLimit nodes.
BruteForceResult brute_force(const WeightedGraph& g, std::size_t max_blocks, double gamma = 1.0,
                             std::size_t min_blocks = 1);

}  // namespace sbcd
