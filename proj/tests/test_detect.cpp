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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sbcd/detect.hpp"
#include "sbcd/error.hpp"
#include "support/criteria.hpp"
#include "support/oracles.hpp"

namespace sbcd {
namespace {

using testing::barbell;
using testing::edge_list_modularity;
using testing::exhaustive_modularity;
using testing::random_connected_graph;
using testing::triangle;

WeightedGraph path2() { return WeightedGraph(2, {{0, 1, 1.0}}); }

std::vector<std::uint8_t> one_hot_state(const IndexMap& index, std::span<const int> labels) {
    std::vector<std::uint8_t> x(index.size(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= 0) x[index.assign(i, static_cast<std::size_t>(labels[i]))] = 1;
    }
    return x;
}

// Penalty residual of a state: alpha sum_i (sum_k x_ik - 1)^2
// + beta sum_k (sum_i x_ik - sum_d 2^(d-1) s_dk - 1)^2.
double penalty_residual(const QuboProblem& q, std::span<const std::uint8_t> x) {
    const auto& index = q.index;
    double total = 0.0;
    for (std::size_t i = 0; i < index.nodes(); ++i) {
        double s = -1.0;
        for (std::size_t k = 0; k < index.communities(); ++k) s += x[index.assign(i, k)];
        total += q.alpha * s * s;
    }
    for (std::size_t k = 0; k < index.communities(); ++k) {
        double s = -1.0;
        for (std::size_t i = 0; i < index.nodes(); ++i) s += x[index.assign(i, k)];
        for (std::size_t d = 1; d <= index.slack_bits(); ++d) s -= std::ldexp(x[index.slack(d, k)], static_cast<int>(d) - 1);
        total += q.beta * s * s;
    }
    return total;
}

DetectOptions quick_options(std::uint64_t seed = 0) {
    DetectOptions options;
    options.solver.seed = seed;
    options.solver.replicas = 16;
    options.solver.steps = 4000;
    return options;
}

TEST(Decode, PerfectOneHot) {
    const IndexMap index(3, 2, 2);
    const std::vector<int> labels = {0, 1, 1};
    auto x = one_hot_state(index, labels);
    x[index.slack(1, 1)] = 1;  // slack bits are ignored
    const auto decoded = decode(x, index);
    EXPECT_TRUE(decoded.feasible());
    EXPECT_EQ(decoded.assignment, labels);
    EXPECT_TRUE(decoded.violated.empty());
}

TEST(Decode, DoubleAndMissingBitsAreFlagged) {
    const IndexMap index(3, 2, 2);
    auto x = one_hot_state(index, std::vector<int>{0, 1, -1});
    x[index.assign(1, 0)] = 1;
    const auto decoded = decode(x, index);
    EXPECT_FALSE(decoded.one_hot);
    EXPECT_FALSE(decoded.feasible());
    EXPECT_EQ(decoded.assignment, (std::vector<int>{0, -1, -1}));
    EXPECT_EQ(decoded.violated, (std::vector<std::size_t>{1, 2}));
}

TEST(Decode, EmptyCommunityIsInfeasible) {
    const IndexMap index(3, 3, 1);
    const auto decoded = decode(one_hot_state(index, std::vector<int>{0, 0, 2}), index);
    EXPECT_TRUE(decoded.one_hot);
    EXPECT_FALSE(decoded.all_nonempty);
    EXPECT_FALSE(decoded.feasible());
}

TEST(Decode, LengthMismatchThrows) {
    const IndexMap index(3, 2, 1);
    const std::vector<std::uint8_t> x(3, 0);
    EXPECT_THROW(decode(x, index), Error);
}

TEST(Repair, FeasibleStateIsUnchanged) {
    const auto g = barbell();
    const IndexMap index(6, 2, 3);
    const std::vector<int> labels = {0, 0, 1, 1, 1, 0};
    const auto decoded = decode(one_hot_state(index, labels), index);
    EXPECT_EQ(repair(decoded, g, 2), labels);
}

// The single unassigned node lands where an exhaustive scan of its options
// finds the highest modularity.
TEST(Repair, SingleNodeMatchesExhaustiveChoice) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_connected_graph(rng, 5 + trial % 4);
        const std::size_t n = g.node_count();
        const std::size_t k = 3;
        std::uniform_int_distribution<int> label(0, 2);
        std::vector<int> labels(n);
        for (auto& l : labels) l = label(rng);
        const std::size_t hole = static_cast<std::size_t>(trial) % n;
        labels[hole] = -1;
        const IndexMap index(n, k, choose_dmax(n, k));
        const auto repaired = repair(decode(one_hot_state(index, labels), index), g, k);

        double best = -1e9;
        int best_label = -1;
        for (int c = 0; c < 3; ++c) {
            labels[hole] = c;
            const double q = edge_list_modularity(g, labels);
            if (q > best + 1e-12) {
                best = q;
                best_label = c;
            }
        }
        labels[hole] = best_label;
        EXPECT_EQ(repaired, labels) << "trial " << trial;
    }
}

TEST(Repair, AllZeroStateBecomesValidPartition) {
    const auto g = barbell();
    const IndexMap index(6, 3, choose_dmax(6, 3));
    const std::vector<std::uint8_t> x(index.size(), 0);
    const auto labels = repair(decode(x, index), g, 3);
    ASSERT_EQ(labels.size(), 6u);
    for (int l : labels) {
        EXPECT_GE(l, 0);
        EXPECT_LT(l, 3);
    }
    EXPECT_GE(make_partition(g, labels).community_count, 1u);
}

// No repaired node can raise modularity by moving alone.
TEST(Repair, RepairedNodesAreLocallyOptimal) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_connected_graph(rng, 8);
        const std::size_t k = 3;
        const IndexMap index(8, k, choose_dmax(8, k));
        std::bernoulli_distribution bit(0.3);
        std::vector<std::uint8_t> x(index.size());
        for (auto& b : x) b = bit(rng);
        const auto decoded = decode(x, index);
        auto labels = repair(decoded, g, k);
        const double q = modularity(g, labels);
        for (std::size_t node : decoded.violated) {
            const int original = labels[node];
            for (int c = 0; c < static_cast<int>(k); ++c) {
                labels[node] = c;
                EXPECT_LE(modularity(g, labels), q + 1e-12);
            }
            labels[node] = original;
        }
    }
}

// The split is the ground state only when emptying a community costs more
// than the modularity it gains, which the sound multiplier guarantees.
TEST(DetectK, PathOfTwoSplitsWithSoundMultiplier) {
    auto options = quick_options();
    options.qubo.alpha = options.qubo.beta = sound_penalty(build_modularity_block(path2(), 2), 2);
    const auto result = detect_k(path2(), 2, options);
    EXPECT_EQ(result.k_requested, 2u);
    EXPECT_EQ(result.effective_k, 2u);
    EXPECT_NE(result.partition.assignment[0], result.partition.assignment[1]);
    EXPECT_NEAR(result.modularity, -0.5, 1e-12);
    EXPECT_TRUE(result.feasible);
    EXPECT_FALSE(result.repaired);
}

TEST(DetectK, PathOfTwoWithDefaultsMayMerge) {
    const auto result = detect_k(path2(), 2, quick_options());
    EXPECT_TRUE(result.effective_k == 1 || result.effective_k == 2);
    EXPECT_NEAR(result.modularity, result.effective_k == 1 ? 0.0 : -0.5, 1e-12);
}

TEST(DetectK, RejectsBadK) {
    EXPECT_THROW(detect_k(triangle(), 1, quick_options()), Error);
    EXPECT_THROW(detect_k(triangle(), 4, quick_options()), Error);
}

TEST(DetectK, ResultInvariantsAndPipelineConsistency) {
    std::mt19937_64 rng(41);
    int feasible = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_connected_graph(rng, 6 + trial % 3);
        const std::size_t k = 2 + trial % 2;
        const auto options = quick_options(static_cast<std::uint64_t>(trial));
        const auto result = detect_k(g, k, options);
        EXPECT_NEAR(modularity(g, result.partition.assignment), result.modularity, 1e-12);
        EXPECT_LE(result.effective_k, k);
        EXPECT_EQ(result.effective_k, result.partition.community_count);

        const auto q = assemble(g, k, options.qubo);
        EXPECT_NEAR(evaluate(q, result.raw_state), result.hamiltonian, 1e-12);
        EXPECT_EQ(result.feasible, decode(result.raw_state, q.index).feasible());
        if (result.feasible) {
            ++feasible;
            EXPECT_FALSE(result.repaired);
            const double residual = penalty_residual(q, result.raw_state);
            EXPECT_NEAR(-(result.hamiltonian - residual), result.modularity, 1e-9);
        }
    }
    EXPECT_GT(feasible, 0);
}

TEST(DetectK, Deterministic) {
    std::mt19937_64 rng(3);
    const auto g = random_connected_graph(rng, 8);
    const auto a = detect_k(g, 3, quick_options(9));
    const auto b = detect_k(g, 3, quick_options(9));
    EXPECT_EQ(a.raw_state, b.raw_state);
    EXPECT_EQ(a.partition.assignment, b.partition.assignment);
    EXPECT_EQ(a.modularity, b.modularity);
}

TEST(DetectK, ReplicaSelection) {
    std::mt19937_64 rng(57);
    for (int trial = 0; trial < 6; ++trial) {
        const auto g = random_connected_graph(rng, 8);
        auto options = quick_options(static_cast<std::uint64_t>(trial));
        const auto by_modularity = detect_k(g, 3, options);
        options.selection = ReplicaSelection::Energy;
        const auto by_energy = detect_k(g, 3, options);
        ASSERT_EQ(by_modularity.effective_k, 3u);
        if (by_energy.effective_k == 3) EXPECT_GE(by_modularity.modularity, by_energy.modularity);

        const auto q = assemble(g, 3, options.qubo);
        const auto summary = sb::run_replicas(qubo_to_ising(q), options.solver);
        EXPECT_EQ(by_energy.replica, summary.best.replica_index);
        for (const auto& replica : summary.replicas) {
            std::vector<std::uint8_t> x(replica.spins.size());
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = replica.spins[i] > 0 ? 1 : 0;
            const auto decoded = decode(x, q.index);
            const auto labels = decoded.one_hot ? decoded.assignment : repair(decoded, g, 3);
            const auto partition = make_partition(g, labels);
            if (partition.community_count == 3) {
                EXPECT_LE(partition.modularity, by_modularity.modularity + 1e-12);
            }
        }
    }
}

TEST(SweepK, SingleEntryRange) {
    const auto sweep = sweep_k(barbell(), 2, 2, quick_options());
    ASSERT_EQ(sweep.per_k.size(), 1u);
    EXPECT_EQ(sweep.k_opt, 2u);
    EXPECT_NEAR(sweep.q_opt, 5.0 / 14.0, 1e-12);
}

TEST(SweepK, SeedsDependOnlyOnK) {
    const auto g = barbell();
    const auto wide = sweep_k(g, 2, 4, quick_options(11));
    const auto narrow = sweep_k(g, 3, 3, quick_options(11));
    EXPECT_EQ(wide.per_k[1].raw_state, narrow.per_k[0].raw_state);
    for (const auto& r : wide.per_k) EXPECT_LE(r.modularity, wide.q_opt);
}

TEST(SweepK, RejectsBadRange) {
    EXPECT_THROW(sweep_k(barbell(), 3, 2, quick_options()), Error);
    EXPECT_THROW(sweep_k(barbell(), 1, 2, quick_options()), Error);
    EXPECT_THROW(sweep_k(barbell(), 2, 7, quick_options()), Error);
}

TEST(BellBound, Values) {
    EXPECT_NEAR(bell_bound(1).value, 0.792 / std::log(2.0), 1e-12);
    EXPECT_NEAR(bell_bound(34).value / 7.89e29, 1.0, 0.01);
    EXPECT_NEAR(bell_bound(33).value / 5.09e28, 1.0, 0.01);
    EXPECT_NEAR(bell_bound(34).log10, std::log10(bell_bound(34).value), 1e-12);
    const auto huge = bell_bound(5000);
    EXPECT_TRUE(std::isinf(huge.value));
    EXPECT_TRUE(std::isfinite(huge.log10));
    EXPECT_THROW(bell_bound(0), Error);
}

TEST(BruteForce, Triangle) {
    const auto result = brute_force(triangle(), 3);
    EXPECT_NEAR(result.best.modularity, 0.0, 1e-12);
    EXPECT_EQ(result.best.community_count, 1u);
    EXPECT_EQ(result.partitions_examined, 5u);  // Bell number B_3
}

TEST(BruteForce, BarbellSplitsIntoTriangles) {
    const auto result = brute_force(barbell(), 2);
    EXPECT_EQ(result.best.assignment, (std::vector<int>{0, 0, 0, 1, 1, 1}));
    EXPECT_NEAR(result.best.modularity, 5.0 / 14.0, 1e-12);
}

TEST(BruteForce, PathOfTwoPrefersOneCommunity) {
    EXPECT_NEAR(brute_force(path2(), 2).best.modularity, 0.0, 1e-12);
    EXPECT_NEAR(brute_force(path2(), 2, 1.0, 2).best.modularity, -0.5, 1e-12);
}

TEST(BruteForce, CountsStirlingNumbers) {
    std::mt19937_64 rng(5);
    const auto g = random_connected_graph(rng, 7);
    EXPECT_EQ(brute_force(g, 7).partitions_examined, 877u);   // B_7
    EXPECT_EQ(brute_force(g, 2, 1.0, 2).partitions_examined, 63u);  // S(7,2)
}

TEST(BruteForce, AgreesWithExhaustiveLabelling) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        const auto g = random_connected_graph(rng, 3 + trial % 5);
        const std::size_t k = 2 + trial % 3;
        EXPECT_NEAR(brute_force(g, k).best.modularity, exhaustive_modularity(g, k), 1e-12);
    }
}

TEST(BruteForce, GuardsLargeGraphs) {
    std::mt19937_64 rng(1);
    const auto g = random_connected_graph(rng, kBruteForceNodeLimit + 1);
    try {
        brute_force(g, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GraphTooLarge);
    }
}

TEST(OracleAgreement, SweepMatchesBruteForce) {
    const auto count = testing::oracle_agreement_trials();
    EXPECT_EQ(count.violations, 0);
    EXPECT_GE(count.hits, testing::kStatisticalRequired);
}

}  // namespace
}  // namespace sbcd
