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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "sbcd/detect.hpp"
#include "sbcd/error.hpp"
#include "sbcd/qubo.hpp"
#include "support/oracles.hpp"

namespace sbcd {
namespace {

using testing::barbell;
using testing::bits_of;
using testing::ising_value;
using testing::qubo_value;
using testing::random_connected_graph;
using testing::spins_of;
using testing::triangle;

double quad(const SquareMatrix& m, std::span<const std::uint8_t> x) {
    return -qubo_value(m, 0.0, x);
}

// One-hot state for `labels`, with slack bits set so that every community
// of size s >= 1 stores s - 1.
std::vector<std::uint8_t> encode(const IndexMap& index, std::span<const int> labels) {
    std::vector<std::uint8_t> x(index.size(), 0);
    std::vector<std::size_t> size(index.communities(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        x[index.assign(i, static_cast<std::size_t>(labels[i]))] = 1;
        ++size[static_cast<std::size_t>(labels[i])];
    }
    for (std::size_t k = 0; k < index.communities(); ++k) {
        if (size[k] == 0) continue;
        const std::size_t stored = size[k] - 1;
        for (std::size_t d = 1; d <= index.slack_bits(); ++d) {
            x[index.slack(d, k)] = (stored >> (d - 1)) & 1u;
        }
    }
    return x;
}

QuboProblem random_qubo(std::mt19937_64& rng, std::size_t size) {
    std::normal_distribution<double> coeff(0.0, 1.0);
    QuboProblem q;
    q.matrix = SquareMatrix(size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = i; j < size; ++j) q.matrix(i, j) = q.matrix(j, i) = coeff(rng);
    }
    q.offset = coeff(rng);
    return q;
}

TEST(IndexMap, LayoutIsBijective) {
    const IndexMap map(5, 3, 2);
    EXPECT_EQ(map.size(), 5u * 3u + 2u * 3u);
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto idx = map.assign(i, k);
            EXPECT_TRUE(seen.insert(idx).second);
            EXPECT_EQ(map.tag(idx), (VariableTag{VariableTag::Kind::Assign, i, k}));
        }
    }
    for (std::size_t d = 1; d <= 2; ++d) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto idx = map.slack(d, k);
            EXPECT_TRUE(seen.insert(idx).second);
            EXPECT_EQ(map.tag(idx), (VariableTag{VariableTag::Kind::Slack, d, k}));
        }
    }
    EXPECT_EQ(seen.size(), map.size());
    EXPECT_EQ(*seen.rbegin(), map.size() - 1);
    EXPECT_THROW(map.tag(map.size()), Error);
}

TEST(ModularityBlock, TriangleExamples) {
    const auto tri = triangle();
    const auto block = build_modularity_block(tri, 2);
    const IndexMap map(3, 2, 0);
    std::vector<std::uint8_t> together(6, 0), split(6, 0);
    for (std::size_t i = 0; i < 3; ++i) together[map.assign(i, 0)] = 1;
    split[map.assign(0, 0)] = split[map.assign(1, 0)] = split[map.assign(2, 1)] = 1;
    EXPECT_NEAR(quad(block, together), 0.0, 1e-15);
    // Same value as modularity() of {0,1}{2}: (2 - 20/6) / 6.
    EXPECT_NEAR(quad(block, split), -2.0 / 9.0, 1e-15);
    EXPECT_NEAR(quad(block, split), modularity(tri, std::vector<int>{0, 0, 1}), 1e-15);
}

TEST(ModularityBlock, MatchesModularityOnEveryOneHotState) {
    std::mt19937_64 rng(5);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto g = random_connected_graph(rng, n);
        for (std::size_t k = 2; k <= std::min<std::size_t>(3, n); ++k) {
            const auto block = build_modularity_block(g, k);
            EXPECT_EQ(block.asymmetry(), 0.0);
            const IndexMap map(n, k, 1);
            std::vector<int> labels(n, 0);
            while (true) {
                const auto x = encode(map, labels);
                const std::vector<std::uint8_t> assign(x.begin(), x.begin() + n * k);
                EXPECT_NEAR(quad(block, assign), modularity(g, labels), 1e-12);
                std::size_t i = 0;
                while (i < n && ++labels[i] == static_cast<int>(k)) labels[i++] = 0;
                if (i == n) break;
            }
        }
    }
}

TEST(ModularityBlock, RejectsBadK) {
    EXPECT_THROW(build_modularity_block(triangle(), 1), Error);
    EXPECT_THROW(build_modularity_block(triangle(), 4), Error);
}

TEST(OneHotPenalty, Examples) {
    const double alpha = 1.7;
    const auto term = build_one_hot_penalty(2, 3, alpha);
    const IndexMap map(2, 3, 0);
    auto value = [&](const std::vector<std::uint8_t>& x) {
        return term.offset - qubo_value(term.matrix, 0.0, x);
    };
    std::vector<std::uint8_t> feasible(6, 0);
    feasible[map.assign(0, 2)] = feasible[map.assign(1, 0)] = 1;
    EXPECT_NEAR(value(feasible), 0.0, 1e-12);
    auto doubled = feasible;
    doubled[map.assign(0, 1)] = 1;
    EXPECT_NEAR(value(doubled), alpha, 1e-12);
    auto empty = feasible;
    empty[map.assign(1, 0)] = 0;
    EXPECT_NEAR(value(empty), alpha, 1e-12);
    EXPECT_EQ(term.matrix.asymmetry(), 0.0);
    EXPECT_THROW(build_one_hot_penalty(2, 3, 0.0), Error);
}

TEST(NonemptyPenalty, Examples) {
    const double beta = 0.6;
    const std::size_t n = 4;
    const std::size_t k = 2;
    const std::size_t d_max = 2;
    const auto term = build_nonempty_penalty(n, k, d_max, beta);
    const IndexMap map(n, k, d_max);
    auto value = [&](const std::vector<std::uint8_t>& x) {
        return -qubo_value(term.matrix, 0.0, x) + term.offset;
    };
    EXPECT_EQ(term.matrix.asymmetry(), 0.0);

    // Community 0: three members, slack 2 (bit 2 set). Community 1: one member, slack 0.
    std::vector<std::uint8_t> x(map.size(), 0);
    for (std::size_t i = 0; i < 3; ++i) x[map.assign(i, 0)] = 1;
    x[map.assign(3, 1)] = 1;
    x[map.slack(2, 0)] = 1;
    EXPECT_NEAR(value(x), 0.0, 1e-12);

    // Empty community with zero slack costs beta.
    std::vector<std::uint8_t> y(map.size(), 0);
    for (std::size_t i = 0; i < 4; ++i) y[map.assign(i, 0)] = 1;
    y[map.slack(1, 0)] = y[map.slack(2, 0)] = 1;  // 4 = 3 + 1
    EXPECT_NEAR(value(y), beta, 1e-12);

    EXPECT_THROW(build_nonempty_penalty(n, k, 0, beta), Error);
    EXPECT_THROW(build_nonempty_penalty(n, k, 1, -1.0), Error);
}

TEST(ChooseDmax, Examples) {
    EXPECT_EQ(choose_dmax(34, 4), 5u);
    EXPECT_EQ(choose_dmax(33, 7), 5u);
    EXPECT_EQ(choose_dmax(2, 2), 1u);
    for (std::size_t n = 2; n < 70; ++n) {
        for (std::size_t k = 2; k <= n; ++k) {
            const auto d = choose_dmax(n, k);
            EXPECT_GE(std::size_t{1} << d, n - k + 1);
            if (d > 1) EXPECT_LT(std::size_t{1} << (d - 1), n - k + 1);
        }
    }
}

TEST(Assemble, KarateLayout) {
    const auto g = load_karate();
    const auto q = assemble(g, 4);
    EXPECT_EQ(q.index.slack_bits(), 5u);
    EXPECT_EQ(q.size(), 34u * 4u + 5u * 4u);
    EXPECT_LE(q.matrix.asymmetry(), 1e-12);
    EXPECT_GT(q.alpha, 0.0);
    EXPECT_GT(q.beta, 0.0);
    EXPECT_NEAR(q.offset, q.alpha * 34 + q.beta * 4, 1e-12);
}

TEST(Assemble, FeasibleStatesScoreMinusModularity) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_connected_graph(rng, 3 + trial % 6);
        const std::size_t k = 2 + trial % 2;
        const auto q = assemble(g, k);
        std::uniform_int_distribution<int> label(0, static_cast<int>(k) - 1);
        for (int sample = 0; sample < 20; ++sample) {
            std::vector<int> labels(g.node_count());
            for (auto& l : labels) l = label(rng);
            const auto x = encode(q.index, labels);
            // Both penalties vanish only when every community is non-empty.
            std::set<int> used(labels.begin(), labels.end());
            if (used.size() != k) continue;
            EXPECT_NEAR(evaluate(q, x), -modularity(g, labels), 1e-9);
        }
    }
}

TEST(Assemble, TriangleGroundStateIsFeasibleWithSoundMultiplier) {
    const auto g = triangle();
    QuboOptions options;
    options.alpha = options.beta = sound_penalty(build_modularity_block(g, 2), 3);
    const auto q = assemble(g, 2, options);
    ASSERT_LE(q.size(), 16u);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> argmin;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << q.size()); ++code) {
        const auto x = bits_of(code, q.size());
        const double h = evaluate(q, x);
        if (h < best) {
            best = h;
            argmin = x;
        }
    }
    EXPECT_TRUE(decode(argmin, q.index).feasible());
    EXPECT_NEAR(best, -brute_force(g, 2, 1.0, 2).best.modularity, 1e-12);
}

TEST(Assemble, DefaultMultipliers) {
    const auto g = load_karate();
    const auto q = assemble(g, 4);
    EXPECT_DOUBLE_EQ(q.alpha, 1.5 / 34.0);
    EXPECT_DOUBLE_EQ(q.beta, q.alpha / 50.0);
    QuboOptions options;
    options.alpha = 0.2;
    const auto custom = assemble(g, 4, options);
    EXPECT_DOUBLE_EQ(custom.alpha, 0.2);
    EXPECT_DOUBLE_EQ(custom.beta, 0.2 / 50.0);
}

// With the sound multiplier every one-hot violating state is strictly worse
// than the best feasible one.
TEST(Assemble, PenaltySoundnessWithSoundMultiplier) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const auto g = random_connected_graph(rng, n, 0.5);
        QuboOptions options;
        options.alpha = options.beta = sound_penalty(build_modularity_block(g, 2), n);
        const auto q = assemble(g, 2, options);
        double best_feasible = std::numeric_limits<double>::infinity();
        double best_violating = std::numeric_limits<double>::infinity();
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << q.size()); ++code) {
            const auto x = bits_of(code, q.size());
            const double h = evaluate(q, x);
            if (decode(x, q.index).one_hot) {
                best_feasible = std::min(best_feasible, h);
            } else {
                best_violating = std::min(best_violating, h);
            }
        }
        EXPECT_GT(best_violating, best_feasible + 1e-9) << "n=" << n << " trial=" << trial;
    }
}

TEST(Evaluate, Examples) {
    QuboProblem zero{SquareMatrix(3), 1.25, IndexMap(), 0, 0};
    EXPECT_DOUBLE_EQ(evaluate(zero, std::vector<std::uint8_t>{1, 0, 1}), 1.25);

    QuboProblem diag{SquareMatrix(4), 0.0, IndexMap(), 0, 0};
    for (std::size_t i = 0; i < 4; ++i) diag.matrix(i, i) = -1.0;
    EXPECT_DOUBLE_EQ(evaluate(diag, std::vector<std::uint8_t>(4, 1)), 4.0);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_qubo(rng, 1 + trial % 9);
        const auto x = bits_of(rng(), q.size());
        EXPECT_NEAR(evaluate(q, x), qubo_value(q.matrix, q.offset, x), 1e-12);
    }
    EXPECT_THROW(evaluate(zero, std::vector<std::uint8_t>{1}), Error);
}

TEST(QuboToIsing, SingleVariable) {
    QuboProblem q{SquareMatrix(1, 1.0), 0.0, IndexMap(), 0, 0};  // H = -x
    const auto p = qubo_to_ising(q);
    EXPECT_NEAR(ising_energy(p, std::vector<std::int8_t>{1}), -1.0, 1e-15);
    EXPECT_NEAR(ising_energy(p, std::vector<std::int8_t>{-1}), 0.0, 1e-15);
    EXPECT_EQ(p.couplings(0, 0), 0.0);
}

TEST(QuboToIsing, ZeroProblemKeepsOffset) {
    QuboProblem q{SquareMatrix(5), 3.5, IndexMap(), 0, 0};
    const auto p = qubo_to_ising(q);
    for (double v : p.couplings.values()) EXPECT_EQ(v, 0.0);
    for (double h : p.fields) EXPECT_EQ(h, 0.0);
    EXPECT_EQ(p.offset, 3.5);
}

void expect_equivalent(const QuboProblem& q) {
    const auto p = qubo_to_ising(q);
    ASSERT_EQ(p.size(), q.size());
    EXPECT_LE(p.couplings.asymmetry(), 1e-12);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.couplings(i, i), 0.0);

    double best_qubo = std::numeric_limits<double>::infinity();
    double best_ising = std::numeric_limits<double>::infinity();
    std::vector<double> qubo_energy, ising_energy_values;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << q.size()); ++code) {
        const auto x = bits_of(code, q.size());
        const auto s = spins_of(code, q.size());
        const double h = qubo_value(q.matrix, q.offset, x);
        const double e = ising_value(p.couplings, p.fields, p.offset, s);
        ASSERT_NEAR(e, h, 1e-9);
        EXPECT_NEAR(ising_energy(p, s), e, 1e-9);
        qubo_energy.push_back(h);
        ising_energy_values.push_back(e);
        best_qubo = std::min(best_qubo, h);
        best_ising = std::min(best_ising, e);
    }
    // Argmin sets coincide under x = (s + 1) / 2.
    for (std::size_t c = 0; c < qubo_energy.size(); ++c) {
        EXPECT_EQ(qubo_energy[c] <= best_qubo + 1e-9, ising_energy_values[c] <= best_ising + 1e-9);
    }
}

TEST(QuboToIsing, ExhaustiveOnRandomInstances) {
    std::mt19937_64 rng(17);
    for (std::size_t size = 2; size <= 10; ++size) expect_equivalent(random_qubo(rng, size));
}

TEST(QuboToIsing, ExhaustiveOnAssembledInstances) {
    std::mt19937_64 rng(23);
    // (n, K) pairs whose assembled size stays at or below 12 variables.
    const std::vector<std::pair<std::size_t, std::size_t>> shapes = {{2, 2}, {3, 2}, {4, 2}, {3, 3}};
    for (const auto& [n, k] : shapes) {
        for (int trial = 0; trial < 3; ++trial) {
            const auto q = assemble(random_connected_graph(rng, n), k);
            ASSERT_LE(q.size(), 12u);
            expect_equivalent(q);
        }
    }
}

TEST(WriteQubo, HeaderAndUpperTriangle) {
    QuboProblem q{SquareMatrix(3), -0.5, IndexMap(), 0, 0};
    q.matrix(0, 0) = 2.0;
    q.matrix(0, 2) = q.matrix(2, 0) = 0.25;
    std::ostringstream out;
    write_qubo(q, out);
    EXPECT_EQ(out.str(), "3 -0.5\n0 0 2\n0 2 0.25\n");
}

}  // namespace
}  // namespace sbcd
