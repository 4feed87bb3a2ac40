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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sbcd/graph.hpp"
#include "sbcd/matrix.hpp"

namespace sbcd {

/// Binary variables are either one-hot assignment bits x_ik (node i in
/// community k) or slack bits x_dk (bit d = 1..d_max of community k's size
/// counter).
struct VariableTag {
    enum class Kind { Assign, Slack };
    Kind kind = Kind::Assign;
    std::size_t position = 0;  // node i for Assign, bit d (1-based) for Slack
    std::size_t community = 0;

    friend bool operator==(const VariableTag&, const VariableTag&) = default;
};

/// Flat layout: all x_ik first (node-major), then the slack block
/// (community-major, bit 1 first).
class IndexMap {
public:
    IndexMap() = default;
    IndexMap(std::size_t nodes, std::size_t communities, std::size_t slack_bits)
        : nodes_(nodes), communities_(communities), slack_bits_(slack_bits) {}

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t communities() const noexcept { return communities_; }
    std::size_t slack_bits() const noexcept { return slack_bits_; }
    std::size_t assign_count() const noexcept { return nodes_ * communities_; }
    std::size_t size() const noexcept { return (nodes_ + slack_bits_) * communities_; }

    std::size_t assign(std::size_t node, std::size_t community) const noexcept {
        return node * communities_ + community;
    }
    std::size_t slack(std::size_t bit, std::size_t community) const noexcept {
        return assign_count() + community * slack_bits_ + (bit - 1);
    }
    VariableTag tag(std::size_t index) const;

private:
    std::size_t nodes_ = 0;
    std::size_t communities_ = 0;
    std::size_t slack_bits_ = 0;
};

/// Penalized modularity QUBO. The objective is
///   H(x) = -x^T Q x + offset,
/// so the modularity block enters Q with a plus sign and every penalty
/// coefficient is negated into it.
struct QuboProblem {
    SquareMatrix matrix;
    double offset = 0.0;
    IndexMap index;
    double alpha = 0.0;
    double beta = 0.0;

    std::size_t size() const noexcept { return matrix.size(); }
};

/// Ising energy E(s) = -sum_ij J_ij s_i s_j - sum_i h_i s_i + offset, with
/// the double sum over ordered pairs and J_ii = 0.
struct IsingProblem {
    SquareMatrix couplings;
    std::vector<double> fields;
    double offset = 0.0;

    std::size_t size() const noexcept { return fields.size(); }
};

/// Quadratic contribution plus constant, i.e. x^T matrix x + offset.
struct PenaltyTerm {
    SquareMatrix matrix;
    double offset = 0.0;
};

/// Block over the n*K assignment variables with
/// B[(i,k),(j,k)] = (A_ij - gamma k_i k_j / 2m) / 2m, so x^T B x equals the
/// modularity of any one-hot x.
SquareMatrix build_modularity_block(const WeightedGraph& g, std::size_t communities,
                                    double gamma = 1.0);

/// alpha * sum_i (sum_k x_ik - 1)^2 over the n*K assignment variables.
PenaltyTerm build_one_hot_penalty(std::size_t nodes, std::size_t communities, double alpha);

/// beta * sum_k (sum_i x_ik - sum_d 2^(d-1) x_dk - 1)^2 over the full
/// assignment + slack layout.
PenaltyTerm build_nonempty_penalty(std::size_t nodes, std::size_t communities,
                                   std::size_t slack_bits, double beta);

/// Smallest d >= 1 with 2^d >= n - K + 1.
std::size_t choose_dmax(std::size_t nodes, std::size_t communities);

/// 2 * n * max |B_ij|: one violated constraint outweighs any attainable
/// modularity change, so every ground state is feasible.
double sound_penalty(const SquareMatrix& modularity_block, std::size_t nodes);

/// Default one-hot multiplier 1.5 / n, i.e. 1.5 times the mean k_i / 2m.
/// Weaker than sound_penalty; it keeps the dynamics from freezing early.
double default_alpha(std::size_t nodes);

/// Default non-empty multiplier alpha / 50.
double default_beta(double alpha);

struct QuboOptions {
    double gamma = 1.0;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::size_t> slack_bits;
};

QuboProblem assemble(const WeightedGraph& g, std::size_t communities,
                     const QuboOptions& options = {});

/// Full Hamiltonian -x^T Q x + offset.
double evaluate(const QuboProblem& q, std::span<const std::uint8_t> x);

/// Substitutes x = (s + 1) / 2; energies agree state by state.
IsingProblem qubo_to_ising(const QuboProblem& q);

double ising_energy(const IsingProblem& p, std::span<const std::int8_t> spins);

/// Text export: header "N_b offset", then "i j Q_ij" for each nonzero entry
/// with i <= j. H = -x^T Q x + offset with Q symmetric.
void write_qubo(const QuboProblem& q, std::ostream& out);

}  // namespace sbcd
