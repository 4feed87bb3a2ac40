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

#include "sbcd/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "sbcd/error.hpp"

namespace sbcd {

namespace {

void check_community_count(std::size_t nodes, std::size_t communities) {
    if (communities < 2 || communities > nodes) {
        throw Error(ErrorCode::InvalidArgument,
                    "community count " + std::to_string(communities) + " outside [2, " +
                        std::to_string(nodes) + "]");
    }
}

void check_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
    }
}

}  // namespace

VariableTag IndexMap::tag(std::size_t index) const {
    if (index >= size()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
    if (index < assign_count()) {
        return {VariableTag::Kind::Assign, index / communities_, index % communities_};
    }
    const std::size_t rest = index - assign_count();
    return {VariableTag::Kind::Slack, rest % slack_bits_ + 1, rest / slack_bits_};
}

SquareMatrix build_modularity_block(const WeightedGraph& g, std::size_t communities,
                                    double gamma) {
    const std::size_t n = g.node_count();
    check_community_count(n, communities);
    const double two_m = 2.0 * g.total_weight();
    if (!(two_m > 0.0)) throw Error(ErrorCode::EmptyGraph, "graph has no edges");

    const IndexMap map(n, communities, 0);
    SquareMatrix block(map.assign_count());
    const auto k = g.degrees();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double b = (g.adjacency(i, j) - gamma * k[i] * k[j] / two_m) / two_m;
            for (std::size_t c = 0; c < communities; ++c) {
                block(map.assign(i, c), map.assign(j, c)) = b;
            }
        }
    }
    return block;
}

PenaltyTerm build_one_hot_penalty(std::size_t nodes, std::size_t communities, double alpha) {
    check_positive(alpha, "alpha");
    const IndexMap map(nodes, communities, 0);
    PenaltyTerm term{SquareMatrix(map.assign_count()), alpha * static_cast<double>(nodes)};
    // (sum_k x_k - 1)^2 = sum_{k != l} x_k x_l - sum_k x_k + 1 for binary x.
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t a = 0; a < communities; ++a) {
            for (std::size_t b = 0; b < communities; ++b) {
                term.matrix(map.assign(i, a), map.assign(i, b)) = a == b ? -alpha : alpha;
            }
        }
    }
    return term;
}

PenaltyTerm build_nonempty_penalty(std::size_t nodes, std::size_t communities,
                                   std::size_t slack_bits, double beta) {
    check_positive(beta, "beta");
    if (slack_bits < 1) throw Error(ErrorCode::InvalidArgument, "d_max must be at least 1");
    const IndexMap map(nodes, communities, slack_bits);
    PenaltyTerm term{SquareMatrix(map.size()), beta * static_cast<double>(communities)};

    // Each community contributes beta (c . z - 1)^2 with c = +1 on its
    // assignment bits and -2^(d-1) on its slack bits:
    //   sum_{a,b} c_a c_b z_a z_b - 2 sum_a c_a z_a + 1, and z_a^2 = z_a.
    std::vector<std::size_t> vars;
    std::vector<double> coeff;
    for (std::size_t k = 0; k < communities; ++k) {
        vars.clear();
        coeff.clear();
        for (std::size_t i = 0; i < nodes; ++i) {
            vars.push_back(map.assign(i, k));
            coeff.push_back(1.0);
        }
        for (std::size_t d = 1; d <= slack_bits; ++d) {
            vars.push_back(map.slack(d, k));
            coeff.push_back(-std::ldexp(1.0, static_cast<int>(d) - 1));
        }
        for (std::size_t a = 0; a < vars.size(); ++a) {
            for (std::size_t b = 0; b < vars.size(); ++b) {
                double value = beta * coeff[a] * coeff[b];
                if (a == b) value -= 2.0 * beta * coeff[a];
                term.matrix(vars[a], vars[b]) += value;
            }
        }
    }
    return term;
}

std::size_t choose_dmax(std::size_t nodes, std::size_t communities) {
    if (communities > nodes) throw Error(ErrorCode::InvalidArgument, "K exceeds node count");
    const std::size_t largest = nodes - communities + 1;
    std::size_t d = 1;
    while ((std::size_t{1} << d) < largest) ++d;
    return d;
}

double sound_penalty(const SquareMatrix& modularity_block, std::size_t nodes) {
    double largest = 0.0;
    for (double v : modularity_block.values()) largest = std::max(largest, std::abs(v));
    return 2.0 * largest * static_cast<double>(nodes);
}

double default_alpha(std::size_t nodes) { return 1.5 / static_cast<double>(nodes); }

double default_beta(double alpha) { return alpha / 50.0; }

QuboProblem assemble(const WeightedGraph& g, std::size_t communities, const QuboOptions& options) {
    const std::size_t n = g.node_count();
    const SquareMatrix block = build_modularity_block(g, communities, options.gamma);
    const double alpha = options.alpha.value_or(default_alpha(n));
    const double beta = options.beta.value_or(default_beta(alpha));
    const std::size_t slack_bits = options.slack_bits.value_or(choose_dmax(n, communities));

    const PenaltyTerm one_hot = build_one_hot_penalty(n, communities, alpha);
    const PenaltyTerm nonempty = build_nonempty_penalty(n, communities, slack_bits, beta);

    QuboProblem q;
    q.index = IndexMap(n, communities, slack_bits);
    q.alpha = alpha;
    q.beta = beta;
    q.matrix = SquareMatrix(q.index.size());
    q.offset = one_hot.offset + nonempty.offset;
    const std::size_t assign = q.index.assign_count();
    for (std::size_t a = 0; a < assign; ++a) {
        for (std::size_t b = 0; b < assign; ++b) {
            q.matrix(a, b) = block(a, b) - one_hot.matrix(a, b);
        }
    }
    for (std::size_t a = 0; a < q.size(); ++a) {
        for (std::size_t b = 0; b < q.size(); ++b) q.matrix(a, b) -= nonempty.matrix(a, b);
    }
    return q;
}

double evaluate(const QuboProblem& q, std::span<const std::uint8_t> x) {
    if (x.size() != q.size()) throw Error(ErrorCode::LengthMismatch, "state length mismatch");
    double quad = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i]) continue;
        const auto row = q.matrix.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (x[j]) quad += row[j];
        }
    }
    return q.offset - quad;
}

IsingProblem qubo_to_ising(const QuboProblem& q) {
    // x^T Q x with x = (s+1)/2 is
    //   1/4 [sum_{i!=j} Q_ij s_i s_j + 2 sum_i (sum_j Q_ij) s_i + sum_i Q_ii + sum_ij Q_ij].
    const std::size_t n = q.size();
    IsingProblem p{SquareMatrix(n), std::vector<double>(n, 0.0), q.offset};
    double total = 0.0;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = q.matrix.row(i);
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row_sum += row[j];
            if (i != j) p.couplings(i, j) = 0.25 * row[j];
        }
        p.fields[i] = 0.5 * row_sum;
        total += row_sum;
        trace += row[i];
    }
    p.offset -= 0.25 * (trace + total);
    return p;
}

double ising_energy(const IsingProblem& p, std::span<const std::int8_t> spins) {
    if (spins.size() != p.size()) throw Error(ErrorCode::LengthMismatch, "spin count mismatch");
    double energy = p.offset;
    for (std::size_t i = 0; i < spins.size(); ++i) {
        const auto row = p.couplings.row(i);
        double local = 0.0;
        for (std::size_t j = 0; j < spins.size(); ++j) local += row[j] * spins[j];
        energy -= spins[i] * (local + p.fields[i]);
    }
    return energy;
}

void write_qubo(const QuboProblem& q, std::ostream& out) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << q.size() << ' ' << q.offset << '\n';
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = i; j < q.size(); ++j) {
            if (q.matrix(i, j) != 0.0) out << i << ' ' << j << ' ' << q.matrix(i, j) << '\n';
        }
    }
    out.precision(old_precision);
}

}  // namespace sbcd
