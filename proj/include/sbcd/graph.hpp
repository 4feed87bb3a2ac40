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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sbcd/matrix.hpp"

namespace sbcd {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected weighted graph on nodes 0..n-1.
///
/// Holds the dense adjacency matrix A, weighted degrees k_i = sum_j A_ij and
/// the total weight m = 1/2 sum_ij A_ij. Node ids are compact; the original
/// identifiers read from input are kept in labels() for reporting.
class WeightedGraph {
public:
    /// Validates and builds the graph. Edges are stored with u < v.
    /// Throws Error on self-loops, non-positive weights, duplicates or
    /// out-of-range endpoints.
    WeightedGraph(std::size_t node_count, std::vector<Edge> edges,
                  std::vector<std::string> labels = {});

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const SquareMatrix& adjacency() const noexcept { return adjacency_; }
    double adjacency(std::size_t i, std::size_t j) const noexcept { return adjacency_(i, j); }
    std::span<const double> degrees() const noexcept { return degrees_; }
    double degree(std::size_t i) const noexcept { return degrees_[i]; }
    double total_weight() const noexcept { return total_weight_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const noexcept { return labels_[i]; }

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_ && a.labels_ == b.labels_;
    }

private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
    SquareMatrix adjacency_;
    std::vector<double> degrees_;
    double total_weight_ = 0.0;
};

/// Parses whitespace separated "u v [w]" lines; '#' starts a comment line.
/// A line holding a single id declares an isolated node. Ids are
/// non-negative integers, compacted to 0..n-1 in ascending numeric order.
WeightedGraph load_edge_list(std::istream& in);
WeightedGraph load_edge_list_file(const std::string& path);

/// Writes the graph in the format accepted by load_edge_list, using the
/// original labels and round-trip exact weights.
void serialize_edge_list(const WeightedGraph& g, std::ostream& out);

/// Zachary's karate club with the original interaction counts as weights
/// (m = 231). `unweighted` sets every weight to 1.
WeightedGraph load_karate(bool unweighted = false);

struct LineRecord {
    std::size_t from_bus = 0;
    std::size_t to_bus = 0;
    double r_ohm = 0.0;
    double x_ohm = 0.0;
};

/// Reads "from_bus,to_bus,r_ohm,x_ohm" rows after a header row.
std::vector<LineRecord> load_line_records(std::istream& in);

/// 1 / |r + ix|. Throws ZeroImpedance when r = x = 0.
double electrical_weight(double r_ohm, double x_ohm);

/// Graph whose edge weights are inverse impedance magnitudes.
WeightedGraph graph_from_lines(std::span<const LineRecord> lines);

/// Baran-Wu 33-bus feeder, 32 in-service branches; the five normally open
/// tie lines are added when requested. Buses keep their 1-based numbers as
/// labels.
WeightedGraph load_ieee33(bool include_tie_lines = false);
std::vector<LineRecord> ieee33_branches();
std::vector<LineRecord> ieee33_tie_lines();

/// Newman modularity of a labelling:
///   Q = 1/2m sum_ij (A_ij - gamma k_i k_j / 2m) delta(c_i, c_j).
/// Labels may be any integers; only equality matters. Throws EmptyGraph
/// when m = 0 and LengthMismatch on a wrong-sized assignment.
double modularity(const WeightedGraph& g, std::span<const int> assignment, double gamma = 1.0);

struct Partition {
    std::vector<int> assignment;
    int community_count = 0;
    double modularity = 0.0;
};

/// Relabels communities 0..K-1 by first appearance and scores the result.
Partition make_partition(const WeightedGraph& g, std::span<const int> assignment,
                         double gamma = 1.0);

/// Labels renumbered 0..K-1 in order of first appearance.
std::vector<int> compact_labels(std::span<const int> assignment);

}  // namespace sbcd
