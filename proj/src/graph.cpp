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

#include "sbcd/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "sbcd/error.hpp"

namespace sbcd {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::InvalidWeight: return "InvalidWeight";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::ZeroImpedance: return "ZeroImpedance";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::Divergence: return "Divergence";
        case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    }
    return "Unknown";
}

WeightedGraph::WeightedGraph(std::size_t node_count, std::vector<Edge> edges,
                             std::vector<std::string> labels)
    : node_count_(node_count),
      edges_(std::move(edges)),
      labels_(std::move(labels)),
      adjacency_(node_count),
      degrees_(node_count, 0.0) {
    if (node_count_ == 0) throw Error(ErrorCode::EmptyGraph, "graph has no nodes");
    if (labels_.empty()) {
        labels_.reserve(node_count_);
        for (std::size_t i = 0; i < node_count_; ++i) labels_.push_back(std::to_string(i));
    } else if (labels_.size() != node_count_) {
        throw Error(ErrorCode::LengthMismatch, "label count differs from node count");
    }

    for (auto& e : edges_) {
        if (e.u >= node_count_ || e.v >= node_count_) {
            throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
        }
        if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop on node " + labels_[e.u]);
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw Error(ErrorCode::InvalidWeight, "edge weights must be positive and finite");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
        if (adjacency_(e.u, e.v) != 0.0) {
            throw Error(ErrorCode::DuplicateEdge,
                        "duplicate edge " + labels_[e.u] + " " + labels_[e.v]);
        }
        adjacency_(e.u, e.v) = e.weight;
        adjacency_(e.v, e.u) = e.weight;
    }
    for (std::size_t i = 0; i < node_count_; ++i) {
        double k = 0.0;
        for (double a : adjacency_.row(i)) k += a;
        degrees_[i] = k;
        total_weight_ += k;
    }
    total_weight_ *= 0.5;
}

namespace {

std::size_t parse_node_id(const std::string& token, std::size_t line_no) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(line_no) + ": bad node id '" + token + "'");
    }
    return value;
}

double parse_real(const std::string& token, std::size_t line_no) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || token.empty()) {
        throw Error(ErrorCode::MalformedLine,
                    "line " + std::to_string(line_no) + ": bad number '" + token + "'");
    }
    return value;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct RawEdge {
    std::size_t u, v;
    double w;
};

// Maps sorted original ids onto 0..n-1.
WeightedGraph build_compacted(const std::set<std::size_t>& ids, const std::vector<RawEdge>& raw) {
    std::unordered_map<std::size_t, std::size_t> index;
    std::vector<std::string> labels;
    labels.reserve(ids.size());
    for (std::size_t id : ids) {
        index.emplace(id, labels.size());
        labels.push_back(std::to_string(id));
    }
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& r : raw) edges.push_back({index.at(r.u), index.at(r.v), r.w});
    return WeightedGraph(ids.size(), std::move(edges), std::move(labels));
}

}  // namespace

WeightedGraph load_edge_list(std::istream& in) {
    std::set<std::size_t> ids;
    std::vector<RawEdge> raw;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.size() > 3) {
            throw Error(ErrorCode::MalformedLine,
                        "line " + std::to_string(line_no) + ": expected 'u v [w]'");
        }
        const std::size_t u = parse_node_id(tokens[0], line_no);
        ids.insert(u);
        if (tokens.size() == 1) continue;
        const std::size_t v = parse_node_id(tokens[1], line_no);
        const double w = tokens.size() == 3 ? parse_real(tokens[2], line_no) : 1.0;
        if (u == v) {
            throw Error(ErrorCode::SelfLoop, "line " + std::to_string(line_no) + ": self-loop");
        }
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::InvalidWeight,
                        "line " + std::to_string(line_no) + ": weight must be positive");
        }
        if (!seen.emplace(std::min(u, v), std::max(u, v)).second) {
            throw Error(ErrorCode::DuplicateEdge,
                        "line " + std::to_string(line_no) + ": duplicate edge");
        }
        ids.insert(v);
        raw.push_back({u, v, w});
    }
    if (ids.empty()) throw Error(ErrorCode::EmptyGraph, "edge list contains no nodes");
    return build_compacted(ids, raw);
}

WeightedGraph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    return load_edge_list(in);
}

void serialize_edge_list(const WeightedGraph& g, std::ostream& out) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    std::vector<bool> touched(g.node_count(), false);
    for (const auto& e : g.edges()) {
        out << g.label(e.u) << ' ' << g.label(e.v) << ' ' << e.weight << '\n';
        touched[e.u] = touched[e.v] = true;
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!touched[i]) out << g.label(i) << '\n';
    }
    out.precision(old_precision);
}

std::vector<LineRecord> load_line_records(std::istream& in) {
    std::vector<LineRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream fields(line);
        for (std::string c; std::getline(fields, c, ',');) cells.push_back(trim(c));
        if (cells.size() != 4) {
            throw Error(ErrorCode::MalformedLine,
                        "line " + std::to_string(line_no) + ": expected 4 columns");
        }
        LineRecord rec;
        rec.from_bus = parse_node_id(cells[0], line_no);
        rec.to_bus = parse_node_id(cells[1], line_no);
        rec.r_ohm = parse_real(cells[2], line_no);
        rec.x_ohm = parse_real(cells[3], line_no);
        if (rec.r_ohm == 0.0 && rec.x_ohm == 0.0) {
            throw Error(ErrorCode::ZeroImpedance, "line " + std::to_string(line_no));
        }
        records.push_back(rec);
    }
    return records;
}

double electrical_weight(double r_ohm, double x_ohm) {
    const double magnitude = std::hypot(r_ohm, x_ohm);
    if (!(magnitude > 0.0)) throw Error(ErrorCode::ZeroImpedance, "|r + ix| = 0");
    return 1.0 / magnitude;
}

WeightedGraph graph_from_lines(std::span<const LineRecord> lines) {
    std::set<std::size_t> ids;
    std::vector<RawEdge> raw;
    raw.reserve(lines.size());
    for (const auto& l : lines) {
        ids.insert(l.from_bus);
        ids.insert(l.to_bus);
        raw.push_back({l.from_bus, l.to_bus, electrical_weight(l.r_ohm, l.x_ohm)});
    }
    if (ids.empty()) throw Error(ErrorCode::EmptyGraph, "no line records");
    return build_compacted(ids, raw);
}

WeightedGraph load_ieee33(bool include_tie_lines) {
    auto lines = ieee33_branches();
    if (include_tie_lines) {
        const auto ties = ieee33_tie_lines();
        lines.insert(lines.end(), ties.begin(), ties.end());
    }
    return graph_from_lines(lines);
}

double modularity(const WeightedGraph& g, std::span<const int> assignment, double gamma) {
    const std::size_t n = g.node_count();
    if (assignment.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "assignment length differs from node count");
    }
    const double two_m = 2.0 * g.total_weight();
    if (!(two_m > 0.0)) throw Error(ErrorCode::EmptyGraph, "modularity undefined for m = 0");
    const auto k = g.degrees();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = g.adjacency().row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (assignment[i] != assignment[j]) continue;
            sum += row[j] - gamma * k[i] * k[j] / two_m;
        }
    }
    return sum / two_m;
}

std::vector<int> compact_labels(std::span<const int> assignment) {
    std::map<int, int> relabel;
    std::vector<int> out;
    out.reserve(assignment.size());
    for (int c : assignment) {
        auto [it, inserted] = relabel.emplace(c, static_cast<int>(relabel.size()));
        out.push_back(it->second);
    }
    return out;
}

Partition make_partition(const WeightedGraph& g, std::span<const int> assignment, double gamma) {
    Partition p;
    p.assignment = compact_labels(assignment);
    p.community_count =
        p.assignment.empty() ? 0 : *std::max_element(p.assignment.begin(), p.assignment.end()) + 1;
    p.modularity = modularity(g, p.assignment, gamma);
    return p;
}

}  // namespace sbcd
