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

#include "sbcd/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

namespace sbcd {

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

std::string format_bound(const BellBound& bound) {
    if (!std::isfinite(bound.log10)) return "inf";
    long exponent = static_cast<long>(std::floor(bound.log10));
    double mantissa = std::round(std::pow(10.0, bound.log10 - static_cast<double>(exponent)) * 100.0);
    if (mantissa >= 1000.0) {
        mantissa /= 10.0;
        ++exponent;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fe%ld", mantissa / 100.0, exponent);
    return buf;
}

namespace {

nlohmann::json node_id(const std::string& label) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), value);
    if (ec == std::errc{} && ptr == label.data() + label.size()) return value;
    return label;
}

}  // namespace

std::string partition_json(const std::string& dataset, const WeightedGraph& g,
                           const DetectionResult& result) {
    const auto& labels = result.partition.assignment;
    std::vector<nlohmann::json> communities(static_cast<std::size_t>(result.partition.community_count),
                                            nlohmann::json::array());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        communities[static_cast<std::size_t>(labels[i])].push_back(node_id(g.label(i)));
    }
    nlohmann::ordered_json doc;
    doc["dataset"] = dataset;
    doc["K_requested"] = result.k_requested;
    doc["K_effective"] = result.effective_k;
    doc["modularity"] = std::round(result.modularity * 1e6) / 1e6;
    doc["feasible"] = result.feasible;
    doc["repaired"] = result.repaired;
    doc["communities"] = communities;
    return doc.dump(2) + "\n";
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
    out << "K,modularity,feasible,effective_K\n";
    for (const auto& r : sweep.per_k) {
        out << r.k_requested << ',' << format_fixed(r.modularity) << ','
            << (r.feasible ? "true" : "false") << ',' << r.effective_k << '\n';
    }
}

}  // namespace sbcd
