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

#include <iosfwd>
#include <string>

#include "sbcd/detect.hpp"

namespace sbcd {

/// Fixed six-decimal rendering used for every reported modularity.
std::string format_fixed(double value, int decimals = 6);

/// "7.89e29"-style scientific rendering with three significant digits,
/// computed from log10 so it never overflows.
std::string format_bound(const BellBound& bound);

/// Partition document:
///   {dataset, K_requested, K_effective, modularity, feasible, repaired,
///    communities: [[node ids]...]}
/// Node ids are the graph's original labels.
std::string partition_json(const std::string& dataset, const WeightedGraph& g,
                           const DetectionResult& result);

/// "K,modularity,feasible,effective_K" header plus one row per K.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

}  // namespace sbcd
