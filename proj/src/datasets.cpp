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

// Bundled benchmark data, compiled in so the CLI needs no external files.

#include <sstream>
#include <string_view>

#include "sbcd/graph.hpp"

namespace sbcd {

namespace {

// Zachary (1977), weighted by the number of contexts in which each pair of
// members interacted.
constexpr std::string_view kKarateEdges = R"(# u v interactions
0 1 4
0 2 5
0 3 3
0 4 3
0 5 3
0 6 3
0 7 2
0 8 2
0 10 2
0 11 3
0 12 1
0 13 3
0 17 2
0 19 2
0 21 2
0 31 2
1 2 6
1 3 3
1 7 4
1 13 5
1 17 1
1 19 2
1 21 2
1 30 2
2 3 3
2 7 4
2 8 5
2 9 1
2 13 3
2 27 2
2 28 2
2 32 2
3 7 3
3 12 3
3 13 3
4 6 2
4 10 3
5 6 5
5 10 3
5 16 3
6 16 3
8 30 3
8 32 3
8 33 4
9 33 2
13 33 3
14 32 3
14 33 2
15 32 3
15 33 4
18 32 1
18 33 2
19 33 1
20 32 3
20 33 1
22 32 2
22 33 3
23 25 5
23 27 4
23 29 3
23 32 5
23 33 4
24 25 2
24 27 3
24 31 2
25 31 7
26 29 4
26 33 2
27 33 4
28 31 2
28 33 2
29 32 4
29 33 2
30 32 3
30 33 3
31 32 4
31 33 4
32 33 5
)";

// Baran & Wu (1989) 33-bus radial distribution feeder, buses numbered 1..33.
constexpr std::string_view kIeee33Branches = R"(from_bus,to_bus,r_ohm,x_ohm
1,2,0.0922,0.047
2,3,0.493,0.2511
3,4,0.366,0.1864
4,5,0.3811,0.1941
5,6,0.819,0.707
6,7,0.1872,0.6188
7,8,0.7114,0.2351
8,9,1.03,0.74
9,10,1.044,0.74
10,11,0.1966,0.065
11,12,0.3744,0.1238
12,13,1.468,1.155
13,14,0.5416,0.7129
14,15,0.591,0.526
15,16,0.7463,0.545
16,17,1.289,1.721
17,18,0.732,0.574
2,19,0.164,0.1565
19,20,1.5042,1.3554
20,21,0.4095,0.4784
21,22,0.7089,0.9373
3,23,0.4512,0.3083
23,24,0.898,0.7091
24,25,0.896,0.7011
6,26,0.203,0.1034
26,27,0.2842,0.1447
27,28,1.059,0.9337
28,29,0.8042,0.7006
29,30,0.5075,0.2585
30,31,0.9744,0.963
31,32,0.3105,0.3619
32,33,0.341,0.5302
)";

// Normally open tie switches of the same feeder.
constexpr std::string_view kIeee33TieLines = R"(from_bus,to_bus,r_ohm,x_ohm
21,8,2.0,2.0
9,15,2.0,2.0
12,22,2.0,2.0
18,33,0.5,0.5
25,29,0.5,0.5
)";

std::vector<LineRecord> parse_table(std::string_view table) {
    std::istringstream in{std::string(table)};
    return load_line_records(in);
}

}  // namespace

WeightedGraph load_karate(bool unweighted) {
    std::istringstream in{std::string(kKarateEdges)};
    WeightedGraph g = load_edge_list(in);
    if (!unweighted) return g;
    auto edges = g.edges();
    for (auto& e : edges) e.weight = 1.0;
    return WeightedGraph(g.node_count(), std::move(edges), g.labels());
}

std::vector<LineRecord> ieee33_branches() { return parse_table(kIeee33Branches); }

std::vector<LineRecord> ieee33_tie_lines() { return parse_table(kIeee33TieLines); }

}  // namespace sbcd
