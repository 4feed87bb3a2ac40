# Copyright 2026 The sbcd Authors.
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.

"""Modularity community detection with simulated bifurcation."""

from ._sbcd import (
    Graph,
    SbcdError,
    assemble_qubo,
    bell_bound,
    brute_force,
    detect,
    load_edge_list,
    load_ieee33,
    load_karate,
    modularity,
    partition_json,
    qubo_to_ising,
    solve_ising,
    sweep,
)

__all__ = [
    "Graph",
    "SbcdError",
    "assemble_qubo",
    "bell_bound",
    "brute_force",
    "detect",
    "load_edge_list",
    "load_ieee33",
    "load_karate",
    "modularity",
    "partition_json",
    "qubo_to_ising",
    "solve_ising",
    "sweep",
]
