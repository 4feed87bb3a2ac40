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

#include <optional>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sbcd/detect.hpp"
#include "sbcd/error.hpp"
#include "sbcd/graph.hpp"
#include "sbcd/qubo.hpp"
#include "sbcd/report.hpp"
#include "sbcd/sb.hpp"

namespace py = pybind11;
using namespace sbcd;

namespace {

py::array_t<double> to_numpy(const SquareMatrix& m) {
    py::array_t<double> out({m.size(), m.size()});
    std::copy(m.values().begin(), m.values().end(), out.mutable_data());
    return out;
}

SquareMatrix from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw py::value_error("expected a square matrix");
    SquareMatrix m(static_cast<std::size_t>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), m.values_mut().begin());
    return m;
}

DetectOptions make_options(double gamma, std::optional<double> alpha, std::optional<double> beta,
                           std::optional<std::size_t> dmax, const std::string& variant, double a0,
                           std::optional<double> c0, std::optional<double> dt, std::optional<int> steps,
                           std::optional<int> replicas, std::uint64_t seed, unsigned threads,
                           const std::string& select = "modularity") {
    DetectOptions o;
    if (select == "energy") {
        o.selection = ReplicaSelection::Energy;
    } else if (select != "modularity") {
        throw py::value_error("select must be 'modularity' or 'energy'");
    }
    o.qubo.gamma = gamma;
    o.qubo.alpha = alpha;
    o.qubo.beta = beta;
    o.qubo.slack_bits = dmax;
    if (variant == "ballistic") {
        o.solver.variant = sb::Variant::Ballistic;
    } else if (variant != "discrete") {
        throw py::value_error("variant must be 'discrete' or 'ballistic'");
    }
    o.solver.a0 = a0;
    o.solver.c0 = c0;
    if (dt) o.solver.dt = *dt;
    if (steps) o.solver.steps = *steps;
    if (replicas) o.solver.replicas = *replicas;
    o.solver.seed = seed;
    o.solver.threads = threads;
    o.solver.validate();
    return o;
}

py::dict result_dict(const DetectionResult& r) {
    py::dict d;
    d["k_requested"] = r.k_requested;
    d["assignment"] = r.partition.assignment;
    d["modularity"] = r.modularity;
    d["hamiltonian"] = r.hamiltonian;
    d["feasible"] = r.feasible;
    d["repaired"] = r.repaired;
    d["effective_k"] = r.effective_k;
    d["replica"] = r.replica;
    return d;
}

#define SBCD_SOLVER_ARGS                                                                        \
    py::kw_only(), py::arg("gamma") = 1.0, py::arg("alpha") = py::none(),                       \
        py::arg("beta") = py::none(), py::arg("dmax") = py::none(),                             \
        py::arg("variant") = "discrete", py::arg("a0") = 1.0, py::arg("c0") = py::none(),       \
        py::arg("dt") = py::none(), py::arg("steps") = py::none(),                              \
        py::arg("replicas") = py::none(), py::arg("seed") = 0, py::arg("threads") = 0,         \
        py::arg("select") = "modularity"

}  // namespace

PYBIND11_MODULE(_sbcd, m) {
    m.doc() = "Modularity community detection with simulated bifurcation";

    py::register_exception<Error>(m, "SbcdError", PyExc_ValueError);

    py::class_<WeightedGraph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
                 std::vector<Edge> list;
                 for (const auto& [u, v, w] : edges) list.push_back({u, v, w});
                 return WeightedGraph(n, std::move(list));
             }),
             py::arg("node_count"), py::arg("edges"))
        .def_property_readonly("node_count", &WeightedGraph::node_count)
        .def_property_readonly("edge_count", &WeightedGraph::edge_count)
        .def_property_readonly("total_weight", &WeightedGraph::total_weight)
        .def_property_readonly("labels", &WeightedGraph::labels)
        .def_property_readonly("edges",
                               [](const WeightedGraph& g) {
                                   py::list out;
                                   for (const auto& e : g.edges()) out.append(py::make_tuple(e.u, e.v, e.weight));
                                   return out;
                               })
        .def("adjacency", [](const WeightedGraph& g) { return to_numpy(g.adjacency()); });

    m.def("load_karate", &load_karate, py::arg("unweighted") = false);
    m.def("load_ieee33", &load_ieee33, py::arg("include_tie_lines") = false);
    m.def("load_edge_list", &load_edge_list_file, py::arg("path"));

    m.def("modularity",
          [](const WeightedGraph& g, const std::vector<int>& labels, double gamma) {
              return modularity(g, labels, gamma);
          },
          py::arg("graph"), py::arg("labels"), py::arg("gamma") = 1.0);

    m.def("bell_bound",
          [](std::size_t n) {
              const auto b = bell_bound(n);
              return py::make_tuple(b.value, b.log10);
          },
          py::arg("n"), "Returns (value, log10) of the Bell-number upper bound.");

    m.def("assemble_qubo",
          [](const WeightedGraph& g, std::size_t k, double gamma, std::optional<double> alpha,
             std::optional<double> beta, std::optional<std::size_t> dmax) {
              const auto q = assemble(g, k, QuboOptions{gamma, alpha, beta, dmax});
              return py::make_tuple(to_numpy(q.matrix), q.offset);
          },
          py::arg("graph"), py::arg("k"), py::kw_only(), py::arg("gamma") = 1.0,
          py::arg("alpha") = py::none(), py::arg("beta") = py::none(), py::arg("dmax") = py::none(),
          "Returns (Q, offset) with H(x) = -x^T Q x + offset.");

    m.def("qubo_to_ising",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> q, double offset) {
              QuboProblem problem;
              problem.matrix = from_numpy(q);
              problem.offset = offset;
              const auto ising = qubo_to_ising(problem);
              return py::make_tuple(to_numpy(ising.couplings), ising.fields, ising.offset);
          },
          py::arg("q"), py::arg("offset") = 0.0, "Returns (J, h, offset) with s = 2x - 1.");

    m.def("solve_ising",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> j, const std::vector<double>& h,
             double offset, const std::string& variant, int replicas, int steps, std::optional<double> dt,
             std::uint64_t seed) {
              const IsingProblem problem{from_numpy(j), h, offset};
              auto params = make_options(1.0, {}, {}, {}, variant, 1.0, {}, dt, steps, replicas, seed, 0).solver;
              const auto best = sb::run_replicas(problem, params).best;
              return py::make_tuple(std::vector<int>(best.spins.begin(), best.spins.end()), best.energy);
          },
          py::arg("j"), py::arg("h"), py::arg("offset") = 0.0, py::kw_only(), py::arg("variant") = "discrete",
          py::arg("replicas") = 32, py::arg("steps") = 2000, py::arg("dt") = py::none(), py::arg("seed") = 0,
          "Minimises E(s) = -s^T J s - h.s + offset; returns (spins, energy).");

    m.def("detect",
          [](const WeightedGraph& g, std::size_t k, double gamma, std::optional<double> alpha,
             std::optional<double> beta, std::optional<std::size_t> dmax, const std::string& variant, double a0,
             std::optional<double> c0, std::optional<double> dt, std::optional<int> steps,
             std::optional<int> replicas, std::uint64_t seed, unsigned threads, const std::string& select) {
              const auto o = make_options(gamma, alpha, beta, dmax, variant, a0, c0, dt, steps, replicas, seed,
                                          threads, select);
              DetectionResult r;
              {
                  py::gil_scoped_release release;
                  r = detect_k(g, k, o);
              }
              return result_dict(r);
          },
          py::arg("graph"), py::arg("k"), SBCD_SOLVER_ARGS);

    m.def("sweep",
          [](const WeightedGraph& g, std::size_t k_min, std::size_t k_max, double gamma,
             std::optional<double> alpha, std::optional<double> beta, std::optional<std::size_t> dmax,
             const std::string& variant, double a0, std::optional<double> c0, std::optional<double> dt,
             std::optional<int> steps, std::optional<int> replicas, std::uint64_t seed, unsigned threads, const std::string& select) {
              const auto o = make_options(gamma, alpha, beta, dmax, variant, a0, c0, dt, steps, replicas, seed,
                                          threads, select);
              SweepResult s;
              {
                  py::gil_scoped_release release;
                  s = sweep_k(g, k_min, k_max, o);
              }
              py::dict d;
              py::list per_k;
              for (const auto& r : s.per_k) per_k.append(result_dict(r));
              d["per_k"] = per_k;
              d["k_opt"] = s.k_opt;
              d["q_opt"] = s.q_opt;
              return d;
          },
          py::arg("graph"), py::arg("k_min"), py::arg("k_max"), SBCD_SOLVER_ARGS);

    m.def("brute_force",
          [](const WeightedGraph& g, std::size_t k_max, double gamma, std::size_t min_blocks) {
              const auto r = brute_force(g, k_max, gamma, min_blocks);
              return py::make_tuple(r.best.assignment, r.best.modularity);
          },
          py::arg("graph"), py::arg("k_max"), py::arg("gamma") = 1.0, py::arg("min_blocks") = 1,
          "Exact optimum for graphs with at most 12 nodes; returns (assignment, modularity).");

    m.def("partition_json",
          [](const std::string& dataset, const WeightedGraph& g, const std::vector<int>& labels) {
              DetectionResult r;
              r.partition = make_partition(g, labels);
              r.modularity = r.partition.modularity;
              r.k_requested = static_cast<std::size_t>(r.partition.community_count);
              r.effective_k = r.k_requested;
              r.feasible = true;
              return partition_json(dataset, g, r);
          },
          py::arg("dataset"), py::arg("graph"), py::arg("labels"));
}
