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

#include "sbcd/sb.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "sbcd/error.hpp"

namespace sbcd::sb {

namespace {

// Incremental dSB forces are rebuilt from scratch this often to bound
// floating-point drift.
constexpr int kForceRefreshInterval = 1024;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::int8_t> decode_spins(std::span<const double> positions) {
    std::vector<std::int8_t> spins(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) spins[i] = positions[i] < 0.0 ? -1 : 1;
    return spins;
}

}  // namespace

void SbParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorCode::InvalidArgument, what);
    };
    require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
    require(a0 > 0.0 && std::isfinite(a0), "a0 must be positive");
    require(!c0 || (*c0 > 0.0 && std::isfinite(*c0)), "c0 must be positive");
    require(steps >= 1, "steps must be at least 1");
    require(replicas >= 1, "replicas must be at least 1");
}

double schedule_a(int t, const SbParams& params) {
    const double progress = static_cast<double>(t) / static_cast<double>(params.steps);
    return params.a0 * (params.schedule ? params.schedule(progress) : progress);
}

double default_c0(const IsingProblem& problem) {
    const std::size_t n = problem.size();
    if (n == 0) return 0.5;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) sum_sq += problem.couplings(i, j) * problem.couplings(i, j);
        }
    }
    double sigma = n > 1 ? std::sqrt(sum_sq / static_cast<double>(n * (n - 1))) : 0.0;
    if (sigma == 0.0) {
        double h_sq = 0.0;
        for (double h : problem.fields) h_sq += h * h;
        sigma = std::sqrt(h_sq / static_cast<double>(n));
    }
    return sigma > 0.0 ? 0.5 / (sigma * std::sqrt(static_cast<double>(n))) : 0.5;
}

std::vector<double> force(Variant variant, const SquareMatrix& couplings,
                          std::span<const double> fields, std::span<const double> positions) {
    const std::size_t n = positions.size();
    if (couplings.size() != n || fields.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "force: dimension mismatch");
    }
    std::vector<double> g(positions.begin(), positions.end());
    if (variant == Variant::Discrete) {
        for (double& v : g) v = sign_of(v);
    }
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = couplings.row(i);
        double acc = 0.5 * fields[i];
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * g[j];
        f[i] = acc;
    }
    return f;
}

std::uint64_t replica_seed(std::uint64_t master, std::size_t replica) {
    return splitmix64(splitmix64(master) + static_cast<std::uint64_t>(replica));
}

SbState initial_state(std::size_t size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Explicit 53-bit mantissa draw: identical streams across standard libraries.
    auto uniform = [&rng] { return 0.2 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 0.1; };
    SbState state;
    state.positions.resize(size);
    state.momenta.resize(size);
    for (auto& x : state.positions) x = uniform();
    for (auto& y : state.momenta) y = uniform();
    return state;
}

Integrator::Integrator(const IsingProblem& problem, const SbParams& params)
    : problem_(problem),
      params_(params),
      c0_(params.c0.value_or(default_c0(problem))),
      force_(problem.size(), 0.0),
      signs_(problem.size(), 0.0) {
    params.validate();
}

void Integrator::refresh_force(const SbState& state) {
    force_ = force(params_.variant, problem_.couplings, problem_.fields, state.positions);
    for (std::size_t i = 0; i < signs_.size(); ++i) signs_[i] = sign_of(state.positions[i]);
    force_valid_ = true;
}

void Integrator::advance(SbState& state) {
    const std::size_t n = problem_.size();
    if (state.positions.size() != n || state.momenta.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "state size differs from problem size");
    }
    const bool discrete = params_.variant == Variant::Discrete;
    if (!discrete || !force_valid_ || state.step % kForceRefreshInterval == 0) {
        refresh_force(state);
    }

    const double detuning = params_.a0 - schedule_a(state.step, params_);
    const double dt = params_.dt;
    const double drift = dt * params_.a0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
        double& x = state.positions[i];
        double& y = state.momenta[i];
        y += dt * (-detuning * x + c0_ * force_[i]);
        x += drift * y;
        finite = finite && std::isfinite(x) && std::isfinite(y);
        if (std::abs(x) > 1.0) {
            x = sign_of(x);
            y = 0.0;
        }
    }
    if (!finite) {
        throw Error(ErrorCode::Divergence,
                    "non-finite state at step " + std::to_string(state.step) + "; reduce dt");
    }
    ++state.step;

    if (discrete) {
        for (std::size_t i = 0; i < n; ++i) {
            const double s = sign_of(state.positions[i]);
            if (s == signs_[i]) continue;
            const double delta = s - signs_[i];
            signs_[i] = s;
            const auto row = problem_.couplings.row(i);  // J symmetric: column i == row i
            for (std::size_t j = 0; j < n; ++j) force_[j] += row[j] * delta;
        }
    }
}

SbState step(SbState state, const IsingProblem& problem, const SbParams& params) {
    Integrator integrator(problem, params);
    integrator.advance(state);
    return state;
}

SbSolution run(const IsingProblem& problem, const SbParams& params, std::size_t replica,
               const TraceFn& trace, int trace_every) {
    if (problem.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty Ising problem");
    Integrator integrator(problem, params);
    SbState state = initial_state(problem.size(), replica_seed(params.seed, replica));
    const int every = std::max(trace_every, 1);
    for (int t = 0; t < params.steps; ++t) {
        integrator.advance(state);
        if (trace && (state.step % every == 0 || state.step == params.steps)) {
            trace(state.step, schedule_a(state.step, params),
                  ising_energy(problem, decode_spins(state.positions)));
        }
    }
    SbSolution solution;
    solution.spins = decode_spins(state.positions);
    solution.energy = ising_energy(problem, solution.spins);
    solution.replica_index = replica;
    return solution;
}

ReplicaSummary run_replicas(const IsingProblem& problem, const SbParams& params) {
    params.validate();
    const auto count = static_cast<std::size_t>(params.replicas);
    std::vector<SbSolution> results(count);

    unsigned workers = params.threads ? params.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(count));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t r = next++; r < count && !failed; r = next++) {
            try {
                results[r] = run(problem, params, r);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    ReplicaSummary summary;
    summary.energies.reserve(count);
    std::size_t best = 0;
    for (std::size_t r = 0; r < count; ++r) {
        summary.energies.push_back(results[r].energy);
        if (results[r].energy < results[best].energy) best = r;
    }
    summary.best = results[best];
    summary.replicas = std::move(results);
    return summary;
}

}  // namespace sbcd::sb
