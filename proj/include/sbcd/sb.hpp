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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sbcd/matrix.hpp"
#include "sbcd/qubo.hpp"

namespace sbcd::sb {

/// Ballistic SB couples oscillators through their positions, discrete SB
/// through the signs of their positions.
enum class Variant { Ballistic, Discrete };

/// Maps progress t/steps in [0, 1] to a(t)/a0. Must increase from 0 to 1.
using Schedule = std::function<double(double progress)>;

/// Called with (step, a(step), Ising energy of sgn(x)).
using TraceFn = std::function<void(int, double, double)>;

struct SbParams {
    Variant variant = Variant::Discrete;
    double a0 = 1.0;
    std::optional<double> c0;  // defaults to default_c0(problem)
    double dt = 1.0;
    int steps = 30000;
    int replicas = 64;
    std::uint64_t seed = 0;
    Schedule schedule;         // empty: linear ramp
    unsigned threads = 0;      // 0: hardware concurrency

    /// Throws InvalidArgument unless dt, a0, c0 > 0 and steps, replicas >= 1.
    void validate() const;
};

struct SbState {
    std::vector<double> positions;
    std::vector<double> momenta;
    int step = 0;
};

struct SbSolution {
    std::vector<std::int8_t> spins;
    double energy = 0.0;
    std::size_t replica_index = 0;
};

struct ReplicaSummary {
    SbSolution best;
    std::vector<double> energies;      // one per replica, in replica order
    std::vector<SbSolution> replicas;  // every final state, in replica order
};

/// a(t) = a0 * schedule(t / steps); linear by default.
double schedule_a(int t, const SbParams& params);

/// 0.5 / (sigma_J sqrt(N)) with sigma_J the RMS of the off-diagonal
/// couplings. Falls back to the RMS of the fields when J vanishes.
double default_c0(const IsingProblem& problem);

inline double sign_of(double v) noexcept { return v < 0.0 ? -1.0 : 1.0; }

/// f_i = sum_j J_ij g(x_j) + h_i / 2 with g the identity (ballistic) or
/// sgn (discrete, sgn(0) = +1). The field enters at half weight so that
/// f = -1/2 dE/ds for the Ising energy.
std::vector<double> force(Variant variant, const SquareMatrix& couplings,
                          std::span<const double> fields, std::span<const double> positions);

/// Uniform positions and momenta in [-0.1, 0.1] from a seed.
SbState initial_state(std::size_t size, std::uint64_t seed);

/// Seed used by replica r of a run with the given master seed.
std::uint64_t replica_seed(std::uint64_t master, std::size_t replica);

/// Symplectic Euler integrator with inelastic walls at |x| = 1.
///
/// One step at time index t does
///   y <- y + dt * (-(a0 - a(t)) x + c0 f(x))
///   x <- x + dt * a0 * y
/// then clamps any |x_i| > 1 to sgn(x_i) and zeroes y_i. For the discrete
/// variant the force is kept up to date incrementally from sign flips.
class Integrator {
public:
    Integrator(const IsingProblem& problem, const SbParams& params);

    /// Advances one step; throws Divergence on non-finite values.
    void advance(SbState& state);

    double c0() const noexcept { return c0_; }

private:
    void refresh_force(const SbState& state);

    const IsingProblem& problem_;
    const SbParams& params_;
    double c0_;
    std::vector<double> force_;
    std::vector<double> signs_;
    bool force_valid_ = false;
};

/// One symplectic Euler step from a fresh force evaluation.
SbState step(SbState state, const IsingProblem& problem, const SbParams& params);

/// Integrates one replica for params.steps steps and decodes spins = sgn(x).
SbSolution run(const IsingProblem& problem, const SbParams& params, std::size_t replica = 0,
               const TraceFn& trace = {}, int trace_every = 1);

/// Runs params.replicas independent trajectories (in parallel when threads
/// allow) and keeps the lowest energy, ties going to the lower replica index.
ReplicaSummary run_replicas(const IsingProblem& problem, const SbParams& params);

}  // namespace sbcd::sb
