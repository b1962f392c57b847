// trajectories.hpp — Quantum-jump unraveling: single trajectories, ensemble
// averages, and the deterministic no-jump conditional evolution

#pragma once

#include <cstdint>
#include <vector>

#include "metastab/lindblad.hpp"

namespace metastab {

// H_eff = H - (i/2) sum_k gamma_k O_k^dag O_k
ComplexMatrix effective_hamiltonian(const LindbladModel& model);

struct JumpEvent {
    double time{0.0};
    int channel{0};
    ComplexVector post_state; // normalized state right after the jump
};

struct TrajectoryRecord {
    std::uint64_t seed{0};
    std::vector<double> times;        // k*dt for k = 0..N
    std::vector<ComplexVector> states; // normalized at sample times
    std::vector<JumpEvent> jumps;      // strictly increasing times in [0, t_max]
};

// k-th output of the splitmix64 sequence started at base_seed; used to derive
// independent per-trajectory seeds.
std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t k);

// Waiting-time algorithm: propagate |psi> under exp(-i H_eff t); a jump fires
// when ||psi||^2 crosses a uniform threshold r in (0,1), with the crossing time
// refined by bisection to 1e-6 * dt; channel k is selected with probability
// proportional to gamma_k ||O_k psi||^2. Deterministic given the seed. Errors
// when any single-step jump probability reaches 0.1 (dt too coarse).
TrajectoryRecord sample_trajectory(const LindbladModel& model, const ComplexVector& psi0,
                                   double t_max, double dt, std::uint64_t seed);

// Mean projector over n_traj trajectories with seeds derive_stream_seed(base_seed, k).
EvolutionResult ensemble_average(const LindbladModel& model, const ComplexVector& psi0,
                                 int n_traj, double t_max, double dt,
                                 std::uint64_t base_seed);

struct NoJumpResult {
    std::vector<double> times;
    std::vector<double> survival;  // P(no jump up to t), non-increasing
    std::vector<DensityMatrix> conditional_states;
};

// Deterministic conditional evolution d rho~/dt = -i(H_eff rho~ - rho~ H_eff^dag);
// survival = tr rho~, conditional state = rho~ / tr rho~. Errors when the
// survival probability underflows below 1e-300.
NoJumpResult no_jump_evolution(const LindbladModel& model, const DensityMatrix& rho0,
                               const std::vector<double>& times);

} // namespace metastab
