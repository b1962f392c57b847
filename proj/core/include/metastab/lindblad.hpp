// lindblad.hpp — Lindblad models, the vectorized generator, time evolution, steady states

#pragma once

#include <string>
#include <vector>

#include "metastab/algebra.hpp"

namespace metastab {

// One decay channel (gamma/2)(2 O rho O^dag - {O^dag O, rho})
struct Dissipator {
    double rate{0.0};
    ComplexMatrix jump;
};

struct LindbladModel {
    ComplexMatrix hamiltonian; // Hermitian within 1e-12
    std::vector<Dissipator> dissipators;
    std::vector<std::string> basis_labels; // empty or one label per basis state

    int dim() const { return static_cast<int>(hamiltonian.rows()); }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct DensityMatrix {
    ComplexMatrix matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }

    // Verifies Hermiticity (1e-10), unit trace (1e-10) and min eigenvalue >= -1e-8.
    static DensityMatrix checked(const ComplexMatrix& m);
    static DensityMatrix pure(const ComplexVector& psi);
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

enum class EvolveMethod {
    Spectral,   // V exp(Lambda t) V^{-1} applied to vec(rho0); exact in t
    AdaptiveRK, // adaptive-step explicit integrator, cross-check path
};

// dim^2 x dim^2 generator L acting on column-stacked rho:
// L = -i (I (x) H - H^T (x) I)
//     + sum_k (gamma_k/2) [2 conj(O_k) (x) O_k - I (x) O_k^dag O_k - (O_k^dag O_k)^T (x) I]
ComplexMatrix build_liouvillian(const LindbladModel& model);

// d rho/dt from the commutator + dissipator form, without vectorization.
ComplexMatrix rhs(const LindbladModel& model, const ComplexMatrix& rho);

// rho(t) on a strictly increasing grid of absolute times (all >= 0), with rho0 the
// state at t = 0; the grid need not include 0. Trace and Hermiticity are re-enforced
// by projection only while the drift stays below 1e-8; larger drift or a positivity
// violation beyond -1e-8 is an error.
EvolutionResult evolve(const LindbladModel& model, const DensityMatrix& rho0,
                       const std::vector<double>& times,
                       EvolveMethod method = EvolveMethod::Spectral);

// Unique steady state via trace-row replacement. Requires exactly one eigenvalue
// with |Re lambda| <= 1e-12; a degenerate manifold is reported with the count.
DensityMatrix steady_state(const LindbladModel& model);

} // namespace metastab
