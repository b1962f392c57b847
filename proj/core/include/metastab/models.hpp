// models.hpp — Concrete systems: three-level atom with a virtual state, driven qubit pair, chiral qubit pair

#pragma once

#include "metastab/lindblad.hpp"

namespace metastab {

// Three-level system: two quasi-resonant states |1>, |2> coupled through an
// off-resonant virtual state |V>. All rates in units of a reference frequency.
// Closed-form operations additionally require delta1 = delta2 = 0, gammaV = 0
// and deltaV != 0.
struct LambdaParams {
    double delta1{0.0};
    double delta2{0.0};
    double deltaV{0.0};
    double omega{0.0};
    double gamma{0.0};
    double gammaV{0.0};
};

// Two qubits coupled to a chiral waveguide; qubits detuned by +-delta.
struct ChiralParams {
    double omega{0.0};
    double delta{0.0};
    double gammaR{0.0};
    double gammaL{0.0};

    double gamma_total() const { return 2.0 * (gammaR + gammaL); }
    double gamma_diff() const { return gammaR - gammaL; }
};

// Basis {1, 2, V}: H = d1|1><1| + d2|2><2| + dV|V><V| + Omega(|1><V| + |2><V| + h.c.);
// dissipators (gamma, |1><2|) and (gammaV, |1><V|).
LindbladModel lambda_model(const LambdaParams& p);

// Two driven qubits at the two-photon resonance, collective basis {gg, S, A, ee}.
// The collective coupling is fixed so that restriction to {gg, S, ee} reproduces
// lambda_model with the same omega; |A> carries no coupling and no dissipator.
// Dissipators: the engineered two-photon channel (gamma, |gg><ee|) and the mapped
// virtual decay (gammaV, |gg><S|).
LindbladModel two_qubit_tpr_model(const LambdaParams& p);

// Chiral-waveguide pair, collective basis {gg, S, A, ee}:
// H = sqrt(2) Omega (|S><gg| + |ee><S| + h.c.)
//     + (delta - i dgamma/2)|A><S| + h.c.,
// one collective dissipator (Gamma, |gg><S| + |S><ee|) with Gamma = 2(gammaR + gammaL).
LindbladModel chiral_model(const ChiralParams& cp);

// Change of basis from the collective basis {gg, S, A, ee} to the product basis
// {gg, ge, eg, ee}, with |S> = (|ge> + |eg>)/sqrt(2), |A> = (|eg> - |ge>)/sqrt(2).
ComplexMatrix coupled_to_product_matrix();
DensityMatrix coupled_to_product(const DensityMatrix& rho_coupled);

// Restriction of a collective-basis 4-level state to {gg, S, ee}, relabeled
// {1, V, 2} and renormalized. Throws when rho_AA > 1e-8 (projection would be lossy).
DensityMatrix project_to_lambda(const DensityMatrix& rho4);

} // namespace metastab
