// entanglement.hpp — Two-qubit concurrence: general formula, X-structure closed
// form, metastable value and its optimal drive

#pragma once

#include "metastab/lindblad.hpp"

namespace metastab {

// Concurrence of a 4x4 state in the product basis {gg, ge, eg, ee}:
// C = max(0, mu1 - mu2 - mu3 - mu4) with mu_i the descending square roots of the
// eigenvalues of rho (Y(x)Y) rho* (Y(x)Y). Eigenvalues are clipped at -1e-12
// before the square root.
double concurrence(const DensityMatrix& rho);

// Closed form for states of the family
//   rho11 |gg><gg| + rho_vv |S><S| + rho22 |ee><ee| + (rho12 |gg><ee| + h.c.).
// Requires rho11 + rho22 + rho_vv = 1 within 1e-10 and positive semidefiniteness.
double concurrence_x_structure(double rho11, double rho22, double rho_vv,
                               Complex rho12);

// Concurrence of the metastable state of the effective two-level dynamics as a
// function of the decay rate and the two-photon drive. Requires gamma > 0 or
// omega2p > 0.
double metastable_concurrence(double gamma, double omega2p);

// Drive maximizing the metastable concurrence: Omega_2p = gamma / (2 sqrt(2)),
// where the concurrence reaches 1/sqrt(2).
double optimal_drive(double gamma);

} // namespace metastab
