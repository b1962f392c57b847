// hae.hpp — Hierarchical adiabatic elimination: three-level closed forms and a
// generic two-step numerical reduction over an eliminated/fast/slow partition

#pragma once

#include <vector>

#include "metastab/lindblad.hpp"
#include "metastab/models.hpp"

namespace metastab {

// ---------------------------------------------------------------------------
// Closed forms for the three-level system (require the closed-form regime:
// delta1 = delta2 = 0, gammaV = 0, deltaV != 0).
// ---------------------------------------------------------------------------

// Effective two-photon Rabi frequency Omega_2p = Omega^2 / Delta_V
double two_photon_rabi(const LambdaParams& p);

// kappa = (1/2) sqrt(Gamma^2/4 - 16 Omega_2p^2), complex so the underdamped and
// overdamped branches share one code path
Complex transient_kappa(const LambdaParams& p);

struct RelaxationRate {
    double full{0.0};   // exact rate of the final slow relaxation
    double simple{0.0}; // leading-order value 3 Gamma Omega^2 / (2 Delta_V^2)
};
RelaxationRate relaxation_rate(const LambdaParams& p);

struct SteadyElements {
    double rho_vv{0.0};
    double rho22{0.0};
    Complex rho12;
    Complex rho1v;
    Complex rho2v;
};
SteadyElements steady_elements(const LambdaParams& p);

// Quasi-stationary values reached after the fast two-level dynamics has damped
// out, before the slow virtual population builds up.
struct MetastableElements {
    double rho22{0.0};
    Complex rho12;
};
MetastableElements metastable_elements(const LambdaParams& p);

// Element trajectories rho_x(t) = rho_x^ss (1 + c_x exp(-Gamma_c t)) valid after
// the fast transient; rho_vv(0) = 0 exactly.
struct ElementsAtTime {
    double rho_vv{0.0};
    double rho22{0.0};
    Complex rho12;
    Complex rho1v;
    Complex rho2v;
};
ElementsAtTime analytic_elements(const LambdaParams& p, double t);

// Damped two-photon Rabi transient of the effective two-level system with the
// virtual population frozen at 0, starting from |1>.
struct TwoLevelValues {
    double rho22{0.0};
    Complex rho12;
};
TwoLevelValues two_level_transient(const LambdaParams& p, double t);

// Right-hand sides of the effective two-level equations with rho_vv treated as
// a frozen parameter. simplified = true drops the O(Gamma/Delta_V) corrections.
struct FirstEliminationRhs {
    Complex drho12;
    double drho22{0.0};
};
FirstEliminationRhs first_elimination_rhs(const LambdaParams& p, Complex rho12,
                                          double rho22, double rho_vv,
                                          bool simplified = false);

// Quasi-steady (rho22, rho12) at frozen rho_vv: solves the 3x3 affine system and
// cross-checks the closed-form solution to 1e-10. Requires gamma > 0.
struct QuasiSteadyElements {
    double rho22{0.0};
    Complex rho12;
};
QuasiSteadyElements quasi_steady_real(const LambdaParams& p, double rho_vv);

// Formation time of the entangled dark state in the chiral model,
// tau = 24 Omega^2 / [Gamma (4 delta^2 + dgamma^2)]. Throws std::domain_error at
// delta = dgamma = 0, where the metastable state becomes the steady state.
double chiral_relaxation_time(const ChiralParams& cp);

// ---------------------------------------------------------------------------
// Generic numerical two-step elimination.
// ---------------------------------------------------------------------------

// One real degree of freedom of a Hermitian unit-trace matrix.
struct RealCoordinate {
    enum class Kind { Population, CoherenceRe, CoherenceIm };
    Kind kind{Kind::Population};
    int i{0};
    int j{0}; // == i for populations, i < j for coherences
};

// Real affine form x_dot = G x + c of a Lindblad generator, over the free real
// parameters x (populations except the reference one, plus Re/Im of the upper
// coherences). The reference population carries the trace constraint.
struct RealAffineForm {
    RealMatrix generator;
    RealVector source;
    std::vector<RealCoordinate> coords;
    int dim{0};
    int reference{0};

    int size() const { return static_cast<int>(coords.size()); }
    int index_of(RealCoordinate::Kind kind, int i, int j) const; // throws if absent
    RealVector coords_of(const ComplexMatrix& rho) const;
    ComplexMatrix density_of(const RealVector& x) const;
};

RealAffineForm real_affine_form(const LindbladModel& model, int reference = 0);

// Disjoint index sets covering all free coordinates. eliminated may be empty,
// in which case the reduction degenerates to single-step adiabatic elimination.
struct Partition {
    std::vector<int> slow;
    std::vector<int> fast;
    std::vector<int> eliminated;
};

// Standard partitions: virtual-state coherences eliminated first, the slow
// variable being the virtual (resp. antisymmetric-state) population.
Partition lambda_partition(const RealAffineForm& form);
Partition chiral_partition(const RealAffineForm& form);

// x_dependent = coeff * x_independent + offset
struct AffineMap {
    RealMatrix coeff;
    RealVector offset;

    RealVector operator()(const RealVector& x) const { return coeff * x + offset; }
};

struct Reduction {
    RealMatrix rate_matrix;       // R with x_slow_dot = R x_slow + s
    RealVector source;            // s
    RealVector fixed_point;       // -R^{-1} s
    AffineMap eliminated_of_rest; // x_E as a map of stacked (x_F, x_S)
    AffineMap fast_of_slow;       // quasi-steady x_F(x_S)
    Partition partition;

    // Relaxation rates |Re eig(R)|, ascending.
    std::vector<double> rates() const;

    // Full density matrix with fast and eliminated variables at their
    // quasi-steady values for the given slow coordinates.
    ComplexMatrix reconstruct(const RealAffineForm& form, const RealVector& x_slow) const;
};

Reduction numeric_hae(const RealAffineForm& form, const Partition& partition);

} // namespace metastab
