// models.cpp — Constructors for the concrete systems and the basis embeddings

#include "metastab/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace metastab {

namespace {

constexpr double kProjectionLossBound = 1e-8; // largest ignorable rho_AA

void validate_lambda_params(const LambdaParams& p)
{
    if (!(p.omega >= 0.0) || !std::isfinite(p.omega)) {
        throw std::invalid_argument("LambdaParams: omega must be finite and non-negative");
    }
    if (!(p.gamma >= 0.0) || !(p.gammaV >= 0.0)) {
        throw std::invalid_argument("LambdaParams: decay rates must be non-negative");
    }
    if (!std::isfinite(p.delta1) || !std::isfinite(p.delta2) || !std::isfinite(p.deltaV) ||
        !std::isfinite(p.gamma) || !std::isfinite(p.gammaV)) {
        throw std::invalid_argument("LambdaParams: parameters must be finite");
    }
}

void validate_chiral_params(const ChiralParams& cp)
{
    if (!(cp.gammaR >= 0.0) || !(cp.gammaL >= 0.0)) {
        throw std::invalid_argument("ChiralParams: directional rates must be non-negative");
    }
    if (cp.gammaR == 0.0 && cp.gammaL == 0.0) {
        throw std::invalid_argument("ChiralParams: gammaR and gammaL must not both be zero");
    }
    if (!std::isfinite(cp.omega) || !std::isfinite(cp.delta) || !std::isfinite(cp.gammaR) ||
        !std::isfinite(cp.gammaL)) {
        throw std::invalid_argument("ChiralParams: parameters must be finite");
    }
}

} // namespace

LindbladModel lambda_model(const LambdaParams& p)
{
    validate_lambda_params(p);

    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = p.delta1;
    h(1, 1) = p.delta2;
    h(2, 2) = p.deltaV;
    h(0, 2) = p.omega; // |1><V|
    h(2, 0) = p.omega;
    h(1, 2) = p.omega; // |2><V|
    h(2, 1) = p.omega;

    LindbladModel model;
    model.hamiltonian = h;
    model.dissipators = {{p.gamma, basis_op(3, 0, 1)},   // |1><2|
                         {p.gammaV, basis_op(3, 0, 2)}}; // |1><V|
    model.basis_labels = {"1", "2", "V"};
    model.validate();
    return model;
}

LindbladModel two_qubit_tpr_model(const LambdaParams& p)
{
    validate_lambda_params(p);

    // Collective basis {gg, S, A, ee}; {gg, S, ee} mirrors {1, V, 2} with the
    // same matrix elements, |A> is fully decoupled.
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    h(0, 0) = p.delta1;
    h(1, 1) = p.deltaV;
    h(2, 2) = p.deltaV;
    h(3, 3) = p.delta2;
    h(0, 1) = p.omega; // |gg><S|
    h(1, 0) = p.omega;
    h(3, 1) = p.omega; // |ee><S|
    h(1, 3) = p.omega;

    LindbladModel model;
    model.hamiltonian = h;
    model.dissipators = {{p.gamma, basis_op(4, 0, 3)},   // two-photon channel |gg><ee|
                         {p.gammaV, basis_op(4, 0, 1)}}; // mapped virtual decay |gg><S|
    model.basis_labels = {"gg", "S", "A", "ee"};
    model.validate();
    return model;
}

LindbladModel chiral_model(const ChiralParams& cp)
{
    validate_chiral_params(cp);

    const double root2_omega = std::sqrt(2.0) * cp.omega;
    const Complex exchange(cp.delta, -0.5 * cp.gamma_diff()); // (delta - i dgamma/2) |A><S|

    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    h(1, 0) = root2_omega; // |S><gg|
    h(0, 1) = root2_omega;
    h(3, 1) = root2_omega; // |ee><S|
    h(1, 3) = root2_omega;
    h(2, 1) = exchange;
    h(1, 2) = std::conj(exchange);

    LindbladModel model;
    model.hamiltonian = h;
    model.dissipators = {
        {cp.gamma_total(), basis_op(4, 0, 1) + basis_op(4, 1, 3)}}; // |gg><S| + |S><ee|
    model.basis_labels = {"gg", "S", "A", "ee"};
    model.validate();
    return model;
}

ComplexMatrix coupled_to_product_matrix()
{
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix u = ComplexMatrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = r; // |S> = (|ge> + |eg>)/sqrt(2)
    u(2, 1) = r;
    u(1, 2) = -r; // |A> = (|eg> - |ge>)/sqrt(2)
    u(2, 2) = r;
    u(3, 3) = 1.0;
    return u;
}

DensityMatrix coupled_to_product(const DensityMatrix& rho_coupled)
{
    if (rho_coupled.dim() != 4) {
        throw std::invalid_argument("coupled_to_product: expected a 4-level state");
    }
    const ComplexMatrix u = coupled_to_product_matrix();
    return DensityMatrix{u * rho_coupled.matrix * u.adjoint()};
}

DensityMatrix project_to_lambda(const DensityMatrix& rho4)
{
    if (rho4.dim() != 4) {
        throw std::invalid_argument("project_to_lambda: expected a 4-level state");
    }
    const double rho_aa = rho4.matrix(2, 2).real();
    if (!(rho_aa <= kProjectionLossBound)) {
        throw std::invalid_argument("project_to_lambda: antisymmetric population " +
                                    format_number(rho_aa) + " is not negligible");
    }

    // {gg, S, ee} -> {1, V, 2}, i.e. rows/cols (0, 3, 1) of the 4-level state
    const int src[3] = {0, 3, 1};
    ComplexMatrix out(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out(i, j) = rho4.matrix(src[i], src[j]);
        }
    }
    out /= out.trace().real();
    return DensityMatrix::checked(out);
}

} // namespace metastab
