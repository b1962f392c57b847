// entanglement.cpp — Two-qubit concurrence: spin-flip formula, X-structure
// closed form, metastable value and optimal drive

#include "metastab/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace metastab {

namespace {

constexpr double kEigenvalueClip = -1e-12;

// sigma_y (x) sigma_y in the product basis {gg, ge, eg, ee}
ComplexMatrix spin_flip_matrix()
{
    ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

} // namespace

double concurrence(const DensityMatrix& rho)
{
    if (rho.dim() != 4) {
        throw std::invalid_argument("concurrence: expected a two-qubit (4x4) state");
    }

    const ComplexMatrix yy = spin_flip_matrix();
    const ComplexMatrix rho_tilde = yy * rho.matrix.conjugate() * yy;
    const ComplexMatrix product = rho.matrix * rho_tilde;

    // Eigenvalues of rho rho~ are real and non-negative for physical states;
    // roundoff can push them slightly negative or complex.
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(product, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("concurrence: eigenvalue computation failed");
    }

    std::array<double, 4> mu{};
    for (Eigen::Index k = 0; k < 4; ++k) {
        const Complex lambda = solver.eigenvalues()(k);
        if (std::abs(lambda.imag()) > 1e-8 || lambda.real() < kEigenvalueClip) {
            throw std::runtime_error("concurrence: spin-flip spectrum is not non-negative real");
        }
        mu[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, lambda.real()));
    }
    std::sort(mu.begin(), mu.end(), std::greater<double>());
    return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

double concurrence_x_structure(double rho11, double rho22, double rho_vv, Complex rho12)
{
    if (!std::isfinite(rho11) || !std::isfinite(rho22) || !std::isfinite(rho_vv) ||
        !std::isfinite(rho12.real()) || !std::isfinite(rho12.imag())) {
        throw std::invalid_argument("concurrence_x_structure: entries must be finite");
    }
    if (std::abs(rho11 + rho22 + rho_vv - 1.0) > 1e-10) {
        throw std::invalid_argument("concurrence_x_structure: populations must sum to 1");
    }
    const double floor = -1e-12;
    if (rho11 < floor || rho22 < floor || rho_vv < floor ||
        rho11 * rho22 - std::norm(rho12) < floor) {
        throw std::invalid_argument("concurrence_x_structure: state is not positive semidefinite");
    }

    // Spin-flip singular values of rho11 |gg><gg| + rho_vv |S><S| + rho22 |ee><ee|
    // + (rho12 |gg><ee| + h.c.): the gg/ee block gives |sqrt(rho11 rho22) +- |rho12||,
    // the symmetric Bell state reproduces itself with weight rho_vv.
    const double cross = std::sqrt(std::max(0.0, rho11) * std::max(0.0, rho22));
    const double coherence = std::abs(rho12);
    std::array<double, 4> mu = {std::abs(cross + coherence), std::abs(cross - coherence),
                                std::max(0.0, rho_vv), 0.0};
    std::sort(mu.begin(), mu.end(), std::greater<double>());
    return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

double metastable_concurrence(double gamma, double omega2p)
{
    if (!std::isfinite(gamma) || !std::isfinite(omega2p) || gamma < 0.0) {
        throw std::invalid_argument("metastable_concurrence: need finite parameters, gamma >= 0");
    }
    if (gamma == 0.0 && omega2p == 0.0) {
        throw std::invalid_argument("metastable_concurrence: gamma and omega2p cannot both vanish");
    }

    const double g = gamma;
    const double o = std::abs(omega2p);
    const double root = g * std::hypot(g, 2.0 * o); // g sqrt(g^2 + 4 o^2)
    const double a_plus = 2.0 * o * o + g * g + root;
    const double a_minus = 2.0 * o * o + g * g - root;
    // sqrt(a_plus) - sqrt(a_minus), evaluated via the conjugate quotient so the
    // near-cancellation at g >> o costs no precision
    const double diff = (a_plus - a_minus) / (std::sqrt(a_plus) + std::sqrt(std::max(0.0, a_minus)));
    return 2.0 * std::sqrt(2.0) * o / (g * g + 8.0 * o * o) * diff;
}

double optimal_drive(double gamma)
{
    if (!std::isfinite(gamma) || !(gamma > 0.0)) {
        throw std::invalid_argument("optimal_drive: gamma must be positive");
    }
    return gamma / (2.0 * std::sqrt(2.0));
}

} // namespace metastab
