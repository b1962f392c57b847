// algebra.hpp — Dense complex matrix kernels: Kronecker products, eigendecompositions, affine solves

#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace metastab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Short %g rendering for diagnostics; std::to_string loses small magnitudes.
std::string format_number(double v);

// Eigenpairs (lambda_k, v_k); eig() guarantees ||A v - lambda v|| <= tol * ||A|| per pair.
struct ComplexSpectrum {
    ComplexVector eigenvalues;
    ComplexMatrix eigenvectors; // columns pair with eigenvalues
};

bool finite_entries(const ComplexMatrix& a);

// |i><j| in a dim-dimensional space
ComplexMatrix basis_op(int dim, int i, int j);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& a);

// Column-stacking vectorization: vec(A rho B) = kron(B^T, A) vec(rho)
ComplexVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexVector& v, int dim);

// Full eigendecomposition of a square matrix; throws when any residual
// ||A v - lambda v|| exceeds tol * ||A||.
ComplexSpectrum eig(const ComplexMatrix& a, double tol = 1e-10);

// Solve a*x + b = 0, i.e. x = -a^{-1} b, with one mixed-precision refinement
// pass. Throws when the condition number estimate exceeds cond_bound.
ComplexVector solve_affine(const ComplexMatrix& a, const ComplexVector& b,
                           double cond_bound = 1e12);

// Real counterpart of solve_affine, used by the elimination machinery.
RealVector solve_affine_real(const RealMatrix& a, const RealVector& b,
                             double cond_bound = 1e12);

// Solve a*X = rhs for a matrix right-hand side; same conditioning contract.
RealMatrix solve_linear_real(const RealMatrix& a, const RealMatrix& rhs,
                             double cond_bound = 1e12);

} // namespace metastab
