// algebra.cpp — Implementation of the dense complex kernels

#include "metastab/algebra.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace metastab {

namespace {

using LongComplex = std::complex<long double>;
using LongComplexMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LongComplexVector = Eigen::Matrix<LongComplex, Eigen::Dynamic, 1>;

void require_square(const ComplexMatrix& a, const char* who)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

} // namespace

std::string format_number(double v)
{
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

bool finite_entries(const ComplexMatrix& a)
{
    return a.allFinite();
}

ComplexMatrix basis_op(int dim, int i, int j)
{
    if (dim <= 0 || i < 0 || j < 0 || i >= dim || j >= dim) {
        throw std::invalid_argument("basis_op: indices out of range");
    }
    ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
    op(i, j) = 1.0;
    return op;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a)
{
    return a.adjoint();
}

ComplexVector vec(const ComplexMatrix& a)
{
    ComplexVector v(a.rows() * a.cols());
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            v(idx++) = a(i, j);
        }
    }
    return v;
}

ComplexMatrix unvec(const ComplexVector& v, int dim)
{
    if (static_cast<Eigen::Index>(dim) * dim != v.size()) {
        throw std::invalid_argument("unvec: vector length " + std::to_string(v.size()) +
                                    " is not " + std::to_string(dim) + "^2");
    }
    ComplexMatrix a(dim, dim);
    Eigen::Index idx = 0;
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            a(i, j) = v(idx++);
        }
    }
    return a;
}

ComplexSpectrum eig(const ComplexMatrix& a, double tol)
{
    require_square(a, "eig");
    if (!finite_entries(a)) {
        throw std::invalid_argument("eig: matrix contains non-finite entries");
    }

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig: eigensolver failed to converge");
    }

    ComplexSpectrum spectrum{solver.eigenvalues(), solver.eigenvectors()};

    const double scale = a.norm();
    const double bound = tol * (scale > 0.0 ? scale : 1.0);
    for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
        const double residual =
            (a * spectrum.eigenvectors.col(k) -
             spectrum.eigenvalues(k) * spectrum.eigenvectors.col(k)).norm();
        if (!(residual <= bound)) {
            throw std::runtime_error("eig: eigenpair " + std::to_string(k) +
                                     " residual " + format_number(residual) +
                                     " exceeds tolerance");
        }
    }
    return spectrum;
}

ComplexVector solve_affine(const ComplexMatrix& a, const ComplexVector& b, double cond_bound)
{
    require_square(a, "solve_affine");
    if (a.rows() != b.size()) {
        throw std::invalid_argument("solve_affine: dimension mismatch");
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > cond_bound) {
        throw std::runtime_error("solve_affine: matrix is singular or ill-conditioned (cond ~ " +
                                 format_number(smin > 0.0 ? smax / smin : INFINITY) + ")");
    }

    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    ComplexVector x = lu.solve(-b);

    // One refinement pass with the residual accumulated in extended precision
    const LongComplexMatrix al = a.cast<LongComplex>();
    const LongComplexVector residual = al * x.cast<LongComplex>() + b.cast<LongComplex>();
    x -= lu.solve(residual.cast<Complex>());

    return x;
}

RealVector solve_affine_real(const RealMatrix& a, const RealVector& b, double cond_bound)
{
    const RealMatrix rhs = -b;
    return solve_linear_real(a, rhs, cond_bound).col(0);
}

RealMatrix solve_linear_real(const RealMatrix& a, const RealMatrix& rhs, double cond_bound)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("solve_linear_real: matrix must be square");
    }
    if (a.rows() != rhs.rows()) {
        throw std::invalid_argument("solve_linear_real: dimension mismatch");
    }
    if (a.rows() == 0) {
        return RealMatrix::Zero(0, rhs.cols());
    }

    Eigen::JacobiSVD<RealMatrix> svd(a);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > cond_bound) {
        throw std::runtime_error("solve_linear_real: matrix is singular or ill-conditioned (cond ~ " +
                                 format_number(smin > 0.0 ? smax / smin : INFINITY) + ")");
    }

    Eigen::PartialPivLU<RealMatrix> lu(a);
    RealMatrix x = lu.solve(rhs);

    using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const LongMatrix residual =
        a.cast<long double>() * x.cast<long double>() - rhs.cast<long double>();
    x -= lu.solve(residual.cast<double>());

    return x;
}

} // namespace metastab
