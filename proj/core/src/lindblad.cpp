// lindblad.cpp — Generator assembly, time evolution, steady-state solve

#include "metastab/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace metastab {

namespace {

constexpr double kHermTol = 1e-12;      // Hamiltonian Hermiticity
constexpr double kStateHermTol = 1e-10; // density-matrix Hermiticity
constexpr double kTraceTol = 1e-10;
constexpr double kPositivityFloor = -1e-8;
constexpr double kDriftBound = 1e-8;      // max drift re-enforceable by projection
constexpr double kZeroModeBound = 1e-9;   // |lambda_1| <= bound * ||L||
constexpr double kKernelClampBound = 1e-12; // whole numerical kernel, relative to ||L||
constexpr double kDegeneracyGap = 1e-12;  // unique-steady-state precondition

double min_eigenvalue(const ComplexMatrix& hermitian)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("min_eigenvalue: eigensolver failed");
    }
    return solver.eigenvalues()(0);
}

// Re-enforce exact Hermiticity and unit trace; the caller has verified that the
// drift is within kDriftBound.
ComplexMatrix project_state(const ComplexMatrix& rho)
{
    ComplexMatrix out = 0.5 * (rho + rho.adjoint());
    out /= out.trace().real();
    return out;
}

ComplexMatrix check_output_state(const ComplexMatrix& rho, double t)
{
    const double trace_drift = std::abs(rho.trace() - Complex(1.0, 0.0));
    const double herm_drift = (rho - rho.adjoint()).norm();
    const double drift = std::max(trace_drift, herm_drift);
    if (!(drift < kDriftBound)) {
        throw std::runtime_error("evolve: invariant drift " + format_number(drift) +
                                 " at t = " + format_number(t) +
                                 " exceeds projection bound (stiffness misconfiguration?)");
    }
    ComplexMatrix projected = project_state(rho);
    const double min_eig = min_eigenvalue(projected);
    if (!(min_eig >= kPositivityFloor)) {
        throw std::runtime_error("evolve: positivity violation (min eigenvalue " +
                                 format_number(min_eig) + ") at t = " + format_number(t));
    }
    return projected;
}

void validate_times(const std::vector<double>& times)
{
    if (times.empty()) {
        throw std::invalid_argument("evolve: time grid is empty");
    }
    if (!(times.front() >= 0.0)) {
        throw std::invalid_argument("evolve: time points must be non-negative");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k])) {
            throw std::invalid_argument("evolve: non-finite time point");
        }
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw std::invalid_argument("evolve: time grid must be strictly increasing");
        }
    }
}

// Eigendecomposition of L with the zero mode clamped to exactly 0 and tiny
// positive real parts (eigensolver noise) flattened onto the imaginary axis.
struct ClampedSpectrum {
    ComplexSpectrum spectrum;
    Eigen::PartialPivLU<ComplexMatrix> vectors_lu;
};

ClampedSpectrum clamped_liouvillian_eig(const ComplexMatrix& liouvillian)
{
    ClampedSpectrum out{eig(liouvillian), {}};
    const double scale = liouvillian.norm();
    const double bound = kZeroModeBound * (scale > 0.0 ? scale : 1.0);

    Eigen::Index zero_index = 0;
    double zero_abs = std::abs(out.spectrum.eigenvalues(0));
    for (Eigen::Index k = 1; k < out.spectrum.eigenvalues.size(); ++k) {
        const double a = std::abs(out.spectrum.eigenvalues(k));
        if (a < zero_abs) {
            zero_abs = a;
            zero_index = k;
        }
    }
    if (!(zero_abs <= bound)) {
        throw std::runtime_error("liouvillian eigendecomposition: smallest eigenvalue magnitude " +
                                 format_number(zero_abs) + " is not a numerical zero");
    }
    out.spectrum.eigenvalues(zero_index) = 0.0;

    // A degenerate steady manifold (e.g. a decoupled level) produces further
    // eigenvalues at roundoff scale; clamp them too so no spurious slow
    // rotation or decay accumulates over long propagation times. The same
    // applies to roundoff imaginary parts on real slow eigenvalues: a phase
    // error Im(lambda) * t breaks Hermiticity once t is large. The clamp
    // bound sits well below any physical rate or frequency handled here.
    const double kernel_bound = kKernelClampBound * (scale > 0.0 ? scale : 1.0);
    for (Eigen::Index k = 0; k < out.spectrum.eigenvalues.size(); ++k) {
        Complex& ev = out.spectrum.eigenvalues(k);
        if (k != zero_index && std::abs(ev) <= kernel_bound) {
            ev = 0.0;
        } else if (ev.imag() != 0.0 && std::abs(ev.imag()) <= kernel_bound) {
            ev = Complex(ev.real(), 0.0);
        }
    }

    for (Eigen::Index k = 0; k < out.spectrum.eigenvalues.size(); ++k) {
        const double re = out.spectrum.eigenvalues(k).real();
        if (re > 0.0) {
            if (re > bound) {
                throw std::runtime_error("liouvillian eigendecomposition: growing mode Re lambda = " +
                                         format_number(re));
            }
            out.spectrum.eigenvalues(k) = Complex(0.0, out.spectrum.eigenvalues(k).imag());
        }
    }

    // A real-eigenvalue cluster (the clamped kernel, or an isolated real decay
    // mode) spans an adjoint-closed invariant subspace and therefore admits a
    // basis of Hermitian matrices. The raw eigenvectors mix in anti-Hermitian
    // noise of order eps * ||L|| / gap whose t = 0 cancellation breaks as
    // modes decay at different rates, so re-base each such cluster onto
    // Hermitian (and, off the kernel, traceless) matrices; then trace and
    // Hermiticity stay static under propagation. Clusters containing
    // oscillatory modes are left alone.
    const Eigen::Index n = out.spectrum.eigenvalues.size();
    const int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(liouvillian.rows()))));
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    for (Eigen::Index seed = 0; seed < n; ++seed) {
        if (visited[static_cast<std::size_t>(seed)]) {
            continue;
        }
        std::vector<Eigen::Index> cluster{seed};
        visited[static_cast<std::size_t>(seed)] = 1;
        for (std::size_t head = 0; head < cluster.size(); ++head) {
            const Complex anchor = out.spectrum.eigenvalues(cluster[head]);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (!visited[static_cast<std::size_t>(j)] &&
                    std::abs(out.spectrum.eigenvalues(j) - anchor) <= kernel_bound) {
                    visited[static_cast<std::size_t>(j)] = 1;
                    cluster.push_back(j);
                }
            }
        }
        bool all_real = true;
        bool is_kernel = true;
        for (const Eigen::Index j : cluster) {
            all_real = all_real && out.spectrum.eigenvalues(j).imag() == 0.0;
            is_kernel = is_kernel && out.spectrum.eigenvalues(j) == Complex(0.0, 0.0);
        }
        if (!all_real) {
            continue;
        }
        std::vector<ComplexVector> candidates;
        candidates.reserve(2 * cluster.size());
        for (const Eigen::Index j : cluster) {
            const ComplexMatrix m = unvec(out.spectrum.eigenvectors.col(j), dim);
            ComplexMatrix herm = 0.5 * (m + m.adjoint());
            ComplexMatrix anti = Complex(0.0, 0.5) * (m - m.adjoint());
            if (!is_kernel) {
                herm -= (herm.trace() / static_cast<double>(dim)) * ComplexMatrix::Identity(dim, dim);
                anti -= (anti.trace() / static_cast<double>(dim)) * ComplexMatrix::Identity(dim, dim);
            }
            candidates.push_back(vec(herm));
            candidates.push_back(vec(anti));
        }
        // Gram-Schmidt over the real inner product Re<a, b>, so the output
        // stays a real combination of Hermitian matrices.
        std::vector<ComplexVector> basis;
        for (ComplexVector& cand : candidates) {
            if (basis.size() == cluster.size()) {
                break;
            }
            for (const ComplexVector& b : basis) {
                cand -= b.dot(cand).real() * b;
            }
            const double norm = cand.norm();
            if (norm > 1e-6) {
                basis.push_back(cand / norm);
            }
        }
        if (basis.size() == cluster.size()) {
            for (std::size_t j = 0; j < cluster.size(); ++j) {
                out.spectrum.eigenvectors.col(cluster[j]) = basis[j];
            }
        }
    }

    out.vectors_lu.compute(out.spectrum.eigenvectors);
    return out;
}

EvolutionResult evolve_spectral(const LindbladModel& model, const DensityMatrix& rho0,
                                const std::vector<double>& times)
{
    const int dim = model.dim();
    const ComplexMatrix liouvillian = build_liouvillian(model);
    const ClampedSpectrum clamped = clamped_liouvillian_eig(liouvillian);
    const ComplexVector coeffs = clamped.vectors_lu.solve(vec(rho0.matrix));

    EvolutionResult result;
    result.times = times;
    result.states.reserve(times.size());
    ComplexVector modes(coeffs.size());
    for (double t : times) {
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            modes(k) = std::exp(clamped.spectrum.eigenvalues(k) * t) * coeffs(k);
        }
        const ComplexMatrix rho = unvec(clamped.spectrum.eigenvectors * modes, dim);
        result.states.push_back(DensityMatrix{check_output_state(rho, t)});
    }
    return result;
}

// Dormand-Prince 5(4) embedded pair
struct Dp45Tableau {
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                            c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0,
                            e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                            e4 = 125.0 / 192.0 - 393.0 / 640.0,
                            e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                            e6 = 11.0 / 84.0 - 187.0 / 2100.0,
                            e7 = -1.0 / 40.0;
};

EvolutionResult evolve_adaptive_rk(const LindbladModel& model, const DensityMatrix& rho0,
                                   const std::vector<double>& times)
{
    constexpr double rtol = 1e-10;
    constexpr double atol = 1e-13;

    const int dim = model.dim();
    const ComplexMatrix liouvillian = build_liouvillian(model);
    const auto f = [&liouvillian](const ComplexVector& y) -> ComplexVector {
        return liouvillian * y;
    };

    EvolutionResult result;
    result.times = times;
    result.states.reserve(times.size());

    ComplexVector y = vec(rho0.matrix);
    double t = 0.0;

    const double lnorm = std::max(1.0, liouvillian.norm());
    double h = 0.1 / lnorm;
    if (times.back() > 0.0) {
        h = std::min(h, times.back());
    }
    ComplexVector k1 = f(y); // FSAL: k1 always holds f(y)

    using T = Dp45Tableau;
    for (std::size_t point = 0; point < times.size(); ++point) {
        const double t_target = times[point];
        while (t < t_target) {
            if (!(h >= 1e-14 * std::max(1.0, std::abs(t)))) {
                throw std::runtime_error("evolve: integrator step size underflow at t = " +
                                         format_number(t));
            }
            const double step = std::min(h, t_target - t);
            const ComplexVector k2 = f(y + step * (T::a21 * k1));
            const ComplexVector k3 = f(y + step * (T::a31 * k1 + T::a32 * k2));
            const ComplexVector k4 = f(y + step * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
            const ComplexVector k5 =
                f(y + step * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
            const ComplexVector k6 = f(y + step * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                                                   T::a64 * k4 + T::a65 * k5));
            const ComplexVector y_new =
                y + step * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
            const ComplexVector k7 = f(y_new);
            const ComplexVector err_vec = step * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 +
                                                  T::e5 * k5 + T::e6 * k6 + T::e7 * k7);

            double err = 0.0;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double scale =
                    atol + rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
                err += std::norm(err_vec(i) / scale);
            }
            err = std::sqrt(err / static_cast<double>(y.size()));

            if (err <= 1.0) {
                t += step;
                y = y_new;
                k1 = k7;
            }
            const double factor =
                err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = step * std::min(5.0, std::max(0.2, factor));
        }
        result.states.push_back(DensityMatrix{check_output_state(unvec(y, dim), t)});
    }
    return result;
}

} // namespace

void LindbladModel::validate() const
{
    if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0) {
        throw std::invalid_argument("LindbladModel: hamiltonian must be square and non-empty");
    }
    if (!finite_entries(hamiltonian)) {
        throw std::invalid_argument("LindbladModel: hamiltonian has non-finite entries");
    }
    const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
    if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > kHermTol * scale) {
        throw std::invalid_argument("LindbladModel: hamiltonian is not Hermitian within 1e-12");
    }
    for (std::size_t k = 0; k < dissipators.size(); ++k) {
        const Dissipator& d = dissipators[k];
        if (!(d.rate >= 0.0)) {
            throw std::invalid_argument("LindbladModel: dissipator " + std::to_string(k) +
                                        " has negative rate");
        }
        if (d.jump.rows() != hamiltonian.rows() || d.jump.cols() != hamiltonian.cols()) {
            throw std::invalid_argument("LindbladModel: dissipator " + std::to_string(k) +
                                        " dimension mismatch");
        }
        if (!finite_entries(d.jump)) {
            throw std::invalid_argument("LindbladModel: dissipator " + std::to_string(k) +
                                        " has non-finite entries");
        }
    }
    if (!basis_labels.empty() &&
        basis_labels.size() != static_cast<std::size_t>(hamiltonian.rows())) {
        throw std::invalid_argument("LindbladModel: basis_labels size does not match dimension");
    }
}

DensityMatrix DensityMatrix::checked(const ComplexMatrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    }
    if (!finite_entries(m)) {
        throw std::invalid_argument("DensityMatrix: non-finite entries");
    }
    if ((m - m.adjoint()).norm() > kStateHermTol) {
        throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
    }
    if (std::abs(m.trace() - Complex(1.0, 0.0)) > kTraceTol) {
        throw std::invalid_argument("DensityMatrix: trace differs from 1 beyond 1e-10");
    }
    const double min_eig = min_eigenvalue(0.5 * (m + m.adjoint()));
    if (!(min_eig >= kPositivityFloor)) {
        throw std::invalid_argument("DensityMatrix: min eigenvalue " + format_number(min_eig) +
                                    " below positivity floor");
    }
    return DensityMatrix{m};
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi)
{
    const double norm = psi.norm();
    if (!(norm > 0.0) || !psi.allFinite()) {
        throw std::invalid_argument("DensityMatrix::pure: state vector must be nonzero and finite");
    }
    const ComplexVector unit = psi / norm;
    return DensityMatrix{unit * unit.adjoint()};
}

ComplexMatrix build_liouvillian(const LindbladModel& model)
{
    model.validate();
    const int dim = model.dim();
    const ComplexMatrix identity = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix& h = model.hamiltonian;

    ComplexMatrix liouvillian =
        Complex(0.0, -1.0) * (kron(identity, h) - kron(h.transpose(), identity));
    for (const Dissipator& d : model.dissipators) {
        if (d.rate == 0.0) continue;
        const ComplexMatrix odo = d.jump.adjoint() * d.jump;
        liouvillian += (0.5 * d.rate) *
                       (2.0 * kron(d.jump.conjugate(), d.jump) - kron(identity, odo) -
                        kron(odo.transpose(), identity));
    }
    return liouvillian;
}

ComplexMatrix rhs(const LindbladModel& model, const ComplexMatrix& rho)
{
    model.validate();
    if (rho.rows() != model.hamiltonian.rows() || rho.cols() != model.hamiltonian.cols()) {
        throw std::invalid_argument("rhs: state dimension mismatch");
    }
    const ComplexMatrix& h = model.hamiltonian;
    ComplexMatrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
    for (const Dissipator& d : model.dissipators) {
        if (d.rate == 0.0) continue;
        const ComplexMatrix odo = d.jump.adjoint() * d.jump;
        out += (0.5 * d.rate) *
               (2.0 * d.jump * rho * d.jump.adjoint() - odo * rho - rho * odo);
    }
    return out;
}

EvolutionResult evolve(const LindbladModel& model, const DensityMatrix& rho0,
                       const std::vector<double>& times, EvolveMethod method)
{
    model.validate();
    validate_times(times);
    if (rho0.dim() != model.dim()) {
        throw std::invalid_argument("evolve: initial state dimension mismatch");
    }
    switch (method) {
    case EvolveMethod::Spectral:
        return evolve_spectral(model, rho0, times);
    case EvolveMethod::AdaptiveRK:
        return evolve_adaptive_rk(model, rho0, times);
    }
    throw std::invalid_argument("evolve: unknown method");
}

DensityMatrix steady_state(const LindbladModel& model)
{
    const ComplexMatrix liouvillian = build_liouvillian(model);
    const ComplexSpectrum spectrum = eig(liouvillian);

    int zero_count = 0;
    for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
        if (std::abs(spectrum.eigenvalues(k).real()) <= kDegeneracyGap) {
            ++zero_count;
        }
    }
    if (zero_count != 1) {
        throw std::runtime_error("steady_state: expected a unique zero eigenvalue, found " +
                                 std::to_string(zero_count) +
                                 " eigenvalues with |Re lambda| <= 1e-12");
    }

    const int dim = model.dim();
    ComplexMatrix constrained = liouvillian;
    constrained.row(0).setZero();
    for (int i = 0; i < dim; ++i) {
        constrained(0, i * dim + i) = 1.0; // trace functional
    }
    ComplexVector b = ComplexVector::Zero(dim * dim);
    b(0) = -1.0; // constrained * x + b = 0 enforces tr(rho) = 1

    const ComplexVector x = solve_affine(constrained, b);
    ComplexMatrix rho = unvec(x, dim);
    rho = 0.5 * (rho + rho.adjoint());

    const double residual = (liouvillian * vec(rho)).norm();
    if (!(residual <= 1e-10 * std::max(1.0, liouvillian.norm()))) {
        throw std::runtime_error("steady_state: residual " + format_number(residual) +
                                 " exceeds tolerance");
    }
    return DensityMatrix::checked(rho);
}

} // namespace metastab
