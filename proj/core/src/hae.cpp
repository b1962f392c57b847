// hae.cpp — Closed-form elimination results for the three-level system and the
// generic numerical two-step reduction

#include "metastab/hae.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace metastab {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_closed_form_regime(const LambdaParams& p, const char* who)
{
    if (!std::isfinite(p.deltaV) || !std::isfinite(p.omega) || !std::isfinite(p.gamma)) {
        throw std::invalid_argument(std::string(who) + ": parameters must be finite");
    }
    if (!(p.omega >= 0.0) || !(p.gamma >= 0.0)) {
        throw std::invalid_argument(std::string(who) + ": omega and gamma must be non-negative");
    }
    if (p.delta1 != 0.0 || p.delta2 != 0.0 || p.gammaV != 0.0) {
        throw std::invalid_argument(std::string(who) +
                                    ": closed forms require delta1 = delta2 = 0 and gammaV = 0");
    }
    if (p.deltaV == 0.0) {
        throw std::invalid_argument(std::string(who) +
                                    ": closed forms require a nonzero virtual-state detuning");
    }
}

// Coefficients of the effective two-level equations after eliminating the
// virtual coherences, with rho_vv held frozen:
//   d rho12/dt = a12 rho12 + b22 rho22 + bvv rho_vv + b0
//   d rho22/dt = c22 rho22 + 2 Re(c12 rho12) + cvv rho_vv
struct FirstEliminationCoeffs {
    Complex a12, b22, bvv, b0, c12;
    double c22, cvv;
};

FirstEliminationCoeffs first_elimination_coeffs(const LambdaParams& p)
{
    const double om2 = p.omega * p.omega;
    const double o2p = om2 / p.deltaV;
    const Complex denom(p.gamma, 2.0 * p.deltaV);
    const double dsq = p.gamma * p.gamma + 4.0 * p.deltaV * p.deltaV;

    FirstEliminationCoeffs c;
    c.a12 = -0.5 * p.gamma - kI * o2p - 2.0 * om2 / denom;
    c.b22 = kI * o2p - 2.0 * om2 / denom;
    c.bvv = 2.0 * kI * o2p + 2.0 * om2 / denom;
    c.b0 = -kI * o2p;
    c.c12 = -2.0 * om2 / denom;
    c.c22 = -p.gamma - 4.0 * p.gamma * om2 / dsq;
    c.cvv = 4.0 * p.gamma * om2 / dsq;
    return c;
}

// Shared denominator of the slow-relaxation closed forms
double slow_denominator(const LambdaParams& p)
{
    const double g2 = p.gamma * p.gamma;
    const double d2 = p.deltaV * p.deltaV;
    const double o2 = p.omega * p.omega;
    const double o4 = o2 * o2;
    return g2 * g2 * d2 + 32.0 * o4 * (d2 + o2) + 4.0 * g2 * (d2 * d2 + 3.0 * d2 * o2 + o4);
}

Complex sinhc(Complex z)
{
    if (std::abs(z) < 1e-4) {
        const Complex z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

RealMatrix submatrix(const RealMatrix& a, const std::vector<int>& rows,
                     const std::vector<int>& cols)
{
    RealMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                a(rows[i], cols[j]);
        }
    }
    return out;
}

RealVector subvector(const RealVector& v, const std::vector<int>& idx)
{
    RealVector out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v(idx[i]);
    }
    return out;
}

void validate_partition(const RealAffineForm& form, const Partition& partition)
{
    if (partition.slow.empty()) {
        throw std::invalid_argument("numeric_hae: slow set must be nonempty");
    }
    const int n = form.size();
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    auto mark = [&](const std::vector<int>& idx, const char* name) {
        for (int k : idx) {
            if (k < 0 || k >= n) {
                throw std::invalid_argument(std::string("numeric_hae: ") + name +
                                            " index out of range");
            }
            if (seen[static_cast<std::size_t>(k)]++) {
                throw std::invalid_argument("numeric_hae: partition sets are not disjoint");
            }
        }
    };
    mark(partition.slow, "slow");
    mark(partition.fast, "fast");
    mark(partition.eliminated, "eliminated");
    for (int k = 0; k < n; ++k) {
        if (!seen[static_cast<std::size_t>(k)]) {
            throw std::invalid_argument("numeric_hae: partition does not cover coordinate " +
                                        std::to_string(k));
        }
    }
}

// One elimination step: set x_drop' = 0, solve for x_drop as an affine map of
// x_keep, and return the reduced generator on x_keep along with that map.
struct EliminationStep {
    RealMatrix reduced_generator;
    RealVector reduced_source;
    AffineMap map; // x_drop = coeff * x_keep + offset
};

EliminationStep eliminate(const RealMatrix& generator, const RealVector& source,
                          const std::vector<int>& drop, const std::vector<int>& keep,
                          const char* step_name)
{
    const RealMatrix g_dd = submatrix(generator, drop, drop);
    const RealMatrix g_dk = submatrix(generator, drop, keep);
    const RealMatrix g_kd = submatrix(generator, keep, drop);
    const RealMatrix g_kk = submatrix(generator, keep, keep);
    const RealVector c_d = subvector(source, drop);
    const RealVector c_k = subvector(source, keep);

    EliminationStep step;
    if (drop.empty()) {
        step.reduced_generator = g_kk;
        step.reduced_source = c_k;
        step.map.coeff = RealMatrix::Zero(0, static_cast<Eigen::Index>(keep.size()));
        step.map.offset = RealVector::Zero(0);
        return step;
    }

    RealMatrix rhs(g_dd.rows(), g_dk.cols() + 1);
    rhs.leftCols(g_dk.cols()) = g_dk;
    rhs.col(g_dk.cols()) = c_d;
    RealMatrix solved;
    try {
        solved = solve_linear_real(g_dd, rhs); // g_dd^{-1} [g_dk, c_d]
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("numeric_hae: ") + step_name +
                                 " block is singular: " + e.what());
    }

    step.map.coeff = -solved.leftCols(g_dk.cols());
    step.map.offset = -solved.col(g_dk.cols());
    step.reduced_generator = g_kk + g_kd * step.map.coeff;
    step.reduced_source = c_k + g_kd * step.map.offset;
    return step;
}

} // namespace

double two_photon_rabi(const LambdaParams& p)
{
    require_closed_form_regime(p, "two_photon_rabi");
    return p.omega * p.omega / p.deltaV;
}

Complex transient_kappa(const LambdaParams& p)
{
    require_closed_form_regime(p, "transient_kappa");
    const double o2p = two_photon_rabi(p);
    return 0.5 * std::sqrt(Complex(0.25 * p.gamma * p.gamma - 16.0 * o2p * o2p, 0.0));
}

RelaxationRate relaxation_rate(const LambdaParams& p)
{
    require_closed_form_regime(p, "relaxation_rate");
    RelaxationRate rate;
    rate.simple = 1.5 * p.gamma * p.omega * p.omega / (p.deltaV * p.deltaV);
    if (p.gamma == 0.0 || p.omega == 0.0) {
        rate.full = 0.0;
        return rate;
    }
    const double g = p.gamma;
    const double d2 = p.deltaV * p.deltaV;
    const double o2 = p.omega * p.omega;
    const double o6 = o2 * o2 * o2;
    rate.full = 4.0 * (12.0 * g * o6 + g * g * g * o2 * (d2 + 2.0 * o2)) / slow_denominator(p);
    return rate;
}

SteadyElements steady_elements(const LambdaParams& p)
{
    require_closed_form_regime(p, "steady_elements");
    const double g = p.gamma;
    const double dv = p.deltaV;
    const double o2 = p.omega * p.omega;
    const double o4 = o2 * o2;
    const double denom = g * g * (dv * dv + 2.0 * o2) + 12.0 * o4;

    SteadyElements ss;
    ss.rho_vv = o2 * (g * g + 4.0 * o2) / denom;
    ss.rho22 = 4.0 * o4 / denom;
    ss.rho12 = -2.0 * kI * g * dv * o2 / denom;
    ss.rho1v = g * p.omega * Complex(-g * dv, 2.0 * o2) / denom;
    ss.rho2v = -2.0 * kI * g * o2 * p.omega / denom;
    return ss;
}

MetastableElements metastable_elements(const LambdaParams& p)
{
    require_closed_form_regime(p, "metastable_elements");
    const double o2p = two_photon_rabi(p);
    const double denom = p.gamma * p.gamma + 8.0 * o2p * o2p;
    if (denom == 0.0) {
        return MetastableElements{0.0, Complex(0.0, 0.0)};
    }
    MetastableElements m;
    m.rho22 = 4.0 * o2p * o2p / denom;
    m.rho12 = -2.0 * kI * p.gamma * o2p / denom;
    return m;
}

ElementsAtTime analytic_elements(const LambdaParams& p, double t)
{
    require_closed_form_regime(p, "analytic_elements");
    if (!(t >= 0.0)) {
        throw std::invalid_argument("analytic_elements: t must be non-negative");
    }
    if (!(p.gamma > 0.0)) {
        throw std::invalid_argument("analytic_elements: gamma must be positive (no slow relaxation otherwise)");
    }

    const double g = p.gamma;
    const double dv = p.deltaV;
    const double o2 = p.omega * p.omega;
    const double o4 = o2 * o2;
    const double o6 = o4 * o2;
    const double g2 = g * g;
    const double dv2 = dv * dv;
    const double dprime = slow_denominator(p);
    const double bright = g2 + 4.0 * o2; // recurring (Gamma^2 + 4 Omega^2) factor

    const double c22 = (4.0 * o4 * (g2 + 4.0 * dv2) - g2 * g2 * dv2 + 16.0 * o6) / dprime;
    const Complex c12 = -2.0 * kI * o2 * bright *
                        (2.0 * g * o2 * Complex(g, 4.0 * dv) +
                         g * dv * Complex(g, dv) * Complex(2.0 * dv, g) + 12.0 * o4) /
                        (g * dv * dprime);
    const Complex c1v = 2.0 * o2 * bright *
                        (-2.0 * kI * g * o2 * Complex(g2 + 2.0 * dv2, 6.0 * g * dv) +
                         g2 * dv * (g2 + 4.0 * dv2) + 8.0 * o4 * Complex(3.0 * dv, -2.0 * g)) /
                        (g * Complex(g * dv, -2.0 * o2) * dprime);
    const Complex c2v = -bright *
                        (g2 * dv2 * Complex(g, 2.0 * dv) - 4.0 * o4 * Complex(g, -6.0 * dv) +
                         4.0 * kI * g * dv * o2 * Complex(g, dv)) /
                        (g * dprime);

    const SteadyElements ss = steady_elements(p);
    const double decay = std::exp(-relaxation_rate(p).full * t);

    ElementsAtTime e;
    e.rho_vv = ss.rho_vv * (1.0 - decay);
    e.rho22 = ss.rho22 * (1.0 + c22 * decay);
    e.rho12 = ss.rho12 * (1.0 + c12 * decay);
    e.rho1v = ss.rho1v * (1.0 + c1v * decay);
    e.rho2v = ss.rho2v * (1.0 + c2v * decay);
    return e;
}

TwoLevelValues two_level_transient(const LambdaParams& p, double t)
{
    require_closed_form_regime(p, "two_level_transient");
    if (!(t >= 0.0)) {
        throw std::invalid_argument("two_level_transient: t must be non-negative");
    }

    const double g = p.gamma;
    const double o2p = two_photon_rabi(p);
    const double denom = g * g + 8.0 * o2p * o2p;
    if (denom == 0.0) {
        return TwoLevelValues{0.0, Complex(0.0, 0.0)};
    }

    const Complex kappa = transient_kappa(p);
    const Complex z = kappa * t;
    const Complex ch = std::cosh(z);
    const Complex shc = sinhc(z); // sinh(z)/z, stable through kappa -> 0
    const double envelope = std::exp(-0.75 * g * t);

    const double m22 = 4.0 * o2p * o2p / denom;
    const Complex m12 = -2.0 * kI * g * o2p / denom;

    TwoLevelValues v;
    v.rho22 = m22 * (1.0 - envelope * (ch + 0.75 * g * t * shc)).real();
    // The kappa/Gamma sinh term is written with Gamma cancelled against the
    // prefactor so the Gamma -> 0 limit stays finite.
    const Complex kappa_term = (-2.0 * kI * o2p / denom) * kappa * kappa * t * shc;
    const Complex damping_term = m12 * (3.0 * g * t / 16.0) * shc;
    v.rho12 = m12 * (1.0 - envelope * ch) - envelope * (kappa_term + damping_term);
    return v;
}

FirstEliminationRhs first_elimination_rhs(const LambdaParams& p, Complex rho12, double rho22,
                                          double rho_vv, bool simplified)
{
    require_closed_form_regime(p, "first_elimination_rhs");

    FirstEliminationRhs out;
    if (simplified) {
        const double o2p = two_photon_rabi(p);
        out.drho12 = -0.5 * p.gamma * rho12 + kI * o2p * (2.0 * rho22 + rho_vv - 1.0);
        out.drho22 = -p.gamma * rho22 - 2.0 * o2p * rho12.imag() +
                     (p.gamma * o2p / p.deltaV) * rho_vv;
        return out;
    }

    const FirstEliminationCoeffs c = first_elimination_coeffs(p);
    out.drho12 = c.a12 * rho12 + c.b22 * rho22 + c.bvv * rho_vv + c.b0;
    out.drho22 = c.c22 * rho22 + 2.0 * (c.c12 * rho12).real() + c.cvv * rho_vv;
    return out;
}

QuasiSteadyElements quasi_steady_real(const LambdaParams& p, double rho_vv)
{
    require_closed_form_regime(p, "quasi_steady_real");
    if (!(p.gamma > 0.0)) {
        throw std::invalid_argument(
            "quasi_steady_real: gamma must be positive (the quasi-steady system is singular at gamma = 0)");
    }

    // Stationarity of (rho22, rho21, rho12) at frozen rho_vv: m x + b = 0
    const FirstEliminationCoeffs c = first_elimination_coeffs(p);
    ComplexMatrix m(3, 3);
    ComplexVector b(3);
    m(0, 0) = c.c22;
    m(0, 1) = std::conj(c.c12);
    m(0, 2) = c.c12;
    b(0) = c.cvv * rho_vv;
    m(1, 0) = std::conj(c.b22);
    m(1, 1) = std::conj(c.a12);
    m(1, 2) = 0.0;
    b(1) = std::conj(c.bvv) * rho_vv + std::conj(c.b0);
    m(2, 0) = c.b22;
    m(2, 1) = 0.0;
    m(2, 2) = c.a12;
    b(2) = c.bvv * rho_vv + c.b0;

    const ComplexVector x = solve_affine(m, b);

    // Closed-form cross-check of the same quasi-steady values
    const double g = p.gamma;
    const double dv = p.deltaV;
    const double o2 = p.omega * p.omega;
    const double o4 = o2 * o2;
    const double dv2 = dv * dv;
    const double g2 = g * g;
    const double dprime = slow_denominator(p);
    const double rho22_closed = (16.0 * o4 * (dv2 + o2) +
                                 4.0 * (g2 * dv2 * o2 - 4.0 * o4 * (dv2 + o2)) * rho_vv) /
                                dprime;
    const Complex rho12_closed =
        (2.0 * o2 * (-kI * g * dv * (g2 + 4.0 * dv2) - 2.0 * g * o2 * Complex(g, 4.0 * dv) -
                     8.0 * o4) +
         4.0 * o2 *
             (2.0 * g * o2 * Complex(g, 4.0 * dv) + g * dv * Complex(g, dv) * Complex(2.0 * dv, g) +
              12.0 * o4) *
             rho_vv) /
        dprime;

    const double tol = 1e-10;
    if (std::abs(x(0).real() - rho22_closed) > tol * std::max(1.0, std::abs(rho22_closed)) ||
        std::abs(x(2) - rho12_closed) > tol * std::max(1.0, std::abs(rho12_closed))) {
        throw std::runtime_error(
            "quasi_steady_real: affine solve and closed form disagree beyond 1e-10");
    }

    return QuasiSteadyElements{x(0).real(), x(2)};
}

double chiral_relaxation_time(const ChiralParams& cp)
{
    if (!(cp.gammaR >= 0.0) || !(cp.gammaL >= 0.0) || (cp.gammaR == 0.0 && cp.gammaL == 0.0)) {
        throw std::invalid_argument("chiral_relaxation_time: need non-negative rates, not both zero");
    }
    const double dgamma = cp.gamma_diff();
    if (cp.delta == 0.0 && dgamma == 0.0) {
        throw std::domain_error(
            "chiral_relaxation_time: delta = dgamma = 0 makes the metastable state the steady state (infinite relaxation time)");
    }
    return 24.0 * cp.omega * cp.omega /
           (cp.gamma_total() * (4.0 * cp.delta * cp.delta + dgamma * dgamma));
}

int RealAffineForm::index_of(RealCoordinate::Kind kind, int i, int j) const
{
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const RealCoordinate& c = coords[k];
        if (c.kind == kind && c.i == i && c.j == j) {
            return static_cast<int>(k);
        }
    }
    throw std::out_of_range("RealAffineForm::index_of: no such coordinate");
}

RealVector RealAffineForm::coords_of(const ComplexMatrix& rho) const
{
    if (rho.rows() != dim || rho.cols() != dim) {
        throw std::invalid_argument("RealAffineForm::coords_of: dimension mismatch");
    }
    RealVector x(size());
    for (int k = 0; k < size(); ++k) {
        const RealCoordinate& c = coords[static_cast<std::size_t>(k)];
        switch (c.kind) {
        case RealCoordinate::Kind::Population:
            x(k) = rho(c.i, c.i).real();
            break;
        case RealCoordinate::Kind::CoherenceRe:
            x(k) = rho(c.i, c.j).real();
            break;
        case RealCoordinate::Kind::CoherenceIm:
            x(k) = rho(c.i, c.j).imag();
            break;
        }
    }
    return x;
}

ComplexMatrix RealAffineForm::density_of(const RealVector& x) const
{
    if (x.size() != size()) {
        throw std::invalid_argument("RealAffineForm::density_of: dimension mismatch");
    }
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    double population_sum = 0.0;
    for (int k = 0; k < size(); ++k) {
        const RealCoordinate& c = coords[static_cast<std::size_t>(k)];
        switch (c.kind) {
        case RealCoordinate::Kind::Population:
            rho(c.i, c.i) = x(k);
            population_sum += x(k);
            break;
        case RealCoordinate::Kind::CoherenceRe:
            rho(c.i, c.j) += x(k);
            rho(c.j, c.i) += x(k);
            break;
        case RealCoordinate::Kind::CoherenceIm:
            rho(c.i, c.j) += Complex(0.0, x(k));
            rho(c.j, c.i) += Complex(0.0, -x(k));
            break;
        }
    }
    rho(reference, reference) = 1.0 - population_sum;
    return rho;
}

RealAffineForm real_affine_form(const LindbladModel& model, int reference)
{
    model.validate();
    const int dim = model.dim();
    if (reference < 0 || reference >= dim) {
        throw std::invalid_argument("real_affine_form: reference index out of range");
    }

    RealAffineForm form;
    form.dim = dim;
    form.reference = reference;
    for (int i = 0; i < dim; ++i) {
        if (i != reference) {
            form.coords.push_back({RealCoordinate::Kind::Population, i, i});
        }
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            form.coords.push_back({RealCoordinate::Kind::CoherenceRe, i, j});
            form.coords.push_back({RealCoordinate::Kind::CoherenceIm, i, j});
        }
    }

    const int n = form.size();
    // rho(x) = |ref><ref| + sum_k x_k B_k with Hermitian, trace-free B_k; the
    // generator is linear, so columns of G are the coordinate images of rhs(B_k).
    const ComplexMatrix base = basis_op(dim, reference, reference);
    form.source = form.coords_of(rhs(model, base));
    form.generator = RealMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        const RealCoordinate& c = form.coords[static_cast<std::size_t>(k)];
        ComplexMatrix basis = ComplexMatrix::Zero(dim, dim);
        switch (c.kind) {
        case RealCoordinate::Kind::Population:
            basis(c.i, c.i) = 1.0;
            basis(reference, reference) = -1.0;
            break;
        case RealCoordinate::Kind::CoherenceRe:
            basis(c.i, c.j) = 1.0;
            basis(c.j, c.i) = 1.0;
            break;
        case RealCoordinate::Kind::CoherenceIm:
            basis(c.i, c.j) = Complex(0.0, 1.0);
            basis(c.j, c.i) = Complex(0.0, -1.0);
            break;
        }
        form.generator.col(k) = form.coords_of(rhs(model, basis));
    }
    return form;
}

Partition lambda_partition(const RealAffineForm& form)
{
    if (form.dim != 3 || form.reference != 0) {
        throw std::invalid_argument("lambda_partition: expected a 3-level form with reference 0");
    }
    using K = RealCoordinate::Kind;
    Partition part;
    part.slow = {form.index_of(K::Population, 2, 2)};
    part.eliminated = {form.index_of(K::CoherenceRe, 0, 2), form.index_of(K::CoherenceIm, 0, 2),
                       form.index_of(K::CoherenceRe, 1, 2), form.index_of(K::CoherenceIm, 1, 2)};
    part.fast = {form.index_of(K::Population, 1, 1), form.index_of(K::CoherenceRe, 0, 1),
                 form.index_of(K::CoherenceIm, 0, 1)};
    return part;
}

Partition chiral_partition(const RealAffineForm& form)
{
    if (form.dim != 4 || form.reference != 0) {
        throw std::invalid_argument("chiral_partition: expected a 4-level form with reference 0");
    }
    using K = RealCoordinate::Kind;
    Partition part;
    part.slow = {form.index_of(K::Population, 2, 2)};
    part.eliminated = {form.index_of(K::CoherenceRe, 0, 2), form.index_of(K::CoherenceIm, 0, 2),
                       form.index_of(K::CoherenceRe, 1, 2), form.index_of(K::CoherenceIm, 1, 2),
                       form.index_of(K::CoherenceRe, 2, 3), form.index_of(K::CoherenceIm, 2, 3)};
    part.fast = {form.index_of(K::Population, 1, 1), form.index_of(K::Population, 3, 3),
                 form.index_of(K::CoherenceRe, 0, 1), form.index_of(K::CoherenceIm, 0, 1),
                 form.index_of(K::CoherenceRe, 0, 3), form.index_of(K::CoherenceIm, 0, 3),
                 form.index_of(K::CoherenceRe, 1, 3), form.index_of(K::CoherenceIm, 1, 3)};
    return part;
}

std::vector<double> Reduction::rates() const
{
    const ComplexSpectrum spectrum = eig(rate_matrix.cast<Complex>());
    std::vector<double> out(static_cast<std::size_t>(spectrum.eigenvalues.size()));
    for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
        out[static_cast<std::size_t>(k)] = std::abs(spectrum.eigenvalues(k).real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

ComplexMatrix Reduction::reconstruct(const RealAffineForm& form, const RealVector& x_slow) const
{
    if (x_slow.size() != static_cast<Eigen::Index>(partition.slow.size())) {
        throw std::invalid_argument("Reduction::reconstruct: slow coordinate size mismatch");
    }
    const RealVector x_fast = fast_of_slow(x_slow);
    RealVector rest(x_fast.size() + x_slow.size());
    rest << x_fast, x_slow;
    const RealVector x_elim = eliminated_of_rest(rest);

    RealVector x = RealVector::Zero(form.size());
    for (std::size_t k = 0; k < partition.fast.size(); ++k) {
        x(partition.fast[k]) = x_fast(static_cast<Eigen::Index>(k));
    }
    for (std::size_t k = 0; k < partition.slow.size(); ++k) {
        x(partition.slow[k]) = x_slow(static_cast<Eigen::Index>(k));
    }
    for (std::size_t k = 0; k < partition.eliminated.size(); ++k) {
        x(partition.eliminated[k]) = x_elim(static_cast<Eigen::Index>(k));
    }
    return form.density_of(x);
}

Reduction numeric_hae(const RealAffineForm& form, const Partition& partition)
{
    validate_partition(form, partition);

    // Step 1: adiabatically eliminate x_E at frozen (x_F, x_S)
    std::vector<int> rest = partition.fast;
    rest.insert(rest.end(), partition.slow.begin(), partition.slow.end());
    const EliminationStep first =
        eliminate(form.generator, form.source, partition.eliminated, rest, "first-elimination");

    // Step 2: eliminate x_F from the reduced system at frozen x_S
    std::vector<int> fast_local(partition.fast.size());
    std::vector<int> slow_local(partition.slow.size());
    for (std::size_t k = 0; k < partition.fast.size(); ++k) {
        fast_local[k] = static_cast<int>(k);
    }
    for (std::size_t k = 0; k < partition.slow.size(); ++k) {
        slow_local[k] = static_cast<int>(partition.fast.size() + k);
    }
    const EliminationStep second = eliminate(first.reduced_generator, first.reduced_source,
                                             fast_local, slow_local, "second-elimination");

    Reduction red;
    red.rate_matrix = second.reduced_generator;
    red.source = second.reduced_source;
    red.eliminated_of_rest = first.map;
    red.fast_of_slow = second.map;
    red.partition = partition;
    try {
        red.fixed_point = solve_affine_real(red.rate_matrix, red.source);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(
            std::string("numeric_hae: slow-block fixed point is not unique: ") + e.what());
    }
    return red;
}

} // namespace metastab
