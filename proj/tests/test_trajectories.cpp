// test_trajectories.cpp — Quantum-jump sampling and conditional evolution

#include <cmath>

#include "doctest.h"

#include "metastab/lindblad.hpp"
#include "metastab/models.hpp"
#include "metastab/trajectories.hpp"

#include "test_support.hpp"

using namespace metastab;
namespace ts = test_support;

namespace {

// Resonantly driven qubit with decay; basis {g, e}.
LindbladModel driven_qubit(double omega, double gamma)
{
    LindbladModel m;
    m.hamiltonian = ComplexMatrix::Zero(2, 2);
    m.hamiltonian(0, 1) = m.hamiltonian(1, 0) = omega;
    m.dissipators.push_back({gamma, basis_op(2, 0, 1)});
    m.basis_labels = {"g", "e"};
    return m;
}

ComplexVector excited()
{
    ComplexVector psi = ComplexVector::Zero(2);
    psi(1) = 1.0;
    return psi;
}

std::vector<double> linear_grid(double t_end, int n)
{
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) {
        t[k] = t_end * k / (n - 1);
    }
    return t;
}

} // namespace

TEST_CASE("effective Hamiltonian subtracts half the decay operators")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-3;
    p.gammaV = 1e-4;
    const LindbladModel m = lambda_model(p);
    const ComplexMatrix h_eff = effective_hamiltonian(m);
    ComplexMatrix expect = m.hamiltonian;
    expect -= Complex(0.0, 0.5) * (p.gamma * basis_op(3, 1, 1) + p.gammaV * basis_op(3, 2, 2));
    CHECK((h_eff - expect).norm() <= 1e-14);
}

TEST_CASE("stream seeds are the splitmix64 sequence")
{
    // First outputs of splitmix64 seeded with 0.
    CHECK(derive_stream_seed(0, 0) == 0xE220A8397B1DCDAFull);
    CHECK(derive_stream_seed(0, 1) == 0x6E789E6AA1B965F4ull);
    CHECK(derive_stream_seed(0, 2) == 0x06C45D188009454Full);
    // Streams with different bases differ.
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(0, 0));
}

TEST_CASE("trajectories are deterministic given the seed")
{
    const LindbladModel m = driven_qubit(0.3, 0.2);
    const TrajectoryRecord a = sample_trajectory(m, excited(), 40.0, 0.02, 7);
    const TrajectoryRecord b = sample_trajectory(m, excited(), 40.0, 0.02, 7);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        CHECK((a.states[k] - b.states[k]).norm() == 0.0);
    }
    REQUIRE(a.jumps.size() == b.jumps.size());
    for (std::size_t k = 0; k < a.jumps.size(); ++k) {
        CHECK(a.jumps[k].time == b.jumps[k].time);
        CHECK(a.jumps[k].channel == b.jumps[k].channel);
    }

    const TrajectoryRecord c = sample_trajectory(m, excited(), 40.0, 0.02, 8);
    bool differs = c.jumps.size() != a.jumps.size();
    if (!differs && !a.jumps.empty()) {
        differs = c.jumps[0].time != a.jumps[0].time;
    }
    CHECK(differs);
}

TEST_CASE("undriven decay: one jump, exponential waiting time, exact reset")
{
    const double gamma = 0.8;
    LindbladModel m = driven_qubit(0.0, gamma);
    const int n_traj = 400;
    double mean_wait = 0.0;
    for (int k = 0; k < n_traj; ++k) {
        const TrajectoryRecord rec =
            sample_trajectory(m, excited(), 30.0, 0.05, derive_stream_seed(99, k));
        REQUIRE(rec.jumps.size() == 1);
        CHECK(rec.jumps[0].channel == 0);
        // Post-jump state is the ground state exactly.
        CHECK(std::abs(rec.jumps[0].post_state(0)) == doctest::Approx(1.0));
        CHECK(std::abs(rec.jumps[0].post_state(1)) == 0.0);
        mean_wait += rec.jumps[0].time;
    }
    mean_wait /= n_traj;
    const double sigma = 1.0 / (gamma * std::sqrt(static_cast<double>(n_traj)));
    CHECK(std::abs(mean_wait - 1.0 / gamma) <= 4.0 * sigma);
}

TEST_CASE("ensemble average converges to the master equation at the expected rate")
{
    const LindbladModel m = driven_qubit(0.5, 0.3);
    const double t_max = 20.0;
    const double dt = 0.01;
    const EvolutionResult exact =
        evolve(m, DensityMatrix::pure(excited()), linear_grid(t_max, 2001));

    const auto sup_error = [&](int n_traj) {
        const EvolutionResult ens = ensemble_average(m, excited(), n_traj, t_max, dt, 2024);
        REQUIRE(ens.times.size() == exact.times.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < ens.times.size(); ++k) {
            worst = std::max(worst,
                             std::abs(ens.states[k].matrix(1, 1).real() -
                                      exact.states[k].matrix(1, 1).real()));
        }
        return worst;
    };

    const double err500 = sup_error(500);
    const double err8000 = sup_error(8000);
    // Monte-Carlo error shrinks like 1/sqrt(n): a factor 16 in samples is a
    // factor 4 in error, measured loosely.
    CHECK(err8000 < err500);
    CHECK(err500 / err8000 > 1.5);
    CHECK(err500 <= 5.0 * std::sqrt(0.25 / 500.0));
    CHECK(err8000 <= 5.0 * std::sqrt(0.25 / 8000.0));
}

TEST_CASE("sampling validates its inputs")
{
    LindbladModel closed;
    closed.hamiltonian = ComplexMatrix::Zero(2, 2);
    CHECK_THROWS_AS((void)sample_trajectory(closed, excited(), 1.0, 0.1, 1),
                    std::invalid_argument);

    const LindbladModel m = driven_qubit(0.3, 0.2);
    CHECK_THROWS_AS((void)sample_trajectory(m, excited(), -1.0, 0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)sample_trajectory(m, excited(), 1.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)sample_trajectory(m, ComplexVector::Zero(2), 1.0, 0.1, 1),
                    std::invalid_argument);

    // Coarse steps push the single-step jump probability past the guard.
    const LindbladModel hot = driven_qubit(0.0, 5.0);
    bool thrown = false;
    try {
        (void)sample_trajectory(hot, excited(), 5.0, 1.0, 1);
    } catch (const std::runtime_error& e) {
        thrown = true;
        CHECK(std::string(e.what()).find("decrease dt") != std::string::npos);
    }
    CHECK(thrown);
}

TEST_CASE("no-jump evolution of an undriven qubit is exact")
{
    const double gamma = 0.6;
    const LindbladModel m = driven_qubit(0.0, gamma);
    const std::vector<double> times = linear_grid(12.0, 25);
    const NoJumpResult r = no_jump_evolution(m, DensityMatrix::pure(excited()), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(r.survival[k] - std::exp(-gamma * times[k])) <= 1e-10);
        CHECK(std::abs(r.conditional_states[k].matrix(1, 1).real() - 1.0) <= 1e-10);
    }
}

TEST_CASE("no-jump survival matches the fraction of jump-free trajectories")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.1;
    p.gamma = 1e-3;
    const LindbladModel m = lambda_model(p);
    ComplexVector psi0 = ComplexVector::Zero(3);
    psi0(0) = 1.0;

    const double t_max = 3000.0;
    const NoJumpResult cond =
        no_jump_evolution(m, DensityMatrix::pure(psi0), {0.0, t_max});

    const int n_traj = 500;
    int jump_free = 0;
    for (int k = 0; k < n_traj; ++k) {
        const TrajectoryRecord rec =
            sample_trajectory(m, psi0, t_max, 0.5, derive_stream_seed(7, k));
        if (rec.jumps.empty()) {
            ++jump_free;
        }
    }
    const double p_surv = cond.survival.back();
    const double sigma = std::sqrt(p_surv * (1.0 - p_surv) / n_traj);
    CHECK(std::abs(jump_free / static_cast<double>(n_traj) - p_surv) <= 3.0 * sigma);
}

TEST_CASE("conditional state saturates to the slowest-decaying eigenvector")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.1;
    p.gamma = 1e-3;
    const LindbladModel m = lambda_model(p);
    ComplexVector psi0 = ComplexVector::Zero(3);
    psi0(0) = 1.0;

    const double t = 50.0 / p.gamma;
    const NoJumpResult r = no_jump_evolution(m, DensityMatrix::pure(psi0), {0.0, t});

    const ComplexSpectrum s = eig(effective_hamiltonian(m));
    int slowest = 0;
    for (int k = 1; k < 3; ++k) {
        if (s.eigenvalues(k).imag() > s.eigenvalues(slowest).imag()) {
            slowest = k; // least negative Im(E) decays slowest under exp(-iEt)
        }
    }
    const ComplexVector v = s.eigenvectors.col(slowest).normalized();
    const ComplexMatrix projector = v * v.adjoint();
    CHECK((r.conditional_states.back().matrix - projector).norm() <= 1e-2);
}

TEST_CASE("no-jump evolution validates its grid")
{
    const LindbladModel m = driven_qubit(0.3, 0.2);
    const DensityMatrix rho0 = DensityMatrix::pure(excited());
    CHECK_THROWS_AS((void)no_jump_evolution(m, rho0, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)no_jump_evolution(m, rho0, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)no_jump_evolution(m, rho0, {-1.0, 1.0}), std::invalid_argument);
}
