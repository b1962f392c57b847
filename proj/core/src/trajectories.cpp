// trajectories.cpp — Quantum-jump unraveling via the waiting-time algorithm and
// the deterministic no-jump conditional evolution

#include "metastab/trajectories.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace metastab {

namespace {

constexpr double kMaxStepJumpProbability = 0.1;
constexpr double kBisectionFraction = 1e-6; // of dt
constexpr double kSurvivalFloor = 1e-300;
constexpr double kSurvivalMonotoneTol = 1e-10;

// Non-Hermitian eigendecomposition of H_eff, reused for cheap repeated
// propagation: psi(t) = V exp(-i Lambda t) V^{-1} psi(0).
struct Propagator {
    ComplexMatrix vectors;
    ComplexVector eigenvalues;
    Eigen::PartialPivLU<ComplexMatrix> lu;

    explicit Propagator(const ComplexMatrix& h_eff)
        : vectors(), eigenvalues(), lu()
    {
        const ComplexSpectrum spectrum = eig(h_eff);
        vectors = spectrum.eigenvectors;
        eigenvalues = spectrum.eigenvalues;
        lu.compute(vectors);
        const auto diag = lu.matrixLU().diagonal();
        const double u_min = diag.cwiseAbs().minCoeff();
        const double u_max = diag.cwiseAbs().maxCoeff();
        if (!(u_min > 1e-14 * u_max)) {
            throw std::runtime_error("sample_trajectory: effective Hamiltonian eigenbasis is singular");
        }
    }

    ComplexVector to_eigenbasis(const ComplexVector& psi) const { return lu.solve(psi); }

    // Advance eigenbasis coefficients by dt in place.
    void step(ComplexVector& coeffs, double dt) const
    {
        for (Eigen::Index a = 0; a < coeffs.size(); ++a) {
            coeffs(a) *= std::exp(Complex(0.0, -1.0) * eigenvalues(a) * dt);
        }
    }

    ComplexVector state(const ComplexVector& coeffs) const { return vectors * coeffs; }
};

// Uniform in the open interval (0,1): 53-bit mantissa offset by half a ulp so
// neither endpoint can occur.
double uniform_open(std::mt19937_64& gen)
{
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

void validate_initial_state(const LindbladModel& model, const ComplexVector& psi0,
                            const char* who)
{
    if (psi0.size() != model.dim()) {
        throw std::invalid_argument(std::string(who) + ": state dimension mismatch");
    }
    if (!psi0.allFinite() || psi0.norm() == 0.0) {
        throw std::invalid_argument(std::string(who) + ": state must be finite and nonzero");
    }
}

void validate_step_params(double t_max, double dt, const char* who)
{
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw std::invalid_argument(std::string(who) + ": t_max must be positive and finite");
    }
    if (!(dt > 0.0) || !std::isfinite(dt) || dt > t_max) {
        throw std::invalid_argument(std::string(who) + ": dt must lie in (0, t_max]");
    }
}

// Pick the jump channel with probability proportional to gamma_k ||O_k psi||^2
// and return the normalized post-jump state.
JumpEvent apply_jump(const LindbladModel& model, const ComplexVector& psi, double time,
                     double r)
{
    std::vector<double> weights(model.dissipators.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < model.dissipators.size(); ++k) {
        const Dissipator& d = model.dissipators[k];
        weights[k] = d.rate * (d.jump * psi).squaredNorm();
        total += weights[k];
    }
    if (total <= 0.0) {
        throw std::runtime_error("sample_trajectory: jump fired with zero total jump weight");
    }

    int channel = static_cast<int>(model.dissipators.size()) - 1;
    double accum = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        accum += weights[k];
        if (r * total <= accum) {
            channel = static_cast<int>(k);
            break;
        }
    }

    JumpEvent event;
    event.time = time;
    event.channel = channel;
    event.post_state = model.dissipators[static_cast<std::size_t>(channel)].jump * psi;
    event.post_state.normalize();
    return event;
}

} // namespace

ComplexMatrix effective_hamiltonian(const LindbladModel& model)
{
    model.validate();
    ComplexMatrix h_eff = model.hamiltonian;
    for (const Dissipator& d : model.dissipators) {
        h_eff -= Complex(0.0, 0.5 * d.rate) * (adjoint(d.jump) * d.jump);
    }
    return h_eff;
}

std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t k)
{
    // splitmix64 output k of the stream started at base_seed
    std::uint64_t x = base_seed + (k + 1) * 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

TrajectoryRecord sample_trajectory(const LindbladModel& model, const ComplexVector& psi0,
                                   double t_max, double dt, std::uint64_t seed)
{
    model.validate();
    validate_initial_state(model, psi0, "sample_trajectory");
    validate_step_params(t_max, dt, "sample_trajectory");
    if (model.dissipators.empty()) {
        throw std::invalid_argument("sample_trajectory: model has no jump channels");
    }

    const Propagator prop(effective_hamiltonian(model));
    std::mt19937_64 gen(seed);

    TrajectoryRecord record;
    record.seed = seed;

    ComplexVector psi = psi0.normalized();
    ComplexVector coeffs = prop.to_eigenbasis(psi);
    double norm_sq = 1.0;
    double threshold = uniform_open(gen);

    const int n_steps = static_cast<int>(std::ceil(t_max / dt - 1e-9));
    record.times.reserve(static_cast<std::size_t>(n_steps) + 1);
    record.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    record.times.push_back(0.0);
    record.states.push_back(psi);

    for (int step = 0; step < n_steps; ++step) {
        const double t0 = static_cast<double>(step) * dt;
        const double step_dt = std::min(dt, t_max - t0);

        ComplexVector coeffs_next = coeffs;
        prop.step(coeffs_next, step_dt);
        double norm_sq_next = prop.state(coeffs_next).squaredNorm();

        const double step_prob = 1.0 - norm_sq_next / norm_sq;
        if (step_prob >= kMaxStepJumpProbability) {
            throw std::runtime_error(
                "sample_trajectory: single-step jump probability " + format_number(step_prob) +
                " reached 0.1; decrease dt");
        }

        // Possibly several jumps inside this step: repeat on the remaining interval.
        double t_lo = t0;
        const double t_hi = t0 + step_dt;
        while (norm_sq_next <= threshold) {
            // Bisect the crossing time of ||psi(t)||^2 = threshold in (t_lo, t_hi].
            double a = t_lo;
            double b = t_hi;
            ComplexVector coeffs_mid;
            while (b - a > kBisectionFraction * dt) {
                const double mid = 0.5 * (a + b);
                coeffs_mid = coeffs;
                prop.step(coeffs_mid, mid - t_lo);
                if (prop.state(coeffs_mid).squaredNorm() <= threshold) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            const double t_jump = b;

            ComplexVector coeffs_jump = coeffs;
            prop.step(coeffs_jump, t_jump - t_lo);
            const ComplexVector psi_pre = prop.state(coeffs_jump);

            const JumpEvent event = apply_jump(model, psi_pre, t_jump, uniform_open(gen));
            record.jumps.push_back(event);

            // Restart the waiting-time clock from the post-jump state.
            coeffs = prop.to_eigenbasis(event.post_state);
            norm_sq = 1.0;
            threshold = uniform_open(gen);
            t_lo = t_jump;

            coeffs_next = coeffs;
            prop.step(coeffs_next, t_hi - t_lo);
            norm_sq_next = prop.state(coeffs_next).squaredNorm();
        }

        coeffs = coeffs_next;
        norm_sq = norm_sq_next;
        psi = prop.state(coeffs).normalized();
        record.times.push_back(t_hi);
        record.states.push_back(psi);
    }

    return record;
}

EvolutionResult ensemble_average(const LindbladModel& model, const ComplexVector& psi0,
                                 int n_traj, double t_max, double dt,
                                 std::uint64_t base_seed)
{
    if (n_traj <= 0) {
        throw std::invalid_argument("ensemble_average: n_traj must be positive");
    }

    EvolutionResult result;
    std::vector<ComplexMatrix> sums;
    for (int k = 0; k < n_traj; ++k) {
        const TrajectoryRecord record = sample_trajectory(
            model, psi0, t_max, dt, derive_stream_seed(base_seed, static_cast<std::uint64_t>(k)));
        if (k == 0) {
            result.times = record.times;
            sums.assign(record.states.size(),
                        ComplexMatrix::Zero(model.dim(), model.dim()));
        }
        for (std::size_t i = 0; i < record.states.size(); ++i) {
            sums[i] += record.states[i] * record.states[i].adjoint();
        }
    }

    result.states.reserve(sums.size());
    for (ComplexMatrix& s : sums) {
        s /= static_cast<double>(n_traj);
        result.states.push_back(DensityMatrix::checked(s));
    }
    return result;
}

NoJumpResult no_jump_evolution(const LindbladModel& model, const DensityMatrix& rho0,
                               const std::vector<double>& times)
{
    model.validate();
    if (rho0.dim() != model.dim()) {
        throw std::invalid_argument("no_jump_evolution: state dimension mismatch");
    }
    if (times.empty()) {
        throw std::invalid_argument("no_jump_evolution: times must be nonempty");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0 ||
            (i > 0 && times[i] <= times[i - 1])) {
            throw std::invalid_argument(
                "no_jump_evolution: times must be finite, non-negative, strictly increasing");
        }
    }

    // rho~(t) = e^{-i H_eff t} rho0 e^{+i H_eff^dag t}, evaluated in the H_eff
    // eigenbasis: rho~ = V (M o E(t)) V^dag with M = V^{-1} rho0 V^{-dag} and
    // E_ab(t) = exp(-i (lambda_a - conj(lambda_b)) t).
    const ComplexSpectrum spectrum = eig(effective_hamiltonian(model));
    Eigen::PartialPivLU<ComplexMatrix> lu(spectrum.eigenvectors);
    const ComplexMatrix m = lu.solve(lu.solve(rho0.matrix).adjoint()); // V^{-1} rho0 V^{-dag}

    NoJumpResult out;
    out.times = times;
    out.survival.reserve(times.size());
    out.conditional_states.reserve(times.size());

    const Eigen::Index dim = model.dim();
    double previous_survival = 1.0 + kSurvivalMonotoneTol;
    for (double t : times) {
        ComplexMatrix weighted(dim, dim);
        for (Eigen::Index a = 0; a < dim; ++a) {
            for (Eigen::Index b = 0; b < dim; ++b) {
                const Complex phase =
                    std::exp(Complex(0.0, -1.0) *
                             (spectrum.eigenvalues(a) - std::conj(spectrum.eigenvalues(b))) * t);
                weighted(a, b) = m(a, b) * phase;
            }
        }
        ComplexMatrix rho_tilde =
            spectrum.eigenvectors * weighted * adjoint(spectrum.eigenvectors);
        rho_tilde = 0.5 * (rho_tilde + adjoint(rho_tilde).eval());

        const double survival = rho_tilde.trace().real();
        if (survival < kSurvivalFloor) {
            throw std::runtime_error(
                "no_jump_evolution: survival probability underflowed below 1e-300 at t = " +
                format_number(t));
        }
        if (survival > previous_survival + kSurvivalMonotoneTol) {
            throw std::runtime_error("no_jump_evolution: survival probability increased at t = " +
                                     format_number(t));
        }
        previous_survival = survival;

        out.survival.push_back(survival);
        out.conditional_states.push_back(DensityMatrix::checked(rho_tilde / survival));
    }
    return out;
}

} // namespace metastab
