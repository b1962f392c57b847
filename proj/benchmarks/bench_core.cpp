// bench_core.cpp — Microbenchmarks for the dominant numerical kernels:
// generator assembly, eigendecomposition, propagation, elimination, and
// trajectory sampling

#include <vector>

#include <benchmark/benchmark.h>

#include "metastab/metastab.hpp"

using namespace metastab;

namespace {

LambdaParams standard_params()
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-5;
    return p;
}

ChiralParams chiral_params()
{
    ChiralParams cp;
    cp.omega = 1.0;
    cp.delta = 0.01;
    cp.gammaR = 0.255;
    cp.gammaL = 0.245;
    return cp;
}

DensityMatrix basis_state(int dim, int index)
{
    ComplexVector psi = ComplexVector::Zero(dim);
    psi(index) = 1.0;
    return DensityMatrix::pure(psi);
}

std::vector<double> linear_grid(double t_max, int n)
{
    std::vector<double> times(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        times[static_cast<std::size_t>(k)] = t_max * static_cast<double>(k) / (n - 1);
    }
    return times;
}

void BM_BuildLiouvillian(benchmark::State& state)
{
    const LindbladModel model = two_qubit_tpr_model(standard_params());
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_liouvillian(model));
    }
}
BENCHMARK(BM_BuildLiouvillian);

void BM_LiouvillianEig(benchmark::State& state)
{
    const ComplexMatrix lv = build_liouvillian(two_qubit_tpr_model(standard_params()));
    for (auto _ : state) {
        benchmark::DoNotOptimize(eig(lv));
    }
}
BENCHMARK(BM_LiouvillianEig);

void BM_SpectralEvolve(benchmark::State& state)
{
    const LindbladModel model = lambda_model(standard_params());
    const DensityMatrix rho0 = basis_state(3, 0);
    const std::vector<double> times = linear_grid(1e6, 200);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve(model, rho0, times));
    }
}
BENCHMARK(BM_SpectralEvolve);

void BM_SteadyState(benchmark::State& state)
{
    const LindbladModel model = lambda_model(standard_params());
    for (auto _ : state) {
        benchmark::DoNotOptimize(steady_state(model));
    }
}
BENCHMARK(BM_SteadyState);

void BM_SampleTrajectory(benchmark::State& state)
{
    LambdaParams p = standard_params();
    p.omega = 0.1;
    p.gamma = 1e-3;
    const LindbladModel model = lambda_model(p);
    ComplexVector psi0 = ComplexVector::Zero(3);
    psi0(0) = 1.0;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_trajectory(model, psi0, 2000.0, 0.5, seed++));
    }
}
BENCHMARK(BM_SampleTrajectory);

void BM_NumericHae(benchmark::State& state)
{
    const LindbladModel model = chiral_model(chiral_params());
    const RealAffineForm form = real_affine_form(model);
    const Partition partition = chiral_partition(form);
    for (auto _ : state) {
        benchmark::DoNotOptimize(numeric_hae(form, partition));
    }
}
BENCHMARK(BM_NumericHae);

void BM_Concurrence(benchmark::State& state)
{
    const LindbladModel model = chiral_model(chiral_params());
    const DensityMatrix ss = steady_state(model);
    const DensityMatrix product = coupled_to_product(ss);
    for (auto _ : state) {
        benchmark::DoNotOptimize(concurrence(product));
    }
}
BENCHMARK(BM_Concurrence);

} // namespace

BENCHMARK_MAIN();
