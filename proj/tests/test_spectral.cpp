// test_spectral.cpp — Spectrum ordering and metastability diagnosis

#include "doctest.h"

#include "metastab/models.hpp"
#include "metastab/spectral.hpp"

#include "test_support.hpp"

using namespace metastab;

TEST_CASE("undriven spectrum is the known rate multiset in sorted order")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.0;
    p.gamma = 0.1;
    const LiouvillianSpectrum s = liouvillian_spectrum(lambda_model(p));
    REQUIRE(s.eigenvalues.size() == 9);

    // Populations give {0, 0, -gamma}; coherences give -gamma/2 twice,
    // +-i deltaV undamped, and -gamma/2 +- i deltaV.
    const std::vector<Complex> expect = {
        {0.0, 0.0},           {0.0, 0.0},
        {0.0, -p.deltaV},     {0.0, p.deltaV},
        {-0.5 * p.gamma, 0.0}, {-0.5 * p.gamma, 0.0},
        {-0.5 * p.gamma, -p.deltaV}, {-0.5 * p.gamma, p.deltaV},
        {-p.gamma, 0.0}};
    for (int k = 0; k < 9; ++k) {
        CHECK(std::abs(s.eigenvalues(k) - expect[k]) <= 1e-10);
    }
}

TEST_CASE("sorted spectrum: descending real part, ties by ascending |Im| then Im")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.02;
    p.gamma = 1e-3;
    const LiouvillianSpectrum s = liouvillian_spectrum(lambda_model(p));
    for (int k = 0; k + 1 < s.eigenvalues.size(); ++k) {
        const Complex a = s.eigenvalues(k);
        const Complex b = s.eigenvalues(k + 1);
        const bool ordered =
            a.real() > b.real() + 1e-14 ||
            (std::abs(a.real() - b.real()) <= 1e-14 &&
             (std::abs(a.imag()) < std::abs(b.imag()) + 1e-14));
        CHECK(ordered);
    }
    CHECK(std::abs(s.eigenvalues(0)) <= 1e-12);
}

TEST_CASE("metastable regime shows a wide spectral gap with the expected lifetimes")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-5;
    const LiouvillianSpectrum s = liouvillian_spectrum(lambda_model(p));
    CHECK(s.tau2 * p.gamma == doctest::Approx(6674.0).epsilon(1e-3));
    CHECK(s.tau3 * p.gamma == doctest::Approx(4.001).epsilon(1e-3));
    CHECK(s.gap_ratio == doctest::Approx(1668.0).epsilon(1e-3));

    const MetastabilityReport report = metastability_report(s);
    CHECK(report.is_metastable);
    CHECK(report.gap_ratio == s.gap_ratio);
    CHECK(std::abs(report.lambda2.real() + 1.0 / s.tau2) <= 1e-15);
}

TEST_CASE("strong virtual decay closes the gap")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-5;
    p.gammaV = 1e-5;
    const LiouvillianSpectrum s = liouvillian_spectrum(lambda_model(p));
    CHECK(s.gap_ratio < 10.0);
    CHECK(!metastability_report(s).is_metastable);
}

TEST_CASE("slow relaxation accelerates monotonically with the virtual decay rate")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-5;
    double previous = 0.0;
    for (const double gv : {0.0, 1e-9, 1e-7, 1e-5}) {
        p.gammaV = gv;
        const LiouvillianSpectrum s = liouvillian_spectrum(lambda_model(p));
        const double rate = std::abs(s.eigenvalues(1).real());
        CHECK(rate >= previous);
        previous = rate;
    }
}

TEST_CASE("metastability threshold is adjustable")
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-5;
    const LiouvillianSpectrum s = liouvillian_spectrum(lambda_model(p));
    CHECK(metastability_report(s, 1e6).is_metastable == false);
    CHECK(metastability_report(s, 10.0).is_metastable == true);
}
