// spectral.cpp — Spectrum ordering and metastability report

#include "metastab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace metastab {

namespace {

constexpr double kZeroModeBound = 1e-9; // relative to ||L||

// Descending Re with a tie tolerance; ties broken by ascending |Im|, then Im.
void sort_eigenvalues(ComplexVector& values, double tie_tol)
{
    std::vector<Complex> v(values.data(), values.data() + values.size());
    std::sort(v.begin(), v.end(), [tie_tol](const Complex& a, const Complex& b) {
        if (std::abs(a.real() - b.real()) > tie_tol) {
            return a.real() > b.real();
        }
        const double abs_ima = std::abs(a.imag());
        const double abs_imb = std::abs(b.imag());
        if (abs_ima != abs_imb) {
            return abs_ima < abs_imb;
        }
        return a.imag() < b.imag();
    });
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        values(k) = v[static_cast<std::size_t>(k)];
    }
}

void check_conjugation_closure(const ComplexVector& values, double tol)
{
    std::vector<bool> matched(static_cast<std::size_t>(values.size()), false);
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (matched[static_cast<std::size_t>(k)]) continue;
        const Complex target = std::conj(values(k));
        bool found = false;
        for (Eigen::Index m = 0; m < values.size(); ++m) {
            if (matched[static_cast<std::size_t>(m)] && m != k) continue;
            if (std::abs(values(m) - target) <= tol) {
                matched[static_cast<std::size_t>(k)] = true;
                if (m != k) matched[static_cast<std::size_t>(m)] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::runtime_error(
                "liouvillian_spectrum: eigenvalues not closed under conjugation near lambda = (" +
                format_number(values(k).real()) + ", " + format_number(values(k).imag()) + ")");
        }
    }
}

} // namespace

LiouvillianSpectrum liouvillian_spectrum(const LindbladModel& model)
{
    const ComplexMatrix liouvillian = build_liouvillian(model);
    const ComplexSpectrum spectrum = eig(liouvillian);

    const double scale = std::max(1.0, liouvillian.norm());
    const double bound = kZeroModeBound * scale;

    LiouvillianSpectrum out;
    out.eigenvalues = spectrum.eigenvalues;
    sort_eigenvalues(out.eigenvalues, 1e-12 * scale);

    for (Eigen::Index k = 0; k < out.eigenvalues.size(); ++k) {
        if (out.eigenvalues(k).real() > bound) {
            throw std::runtime_error("liouvillian_spectrum: growing mode Re lambda = " +
                                     format_number(out.eigenvalues(k).real()));
        }
    }
    if (std::abs(out.eigenvalues(0)) > bound) {
        throw std::runtime_error("liouvillian_spectrum: no zero eigenvalue (|lambda_1| = " +
                                 format_number(std::abs(out.eigenvalues(0))) + ")");
    }
    check_conjugation_closure(out.eigenvalues, bound);

    if (out.eigenvalues.size() >= 2) {
        const double re2 = std::abs(out.eigenvalues(1).real());
        out.tau2 = re2 > 0.0 ? 1.0 / re2 : INFINITY;
        if (out.eigenvalues.size() >= 3) {
            const double re3 = std::abs(out.eigenvalues(2).real());
            out.tau3 = re3 > 0.0 ? 1.0 / re3 : INFINITY;
            out.gap_ratio = re2 > 0.0 ? re3 / re2 : INFINITY;
        }
    }
    return out;
}

MetastabilityReport metastability_report(const LiouvillianSpectrum& spectrum,
                                         double ratio_threshold)
{
    if (spectrum.eigenvalues.size() < 3) {
        throw std::invalid_argument("metastability_report: need at least three eigenvalues");
    }
    MetastabilityReport report;
    report.lambda2 = spectrum.eigenvalues(1);
    report.lambda3 = spectrum.eigenvalues(2);
    report.tau2 = spectrum.tau2;
    report.tau3 = spectrum.tau3;
    report.gap_ratio = spectrum.gap_ratio;
    report.is_metastable = spectrum.gap_ratio >= ratio_threshold;
    return report;
}

} // namespace metastab
