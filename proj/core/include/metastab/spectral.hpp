// spectral.hpp — Liouvillian spectrum ordering and metastability diagnosis

#pragma once

#include "metastab/lindblad.hpp"

namespace metastab {

// Eigenvalues sorted by descending real part; ties in Re are broken by
// ascending |Im|, then ascending Im. lambda_1 is the (numerically) zero mode.
struct LiouvillianSpectrum {
    ComplexVector eigenvalues;
    double tau2{0.0};      // 1 / |Re lambda_2|
    double tau3{0.0};      // 1 / |Re lambda_3|
    double gap_ratio{0.0}; // |Re lambda_3| / |Re lambda_2|
};

struct MetastabilityReport {
    bool is_metastable{false};
    Complex lambda2;
    Complex lambda3;
    double tau2{0.0};
    double tau3{0.0};
    double gap_ratio{0.0};
};

// Sorted spectrum with sanity checks: |lambda_1| <= 1e-9 ||L||, no growing
// modes, eigenvalues closed under complex conjugation.
LiouvillianSpectrum liouvillian_spectrum(const LindbladModel& model);

MetastabilityReport metastability_report(const LiouvillianSpectrum& spectrum,
                                         double ratio_threshold = 100.0);

} // namespace metastab
