#pragma once

// Fits of the asymptotic expansion omega_bar(eps) ~ sum omega_k eps^k by
// exact interpolation on sliding windows (as many points as unknowns),
// common-digit extraction across fits, and the three validity tests.

#include <ostream>
#include <string>
#include <vector>

#include "gshe/linalg.hpp"

namespace gshe {

using EpsOmega = std::pair<BigReal, BigReal>;  // (epsilon, omega_bar)

// Exact interpolation; coefficients ascending in eps.
std::vector<BigReal> fit_expansion(const std::vector<EpsOmega>& points, int degree,
                                   const Precision& prec);

// Longest common decimal prefix (sign, integer digits, fraction digits);
// empty when signs or magnitudes disagree.
std::string common_digits(const std::vector<BigReal>& values, int max_digits = 40);

struct WindowFits {
    int degree = 0;
    std::vector<std::vector<BigReal>> coeffs;      // one row per window
    std::vector<std::string> stable;               // common digits per coefficient
};

// All consecutive windows of size degree+1 over the point set.
WindowFits sliding_window_fits(const std::vector<EpsOmega>& points, int degree,
                               const Precision& prec);

struct FitReport {
    std::vector<WindowFits> per_degree;
};

FitReport fit_report(const std::vector<EpsOmega>& points, int degree_lo, int degree_hi,
                     const Precision& prec);

BigReal eval_poly(const std::vector<BigReal>& coeffs, const BigReal& x);

struct ValidityReport {
    // (1) subset stability: common digits of omega_bar_0 across windows
    std::string omega0_common;
    bool subset_stable = false;
    // (2) constant term vs Stokes constant
    BigReal omega0_minus_stokes;
    bool const_matches_stokes = false;
    // (3) out-of-window relative error of the fitted partial sum
    BigReal max_rel_err;
    bool tail_bounded = false;
};

ValidityReport validity_tests(const std::vector<EpsOmega>& window_points,
                              const std::vector<EpsOmega>& outside_points, int degree,
                              const BigReal& stokes_im, const BigReal& stokes_err,
                              const BigReal& rel_err_cap, const Precision& prec);

void write_fit_csv(std::ostream& os, const FitReport& rep, int digits,
                   const std::string& manifest_ref);
void write_fit_table(std::ostream& os, const FitReport& rep);

} // namespace gshe
