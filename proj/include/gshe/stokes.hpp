#pragma once

// Four-step Stokes-constant pipeline: evaluate the formal separatrix at
// (-d, -i sigma - d) and (d, -i sigma + d), transport state + phi-tangent
// over [0, d] / [-d, 0] at eps = 0, and form
//   Theta_hat(sigma) = Omega(z+(-d) - z-(d), v-(d)) e^sigma.
// The roundoff model C/(|eta| sigma^2) 10^-D e^sigma balanced against the
// C1 e^-sigma truncation branch picks the optimum sigma*.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gshe/inner.hpp"

namespace gshe {

struct ThetaHat {
    BigComplex value;
    BigReal trunc_estimate;       // least-term estimate at |tau| = |-i sigma - d|
    bool truncation_dominated = false;
    long steps = 0;
    double seconds = 0.0;
};

ThetaHat theta_hat(const InnerSeries& series, const BigReal& sigma, const BigReal& d, int n_terms,
                   const Precision& prec);

struct SweepRow {
    BigReal sigma;
    BigComplex theta;
    BigReal trunc_estimate;
    double seconds = 0.0;
};

struct ErrorModelFit {
    BigReal C;           // roundoff-branch constant
    BigReal C0, C1;      // |Theta| ~ C0 + C1 e^-sigma below the knee
    BigReal sigma_star;  // balance point
    BigReal err_est;     // sqrt(C C1/|eta|)/sigma* 10^(-D/2)
};

// samples are (sigma, |Theta_hat(sigma)|); both regimes must be populated.
ErrorModelFit fit_error_model(const std::vector<std::pair<BigReal, BigReal>>& samples, int digits,
                              const BigReal& eta, const Precision& prec);

struct StokesOptions {
    int series_N = 40;
    int n_terms = 40;            // series terms for the initial data
    std::string d_spec = "350pi";  // exact multiple of pi, parsed at run precision
    // sigma grid; when empty, [20, 28.9] shifted by 1.19 (D - 16)
    std::vector<BigReal> sigma_grid;
    std::string cache_dir;       // empty: no caching
    std::ostream* progress = nullptr;
};

struct StokesEstimate {
    BigComplex theta0;   // Theta_hat(sigma*)
    BigReal err_est;
    BigReal sigma_star;
    BigReal C, C0, C1;
    std::vector<SweepRow> sweep;
    BigReal d;
    int n_terms = 0;
    int series_N = 0;
    int digits = 0;
    BigReal kappa, eta;
};

// "350pi" or "12.5pi" or a plain decimal, at working precision.
BigReal parse_pi_multiple(const std::string& spec, mpfr_prec_t bits);

std::vector<BigReal> default_sigma_grid(int digits, mpfr_prec_t bits);

StokesEstimate stokes_constant(const BigReal& kappa, int digits, const StokesOptions& opts = {});

struct ScanRow {
    BigReal kappa;
    bool ok = false;
    std::string error;
    BigComplex theta0;
    BigReal err_est, sigma_star;
};

std::vector<ScanRow> stokes_scan(const std::vector<BigReal>& kappa_grid, int digits,
                                 const StokesOptions& opts = {});

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, int digits,
                     const std::string& manifest_ref);
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows, int digits,
                    const std::string& manifest_ref);

} // namespace gshe
