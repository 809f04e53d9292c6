#pragma once

// Formal separatrix of the eps = 0 inner equation
//   (1 + (d_phi + d_tau)^2)^2 u = kappa u^2 - u^3
// as a Laurent-in-tau / Fourier-in-phi series
//   u = sum_{k>=1} sum_{|j|<=k} u_{k,j} e^{i j phi} tau^{-k},
// plus the lifted 4-vector coefficients and least-term truncation.
//
// Non-resonant modes (|j| != 1) at order k divide by (1-j^2)^2.  Resonant
// modes carry zero symbol; u_{k,+-1} is pinned by the solvability condition
// two Laurent orders later via
//   (1 + (+-i + d_tau)^2)^2 tau^-k = -4k(k+1) tau^-k-2
//       -+ 4ik(k+1)(k+2) tau^-k-3 + k(k+1)(k+2)(k+3) tau^-k-4.
// The recursion keeps the pending resonant pair as formal unknowns and
// closes them in order; translation freedom is fixed so that the order-1
// layer is pure cos (P1 = i cos(phi)/sqrt(eta)) and the order-2 resonant
// layer is pure sin (which reproduces P2).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gshe/linalg.hpp"
#include "gshe/model.hpp"

namespace gshe {

struct InnerSeries {
    BigReal kappa;
    BigReal eta;
    int N = 0;
    Precision prec;

    // u[k][j+k] for 1 <= k <= N (index 0 unused), |j| <= k
    std::vector<std::vector<BigComplex>> u;
    // lifted coefficients Gamma_{k,j} and their per-layer max component norm
    std::vector<std::vector<Vec4>> gamma;
    std::vector<BigReal> gamma_max;

    const BigComplex& ucoef(int k, int j) const { return u[k][j + k]; }

    struct Eval {
        State4 x;  // sum Gamma_k(phi) tau^-k
        Vec4 v;    // d_phi of the same sum
    };
    Eval eval(const BigReal& phi, const BigComplex& tau, int terms) const;

    // Astronomer's recipe: argmin_k max_j |Gamma_{k,j}| |tau|^-k and the
    // attained minimum as heuristic error estimate.
    std::pair<int, BigReal> least_term(const BigReal& tau_abs) const;
};

InnerSeries compute_inner_series(const BigReal& kappa, int N, const Precision& prec);

// Residual of the truncated series in the inner equation, collected as
// coefficient tables res[n][j+n] for 1 <= n <= max_order.  Plugging the
// n_trunc-term series in must leave only orders >= n_trunc + 1.
std::vector<std::vector<BigComplex>> inner_residual(const InnerSeries& s, int n_trunc,
                                                    int max_order);

// Line-oriented cache, written atomically (temp file + rename).
void save_inner_series(const InnerSeries& s, const std::string& path);
std::optional<InnerSeries> try_load_inner_series(const std::string& path, const BigReal& kappa,
                                                 int N, const Precision& prec);

} // namespace gshe
