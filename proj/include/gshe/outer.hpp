#pragma once

// Exponential-Fourier expansion of the unstable manifold for eps < 0,
//   u = sum_{k=1..N} e^{k z} sum_{|j|<=k} w_{k,j} e^{i j phi},
// collected from ((alpha d_phi + beta d_z)^2 + 1)^2 u = eps u + kappa u^2 - u^3.
// The linear symbol ((i j alpha + k beta)^2 + 1)^2 - eps vanishes exactly at
// (k, j) = (1, +-1), where the free parameters a_{1,1} = r0 cos psi,
// b_{1,1} = r0 sin psi live; every other mode divides by its symbol.
// psi rides through the recursion with its exact derivative (dual pairing).

#include <optional>
#include <string>
#include <vector>

#include "gshe/linalg.hpp"
#include "gshe/model.hpp"

namespace gshe {

struct OuterSeries {
    BigReal epsilon, kappa, psi;
    int N = 0;
    Precision prec;
    BigReal alpha, beta;
    BigReal eta, mu;
    BigReal r0, psi0;  // matching values (psi0 the branch-0 seed)

    // complex-exponential coefficients and their exact psi-derivatives,
    // w[k][j+k] for 1 <= k <= N
    std::vector<std::vector<BigComplex>> w, dw;

    struct Eval {
        State4 x;
        Vec4 dphi;  // d_phi of the sum
        Vec4 dpsi;  // d_psi of the sum
    };
    Eval eval(const BigReal& phi, const BigReal& z, int terms) const;

    // Real-trajectory variant: asserts the imaginary parts are below
    // 10^(-D+4) * scale and returns states with exact zero imaginary part.
    struct RealEval {
        State4 x;
        Vec4 dphi, dpsi;
    };
    RealEval eval_real(const BigReal& phi, const BigReal& z, int terms) const;
};

// psi0 = arctan(-(1 + 2 mu/eta) delta/2), r0 = (2 delta/sqrt(eta))
//        sqrt(1 + (1 + 2 mu/eta)^2 delta^2/4).
std::pair<BigReal, BigReal> initial_match(const BigReal& epsilon, const BigReal& kappa,
                                          const Precision& prec);

OuterSeries compute_outer_series(const BigReal& epsilon, const BigReal& kappa, const BigReal& psi,
                                 int N, const Precision& prec);

void save_outer_series(const OuterSeries& s, const std::string& path);
std::optional<OuterSeries> try_load_outer_series(const std::string& path, const BigReal& epsilon,
                                                 const BigReal& kappa, const BigReal& psi, int N,
                                                 const Precision& prec);

} // namespace gshe
