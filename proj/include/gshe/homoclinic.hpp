#pragma once

// Symmetric homoclinic orbits: Newton shooting of the outer-series initial
// condition onto Fix(S) = {q2 = 0, p1 = 0} in the unknowns (T, psi), then
// the homoclinic invariant  omega_hat = Omega(v(T*), S v(T*))  with
// v(0) = alpha d_phi Gamma^u, normalized as
// omega_bar = (omega_hat/2) exp(pi alpha/(2 beta)).

#include <functional>
#include <vector>

#include "gshe/outer.hpp"
#include "gshe/taylor.hpp"

namespace gshe {

struct HomoclinicOptions {
    int outer_N = 5;
    int max_iters = 50;
    std::ostream* progress = nullptr;
};

struct NewtonOutcome {
    BigReal T_star, psi_star;
    State4 x_sym;
    int iters = 0;
    BigReal residual;
    BigReal T0, psi_seed;  // the seed actually used
};

struct HomoclinicResult {
    BigReal epsilon, kappa;
    int branch = 0;
    int digits = 0;
    BigReal alpha, beta;
    BigReal T_star, psi_star;
    BigReal T0, psi_seed;
    State4 x_sym;
    Vec4 v_u;            // transported alpha d_phi Gamma^u at the symmetric point
    BigReal omega_hat;   // Omega(v, S v)
    BigReal omega_bar;   // (omega_hat/2) exp(pi alpha/(2 beta))
    int newton_iters = 0;
    BigReal residual;
};

// Default shooting time: (1/beta)(ln(1/delta) + 3), raised until the
// dropped outer tail e^{-(N+1) beta T0} < 10^(-D-5).
BigReal default_T0(const BigReal& epsilon, int outer_N, const Precision& prec);

// Digits needed so exp(pi alpha/(2 beta)) 10^(-D+10) stays below the target
// accuracy 10^-acc of omega_bar.
int required_digits(const BigReal& epsilon, int acc_digits);

NewtonOutcome newton_symmetric(const BigReal& epsilon, const BigReal& kappa, int branch,
                               const Precision& prec, const HomoclinicOptions& opts = {});

HomoclinicResult homoclinic_invariant(const BigReal& epsilon, const BigReal& kappa, int branch,
                                      const Precision& prec, const HomoclinicOptions& opts = {});

// omega via 2 d_phi(u^2 + u d^2 u) = 2 d_phi(q1 p2), the tangent realizing
// d_phi.  Agreement with omega_hat is a convention cross-check.
BigReal cross_check_scalar(const HomoclinicResult& r);

struct OmegaZCheck {
    BigReal omega;    // Omega(d_phi Gamma^u, d_phi Gamma^s)
    BigReal omega_z;  // Omega(d_z Gamma^u, d_z Gamma^s)
    BigReal combo;    // alpha^2 omega + beta^2 omega_z (should vanish)
};
OmegaZCheck cross_check_omega_z(const HomoclinicResult& r, const Precision& prec);

struct ProfilePoint {
    BigReal x;  // recentered so the symmetric point is at 0
    BigReal u;  // q1 along the orbit
};
std::vector<ProfilePoint> orbit_profile(const BigReal& epsilon, const BigReal& kappa, int branch,
                                        const Precision& prec, const BigReal& x_max,
                                        const BigReal& dx, const HomoclinicOptions& opts = {});

} // namespace gshe
