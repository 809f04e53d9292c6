#pragma once

// Stationary generalized Swift-Hohenberg equation as the 4D reversible
// Hamiltonian system
//   q1' = q2,  q2' = p2 - q1,  p1' = p2 - eps q1 - kappa q1^2 + q1^3,
//   p2' = -p1,
// with H = p1 q2 - p2 q1 + p2^2/2 + eps q1^2/2 + kappa q1^3/3 - q1^4/4,
// reversor S: (q1,q2,p1,p2) -> (q1,-q2,-p1,p2).  The symplectic-form sign is
// fixed so that the vector field equals J grad H with this component order.

#include "gshe/linalg.hpp"
#include "gshe/mp.hpp"

namespace gshe {

struct ModelParams {
    BigReal kappa;
    BigReal epsilon;  // <= 0 in all pipelines
    BigReal delta;    // sqrt(-epsilon)/2; epsilon is the source of truth
    Precision prec;

    ModelParams(const BigReal& kappa_, const BigReal& epsilon_, const Precision& p)
        : kappa(kappa_), epsilon(epsilon_), delta(sqrt(-epsilon_) / 2L), prec(p) {}
};

// Eigenvalue data of the linearization at the origin: +-beta +- i alpha.
struct SpectralData {
    BigReal alpha;       // sqrt(2 sqrt(1-eps) + 2)/2
    BigReal beta;        // sqrt(2 sqrt(1-eps) - 2)/2
    BigReal exp_factor;  // exp(pi alpha / (2 beta)), +inf at eps = 0

    SpectralData(const BigReal& epsilon, const Precision& prec);
};

// Normal-form coefficients eta(kappa), mu(kappa).
struct NFParams {
    BigReal eta;  // 4 (19 kappa^2/576 - 3/128)
    BigReal mu;   // 2 (65 kappa^2/864 - 3/64)

    NFParams(const BigReal& kappa, const Precision& prec);
};

State4 vector_field(const State4& x, const ModelParams& p);
Mat4 jacobian(const State4& x, const ModelParams& p);
BigComplex hamiltonian(const State4& x, const ModelParams& p);

State4 involution(const State4& x);
inline Vec4 involution_tangent(const Vec4& v) { return involution(v); }

BigComplex symplectic_form(const Vec4& v, const Vec4& w);

// (q1,q2,p1,p2) = (u, du, -(du + d3u), u + d2u) from a scalar 3-jet.
State4 lift_scalar(const BigComplex& u, const BigComplex& du, const BigComplex& d2u,
                   const BigComplex& d3u);

} // namespace gshe
