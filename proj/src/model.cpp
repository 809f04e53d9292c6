#include "gshe/model.hpp"

namespace gshe {

SpectralData::SpectralData(const BigReal& epsilon, const Precision& prec)
    : alpha(prec.bits), beta(prec.bits), exp_factor(prec.bits) {
    BigReal one(1, prec.bits);
    BigReal s = sqrt(one - epsilon);  // sqrt(1 - eps)
    alpha = sqrt(2L * s + 2) / 2L;
    beta = sqrt(2L * s - 2) / 2L;
    if (beta.sgn() > 0) {
        exp_factor = exp(BigReal::pi(prec.bits) * alpha / (2L * beta));
    } else {
        mpfr_set_inf(exp_factor.raw(), 1);
    }
}

NFParams::NFParams(const BigReal& kappa, const Precision& prec)
    : eta(prec.bits), mu(prec.bits) {
    BigReal k2 = kappa * kappa;
    eta = 4L * (19L * k2 / 576 - BigReal(3, prec.bits) / 128);
    mu = 2L * (65L * k2 / 864 - BigReal(3, prec.bits) / 64);
}

State4 vector_field(const State4& x, const ModelParams& p) {
    State4 f;
    BigComplex q1sq = x.q1() * x.q1();
    f.q1() = x.q2();
    f.q2() = x.p2() - x.q1();
    f.p1() = x.p2() - p.epsilon * x.q1() - p.kappa * q1sq + q1sq * x.q1();
    f.p2() = -x.p1();
    return f;
}

Mat4 jacobian(const State4& x, const ModelParams& p) {
    const mpfr_prec_t bits = p.prec.bits;
    Mat4 m;
    for (auto& row : m)
        for (auto& e : row) e = BigComplex(bits);
    BigComplex one(BigReal(1, bits));
    m[0][1] = one;
    m[1][0] = -one;
    m[1][3] = one;
    // only (3,1) entry is state dependent: -eps - 2 kappa q1 + 3 q1^2
    m[2][0] = BigComplex(-p.epsilon) - 2L * (p.kappa * x.q1()) + 3L * (x.q1() * x.q1());
    m[2][3] = one;
    m[3][2] = -one;
    return m;
}

BigComplex hamiltonian(const State4& x, const ModelParams& p) {
    BigComplex q1sq = x.q1() * x.q1();
    return x.p1() * x.q2() - x.p2() * x.q1() + (x.p2() * x.p2()) / 2L +
           (p.epsilon * q1sq) / 2L + (p.kappa * (q1sq * x.q1())) / 3L -
           (q1sq * q1sq) / 4L;
}

State4 involution(const State4& x) {
    State4 s = x;
    s.q2() = -x.q2();
    s.p1() = -x.p1();
    return s;
}

BigComplex symplectic_form(const Vec4& v, const Vec4& w) {
    return v.q1() * w.p1() - v.p1() * w.q1() + v.q2() * w.p2() - v.p2() * w.q2();
}

State4 lift_scalar(const BigComplex& u, const BigComplex& du, const BigComplex& d2u,
                   const BigComplex& d3u) {
    State4 x;
    x.q1() = u;
    x.q2() = du;
    x.p1() = -(du + d3u);
    x.p2() = u + d2u;
    return x;
}

} // namespace gshe
