#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gshe/taylor.hpp"

using namespace gshe;

namespace {

State4 state(mpfr_prec_t bits, const char* a, const char* b, const char* c, const char* d) {
    State4 x(bits);
    x.q1() = BigComplex(BigReal(a, bits));
    x.q2() = BigComplex(BigReal(b, bits));
    x.p1() = BigComplex(BigReal(c, bits));
    x.p2() = BigComplex(BigReal(d, bits));
    return x;
}

} // namespace

TEST_CASE("jet at an equilibrium has vanishing higher coefficients") {
    Precision prec(16);
    ModelParams p(BigReal(2, prec.bits), BigReal("-0.05", prec.bits), prec);
    Jet j = jet_expand(State4(prec.bits), {}, p, prec.taylor_order);
    for (int c = 0; c < 4; ++c)
        for (int m = 1; m <= j.order; ++m) CHECK(j.x[c][m].is_zero());
    CHECK_THROWS_AS(step_size(j, prec.tol()), DegenerateJet);
}

TEST_CASE("first jet coefficient equals the vector field") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    ModelParams p(BigReal(2, bits), BigReal("-0.02", bits), prec);
    State4 x0 = state(bits, "0.3", "-0.1", "0.2", "0.7");
    Jet j = jet_expand(x0, {}, p, prec.taylor_order);
    State4 f = vector_field(x0, p);
    for (int c = 0; c < 4; ++c) CHECK(abs(j.x[c][1] - f[c]) < BigReal::pow10(-28, bits));
}

TEST_CASE("linear subsystem jet reproduces the matrix exponential series") {
    // kappa = 0, eps = 0 and q1(0) = 0: the only nonlinearity left is q1^3,
    // whose jet stream is zero through order 2, so the cubic first feeds
    // p1' at order 3, i.e. p1[4]; coefficients of orders <= 3 must equal the
    // exp(tA) x0 series with A the jacobian at the origin.
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    ModelParams p(BigReal(0, bits), BigReal(0, bits), prec);
    State4 y0 = state(bits, "0", "0.4", "-0.2", "0.3");
    int M = 18;
    Jet jy = jet_expand(y0, {}, p, M);

    Mat4 A = jacobian(State4(bits), p);
    std::vector<State4> cy(M + 1, State4(bits));
    cy[0] = y0;
    for (int m = 0; m < M; ++m) {
        State4 t = mat_vec(A, cy[m]);
        for (int k = 0; k < 4; ++k) cy[m + 1][k] = t[k] / static_cast<long>(m + 1);
    }
    for (int m = 0; m <= 3; ++m)
        for (int c = 0; c < 4; ++c)
            CHECK(abs(jy.x[c][m] - cy[m][c]) < BigReal::pow10(-25, bits));
    // and the cubic correction indeed shows up at p1[4]
    CHECK(abs(jy.x[2][4] - cy[4][2]) > BigReal::pow10(-6, bits));
}

TEST_CASE("step size homogeneity and tolerance scaling") {
    Precision prec(16);
    const mpfr_prec_t bits = prec.bits;
    ModelParams p(BigReal(2, bits), BigReal("-0.05", bits), prec);
    State4 x0 = state(bits, "0.4", "0.1", "-0.2", "0.3");
    Jet j = jet_expand(x0, {}, p, prec.taylor_order);
    BigReal tol = prec.tol();
    BigReal h1 = step_size(j, tol);

    // scaling the trailing coefficients by 2^m halves h (up to the cap)
    Jet j2 = j;
    BigReal two(2, bits);
    for (int c = 0; c < 4; ++c)
        for (int m = 0; m <= j2.order; ++m) j2.x[c][m] = pow_si(two, m) * j2.x[c][m];
    BigReal h2 = step_size(j2, tol);
    CHECK(abs(h2 - h1 / 2) < BigReal("1e-12", bits) * h1);

    // tol -> tol/10^M multiplies h by ~ 10^-1
    BigReal h3 = step_size(j, tol * BigReal::pow10(-j.order, bits));
    BigReal ratio = h3 / h1;
    CHECK(ratio > BigReal("0.08", bits));
    CHECK(ratio < BigReal("0.13", bits));
}

TEST_CASE("flow: zero time, back-and-forth, reversibility") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    // loop-scale amplitudes: the saddle-focus ejects anything larger
    ModelParams p(BigReal(2, bits), BigReal("-0.05", bits), prec);
    State4 x0 = state(bits, "0.02", "0.005", "-0.04", "0.02");
    Vec4 v0 = state(bits, "1", "0", "0", "0");

    FlowResult f0 = flow(x0, {v0}, BigReal(0, bits), p);
    for (int c = 0; c < 4; ++c) CHECK(f0.x_end[c].re == x0[c].re);
    CHECK(f0.steps == 0);

    BigReal T(12, bits);
    BigReal tol = BigReal::pow10(-26, bits);
    FlowResult fwd = flow(x0, {v0}, T, p);
    FlowResult back = flow(fwd.x_end, fwd.tangents_end, -T, p);
    for (int c = 0; c < 4; ++c) CHECK(abs(back.x_end[c] - x0[c]) < tol);
    for (int c = 0; c < 4; ++c) CHECK(abs(back.tangents_end[0][c] - v0[c]) < 100L * tol);

    // S(flow(S x0, t)) = flow(x0, -t)
    FlowResult a = flow(involution(x0), {}, T, p);
    FlowResult b = flow(x0, {}, -T, p);
    State4 sa = involution(a.x_end);
    for (int c = 0; c < 4; ++c) CHECK(abs(sa[c] - b.x_end[c]) < tol);
}

TEST_CASE("energy conservation over long spans") {
    for (int digits : {16, 28, 60}) {
        Precision prec(digits);
        const mpfr_prec_t bits = prec.bits;
        // eps = 0: the equilibrium is stable for kappa > kappa0, so this
        // small orbit stays bounded over the full d-scale span
        ModelParams p(BigReal(2, bits), BigReal(0, bits), prec);
        State4 x0 = state(bits, "0.05", "0.01", "-0.02", "0.04");
        BigComplex h0 = hamiltonian(x0, p);
        BigReal span(1200, bits);
        FlowResult f = flow(x0, {}, span, p);
        BigComplex h1 = hamiltonian(f.x_end, p);
        BigReal drift = abs(h1 - h0) / (BigReal(1, bits) + abs(h0));
        CHECK(drift <= BigReal::pow10(-digits + 4, bits));
    }
}

TEST_CASE("symplectic pairing of two variational solutions is constant") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    ModelParams p(BigReal(2, bits), BigReal(0, bits), prec);
    State4 x0 = state(bits, "0.05", "0.02", "-0.03", "0.04");
    Vec4 v1 = state(bits, "1", "0.2", "0", "-0.4");
    Vec4 v2 = state(bits, "0", "1", "0.7", "0.1");
    BigComplex om0 = symplectic_form(v1, v2);
    FlowResult f = flow(x0, {v1, v2}, BigReal(40, bits), p);
    BigComplex om1 = symplectic_form(f.tangents_end[0], f.tangents_end[1]);
    CHECK(abs(om1 - om0) <= BigReal::pow10(-26, bits) * abs(om0));
}

TEST_CASE("endpoint agrees with a step-halved cross-check at higher digits") {
    // independent oracle: same jets but forced h -> h/2 via a tighter tol
    // at D+10 digits; endpoint must match to >= D-2 digits on t in [0, 10]
    Precision prec(16);
    const mpfr_prec_t bits16 = prec.bits;
    ModelParams p16(BigReal(2, bits16), BigReal(0, bits16), prec);
    State4 x16 = state(bits16, "0.03", "0.01", "-0.01", "0.035");
    FlowResult f16 = flow(x16, {}, BigReal(10, bits16), p16);

    Precision prec26(26);
    const mpfr_prec_t bits26 = prec26.bits;
    ModelParams p26(BigReal(2, bits26), BigReal(0, bits26), prec26);
    State4 x26 = state(bits26, "0.03", "0.01", "-0.01", "0.035");
    FlowResult f26 = flow(x26, {}, BigReal(10, bits26), p26);
    for (int c = 0; c < 4; ++c)
        CHECK(abs(BigReal(f16.x_end[c].re) - f26.x_end[c].re) < BigReal::pow10(-14, bits26));
}

TEST_CASE("per-step defect stays below 10 tol on a homoclinic-scale orbit") {
    Precision prec(16);
    const mpfr_prec_t bits = prec.bits;
    ModelParams p(BigReal(2, bits), BigReal(0, bits), prec);
    State4 x0 = state(bits, "0.05", "0.015", "-0.02", "0.045");
    BigReal tol = prec.tol();
    BigReal cap = 10L * tol;
    int checked = 0;
    FlowOptions fo;
    fo.on_step = [&](const Jet& jet, const BigReal&, const BigReal& h) {
        if (checked >= 40) return;
        // defect at the endpoint: | d/dt jet(h) - X_H(jet(h)) |
        State4 xe = eval_jet(jet, h);
        State4 deriv(bits);
        for (int c = 0; c < 4; ++c) {
            BigComplex acc = BigReal(static_cast<long>(jet.order), bits) * jet.x[c][jet.order];
            for (int m = jet.order - 1; m >= 1; --m)
                acc = h * acc + BigReal(static_cast<long>(m), bits) * jet.x[c][m];
            deriv[c] = acc;
        }
        State4 f = vector_field(xe, p);
        BigReal d(bits);
        for (int c = 0; c < 4; ++c) d = max(d, abs(deriv[c] - f[c]));
        CHECK(d < cap);
        ++checked;
    };
    flow(x0, {}, BigReal(30, bits), p, fo);
    CHECK(checked > 0);
}
