#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "gshe/inner.hpp"

using namespace gshe;

TEST_CASE("layer 1 equals P1 = i cos(phi)/sqrt(eta)") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    BigReal kappa(2, bits);
    InnerSeries s = compute_inner_series(kappa, 6, prec);
    NFParams nf(kappa, prec);
    BigReal expect = BigReal(1, bits) / (2L * sqrt(nf.eta));
    BigReal tol = BigReal::pow10(-25, bits);
    for (int j : {1, -1}) {
        CHECK(abs(s.ucoef(1, j).re) < tol);
        CHECK(abs(s.ucoef(1, j).im - expect) < tol);
    }
    CHECK(s.ucoef(1, 0).is_zero());
}

TEST_CASE("layer 2 equals P2 including the -kappa cos(2 phi)/(18 eta) and -kappa/(2 eta) terms") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    BigReal kappa(2, bits);
    InnerSeries s = compute_inner_series(kappa, 6, prec);
    NFParams nf(kappa, prec);
    BigReal tol = BigReal::pow10(-25, bits);

    BigReal const_term = -(kappa / (2L * nf.eta));
    CHECK(abs(s.ucoef(2, 0).re - const_term) < tol);
    CHECK(abs(s.ucoef(2, 0).im) < tol);

    BigReal cos2 = -(kappa / (36L * nf.eta));  // e^{+-2 i phi} share of -kappa cos(2 phi)/(18 eta)
    CHECK(abs(s.ucoef(2, 2).re - cos2) < tol);
    CHECK(abs(s.ucoef(2, -2).re - cos2) < tol);

    BigReal sin_coef = (BigReal(1, bits) / (2L * sqrt(nf.eta))) *
                       (nf.mu / nf.eta + BigReal(1, bits) / 2);
    CHECK(abs(s.ucoef(2, 1).re - sin_coef) < tol);
    CHECK(abs(s.ucoef(2, -1).re + sin_coef) < tol);
    CHECK(abs(s.ucoef(2, 1).im) < tol);
}

TEST_CASE("triangular Fourier support and conjugation symmetry of coefficients") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    InnerSeries s = compute_inner_series(BigReal(2, bits), 10, prec);
    BigReal tol = BigReal::pow10(-22, bits);
    for (int k = 1; k <= s.N; ++k) {
        BigReal scale(bits);
        for (int j = -k; j <= k; ++j) scale = max(scale, abs(s.ucoef(k, j)));
        for (int j = -k; j <= k; ++j) {
            // conj(u_{k,j}) = (-1)^k u_{k,j}: odd layers imaginary, even real
            const BigComplex& u = s.ucoef(k, j);
            if (k % 2 == 1) CHECK(abs(u.re) <= tol * scale);
            else CHECK(abs(u.im) <= tol * scale);
            // u_{k,-j} = (-1)^{k+j} u_{k,j}
            BigComplex mirror = s.ucoef(k, -j);
            BigComplex expect = ((k + j) % 2 == 0) ? u : -u;
            CHECK(abs(mirror - expect) <= tol * scale);
        }
    }
}

TEST_CASE("substitution residual vanishes through the truncation order") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    InnerSeries s = compute_inner_series(BigReal(2, bits), 8, prec);
    auto res = inner_residual(s, 8, 9);
    for (int n = 1; n <= 8; ++n) {
        for (const auto& c : res[n]) CHECK(abs(c) < BigReal::pow10(-22, bits));
    }
    BigReal tail(bits);
    for (const auto& c : res[9]) tail = max(tail, abs(c));
    CHECK(tail > BigReal(1, bits));  // orders > N are genuinely nonzero
}

TEST_CASE("one-term evaluation at phi=0, tau=-i sigma") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    BigReal kappa(2, bits);
    InnerSeries s = compute_inner_series(kappa, 6, prec);
    NFParams nf(kappa, prec);
    BigReal sigma(7, bits);
    BigComplex tau(BigReal(0, bits), -sigma);
    auto ev = s.eval(BigReal(0, bits), tau, 1);
    // q1 = (i cos 0/sqrt(eta)) / (-i sigma) = -1/(sigma sqrt(eta))
    BigReal expect = -(BigReal(1, bits) / (sigma * sqrt(nf.eta)));
    CHECK(abs(ev.x.q1().re - expect) < BigReal::pow10(-25, bits));
    CHECK(abs(ev.x.q1().im) < BigReal::pow10(-25, bits));
}

TEST_CASE("conjugation symmetry of evaluations") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    InnerSeries s = compute_inner_series(BigReal(2, bits), 10, prec);
    BigReal phi("0.37", bits);
    BigComplex tau(BigReal("3.2", bits), BigReal("-9.5", bits));
    auto a = s.eval(phi, tau, 10);
    BigComplex mtau_conj(-tau.re, tau.im);  // -conj(tau)
    auto b = s.eval(-phi, mtau_conj, 10);
    // componentwise: q1, p2 conjugate-even; q2, p1 conjugate-odd
    BigReal tol = BigReal::pow10(-24, bits);
    CHECK(abs(a.x.q1() - conj(b.x.q1())) < tol);
    CHECK(abs(a.x.p2() - conj(b.x.p2())) < tol);
    CHECK(abs(a.x.q2() + conj(b.x.q2())) < tol);
    CHECK(abs(a.x.p1() + conj(b.x.p1())) < tol);
}

TEST_CASE("residual of a truncated series scales like tau^-(n+1)") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    InnerSeries s = compute_inner_series(BigReal(2, bits), 9, prec);
    int n = 6;
    auto res = inner_residual(s, n, n + 2);
    BigReal lead(bits), next(bits);
    for (const auto& c : res[n + 1]) lead = max(lead, abs(c));
    for (const auto& c : res[n + 2]) next = max(next, abs(c));
    CHECK(lead > BigReal("1e-3", bits));
    // defect at tau vs 2 tau: ratio ~ 2^{n+1} up to the next-order correction
    BigReal t1(20, bits), t2(40, bits);
    BigReal d1 = lead / pow_si(t1, n + 1) + next / pow_si(t1, n + 2);
    BigReal d2 = lead / pow_si(t2, n + 1) + next / pow_si(t2, n + 2);
    BigReal ratio = d1 / d2;
    BigReal expect = pow_si(BigReal(2, bits), n + 1);
    CHECK(ratio > BigReal("0.8", bits) * expect);
    CHECK(ratio < BigReal("1.3", bits) * expect);
}

TEST_CASE("optimal truncation on synthetic profiles") {
    Precision prec(16);
    const mpfr_prec_t bits = prec.bits;
    // geometric coefficients |Gamma_k| = 1: monotone decay, n* = N
    InnerSeries synth;
    synth.prec = prec;
    synth.N = 12;
    synth.gamma_max.assign(13, BigReal(1, bits));
    auto [n1, e1] = synth.least_term(BigReal(3, bits));
    CHECK(n1 == 12);
    CHECK(e1 < BigReal(1, bits));
    // factorial coefficients: Stirling least term near k ~ |tau|
    for (int k = 1; k <= 12; ++k) {
        BigReal f(1, bits);
        for (int i = 2; i <= k; ++i) f *= BigReal(i, bits);
        synth.gamma_max[k] = f;
    }
    auto [n2, e2] = synth.least_term(BigReal(7, bits));
    CHECK(n2 >= 6);
    CHECK(n2 <= 8);
}

TEST_CASE("Gevrey growth of the lifted coefficients at kappa=2, D=60, N=45") {
    Precision prec(60);
    const mpfr_prec_t bits = prec.bits;
    InnerSeries s = compute_inner_series(BigReal(2, bits), 45, prec);
    // factorial growth: |Gamma_{k+1}|/(k |Gamma_k|) stays bounded around 1
    for (int k = 20; k < 45; ++k) {
        BigReal ratio = s.gamma_max[k + 1] / (BigReal(k, bits) * s.gamma_max[k]);
        CHECK(ratio > BigReal("0.5", bits));
        CHECK(ratio < BigReal("2.5", bits));
    }
    // dipping-then-rising least-term profile at a sigma-scale |tau|
    auto [nstar, est] = s.least_term(BigReal(40, bits));
    CHECK(nstar >= 30);
    CHECK(nstar <= 44);  // interior minimum, not the edge
    CHECK(est < BigReal::pow10(-12, bits));
    // at |tau| = 350 pi the profile is still monotone at k <= 45: the dip
    // sits near k ~ |tau|, far beyond the computed range
    auto lt2 = s.least_term(350L * BigReal::pi(bits));
    CHECK(lt2.first == 45);
    CHECK(lt2.second < BigReal::pow10(-70, bits));
}

TEST_CASE("cache round-trip reproduces bit-identical coefficients") {
    Precision prec(34);
    const mpfr_prec_t bits = prec.bits;
    BigReal kappa("1.7", bits);
    InnerSeries s = compute_inner_series(kappa, 7, prec);
    std::string path = "/tmp/gshe_test_inner_cache.txt";
    save_inner_series(s, path);
    auto loaded = try_load_inner_series(path, kappa, 7, prec);
    REQUIRE(loaded.has_value());
    for (int k = 1; k <= 7; ++k)
        for (int j = -k; j <= k; ++j) {
            CHECK(loaded->ucoef(k, j).re == s.ucoef(k, j).re);
            CHECK(loaded->ucoef(k, j).im == s.ucoef(k, j).im);
        }
    // stale caches at other digits or kappa are refused
    CHECK(!try_load_inner_series(path, kappa, 7, Precision(40)).has_value());
    CHECK(!try_load_inner_series(path, BigReal(2, bits), 7, prec).has_value());
    std::remove(path.c_str());
}
