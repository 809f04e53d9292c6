#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gshe/linalg.hpp"
#include "gshe/mp.hpp"

using namespace gshe;

namespace {

// deterministic pseudo-random decimal strings; the generator, not the
// arithmetic, is allowed to use doubles
std::mt19937_64 rng(0x5eed);

BigReal random_real(mpfr_prec_t bits) {
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-12, 12);
    BigReal r(std::to_string(mant(rng)), bits);
    return r * BigReal::pow10(ex(rng), bits);
}

} // namespace

TEST_CASE("precision derived fields") {
    Precision p16(16);
    CHECK(p16.digits == 16);
    CHECK(p16.taylor_order == 24);
    CHECK(p16.bits == 54 + 32);  // ceil(16 log2 10) = 54
    Precision p14_would_be_invalid(16);
    CHECK_THROWS_AS(Precision(15), Error);
    Precision p60(60);
    CHECK(p60.taylor_order == 90);
    CHECK(p60.tol() == BigReal("1e-60", p60.bits));
    // taylor_order floor at 22: 1.5*14 = 21 < 22, but digits >= 16 so the
    // floor binds only through 1.5*16 = 24; order formula checked at 16
    CHECK(Precision(16).taylor_order >= 22);
}

TEST_CASE("serialization round-trip is exact") {
    Precision prec(30);
    for (int i = 0; i < 10000; ++i) {
        BigReal x = random_real(prec.bits);
        BigReal y = parse_real(serialize(x), prec.bits);
        CHECK(y == x);
    }
    // fixed digit formatting emits exactly D significant digits
    BigReal pi = BigReal::pi(prec.bits);
    std::string s = pi.to_string_digits(16);
    CHECK(s == "3.141592653589793e0");
}

TEST_CASE("determinism: identical inputs give identical bits") {
    Precision prec(40);
    BigReal a("1.7", prec.bits), b("-2.3", prec.bits);
    BigReal r1 = exp(a * b) / sqrt(abs(b));
    BigReal r2 = exp(a * b) / sqrt(abs(b));
    CHECK(serialize(r1) == serialize(r2));
}

TEST_CASE("solve2x2 identity and diagonal") {
    Precision prec(30);
    auto C = [&](long v) { return BigComplex(BigReal(v, prec.bits)); };
    Mat2 ident{C(1), C(0), C(0), C(1)};
    Vec2 r = solve2x2(ident, {C(3), C(5)}, prec);
    CHECK(r.x.re == BigReal(3, prec.bits));
    CHECK(r.y.re == BigReal(5, prec.bits));

    Mat2 diag{C(2), C(0), C(0), C(4)};
    Vec2 d = solve2x2(diag, {C(2), C(2)}, prec);
    CHECK(d.x.re == BigReal(1, prec.bits));
    CHECK(d.y.re == BigReal("0.5", prec.bits));

    Mat2 sing{C(1), C(2), C(2), C(4)};
    CHECK_THROWS_AS(solve2x2(sing, {C(1), C(1)}, prec), SingularMatrix);
}

TEST_CASE("solve2x2 residual on random well-conditioned systems at D=30") {
    Precision prec(30);
    BigReal tol = BigReal::pow10(-26, prec.bits);
    for (int trial = 0; trial < 50; ++trial) {
        Mat2 m;
        BigComplex* es[4] = {&m.a, &m.b, &m.c, &m.d};
        for (auto* e : es) *e = BigComplex(random_real(prec.bits), random_real(prec.bits));
        // keep it well conditioned: bump the diagonal
        m.a += BigComplex(BigReal::pow10(13, prec.bits));
        m.d += BigComplex(BigReal::pow10(13, prec.bits));
        Vec2 rhs{BigComplex(random_real(prec.bits), random_real(prec.bits)),
                 BigComplex(random_real(prec.bits), random_real(prec.bits))};
        Vec2 x = solve2x2(m, rhs, prec);
        BigComplex r1 = m.a * x.x + m.b * x.y - rhs.x;
        BigComplex r2 = m.c * x.x + m.d * x.y - rhs.y;
        BigReal scale = max(abs(rhs.x), abs(rhs.y)) + abs(m.a) * max(abs(x.x), abs(x.y));
        CHECK(abs(r1) <= tol * scale);
        CHECK(abs(r2) <= tol * scale);
    }
}

TEST_CASE("least squares recovers exact models") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    std::vector<std::function<BigReal(const BigReal&)>> basis = {
        [&](const BigReal&) { return BigReal(1, bits); },
        [](const BigReal& x) { return exp(-x); },
    };
    std::vector<std::pair<BigReal, BigReal>> pts;
    for (long i = 1; i <= 6; ++i) {
        BigReal x(i, bits);
        pts.emplace_back(x, BigReal(2, bits) + 3L * exp(-x));
    }
    auto c = least_squares_fit(basis, pts, prec);
    BigReal tol = BigReal::pow10(-25, bits);
    CHECK(abs(c[0] - BigReal(2, bits)) < tol);
    CHECK(abs(c[1] - BigReal(3, bits)) < tol);

    std::vector<std::function<BigReal(const BigReal&)>> basis2 = {
        [&](const BigReal& x) { return BigReal(1, bits) / (x * x); },
    };
    std::vector<std::pair<BigReal, BigReal>> pts2;
    for (long i = 1; i <= 5; ++i) {
        BigReal x(i, bits);
        pts2.emplace_back(x, BigReal(5, bits) / (x * x));
    }
    auto c2 = least_squares_fit(basis2, pts2, prec);
    CHECK(abs(c2[0] - BigReal(5, bits)) < tol);
}

TEST_CASE("vandermonde interpolation: exact polynomials") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    std::vector<std::pair<BigReal, BigReal>> pts;
    for (long i = 0; i < 2; ++i) {
        BigReal x(i + 1, bits);
        pts.emplace_back(x, BigReal(1, bits) + 2L * x);
    }
    auto c = vandermonde_interpolate(pts, 1, prec);
    BigReal tol = BigReal::pow10(-26, bits);
    CHECK(abs(c[0] - BigReal(1, bits)) < tol);
    CHECK(abs(c[1] - BigReal(2, bits)) < tol);

    std::vector<std::pair<BigReal, BigReal>> pts3;
    for (long i = 0; i < 4; ++i) {
        BigReal x(i + 1, bits);
        pts3.emplace_back(x, x * x * x);
    }
    auto c3 = vandermonde_interpolate(pts3, 3, prec);
    CHECK(abs(c3[0]) < 100L * tol);
    CHECK(abs(c3[1]) < 100L * tol);
    CHECK(abs(c3[2]) < 100L * tol);
    CHECK(abs(c3[3] - BigReal(1, bits)) < 100L * tol);

    auto dup = pts3;
    dup[2].first = dup[0].first;
    CHECK_THROWS_AS(vandermonde_interpolate(dup, 3, prec), DuplicateAbscissa);
}

TEST_CASE("vandermonde recovers Table-3-like degree-5 coefficients at D=40") {
    Precision prec(40);
    const mpfr_prec_t bits = prec.bits;
    // synthetic points generated from the polynomial itself
    std::vector<BigReal> ref = {
        BigReal("10.4721619569443983", bits), BigReal("8.9799431275210", bits),
        BigReal("-42.601100432", bits),       BigReal("152.887958", bits),
        BigReal("-774.3944", bits),           BigReal("3813.8", bits)};
    std::vector<std::pair<BigReal, BigReal>> pts;
    for (long i = 0; i < 6; ++i) {
        BigReal eps = BigReal("-0.0014", bits) - BigReal("0.0001", bits) * BigReal(i, bits);
        BigReal y(bits);
        for (size_t k = ref.size(); k-- > 0;) y = y * eps + ref[k];
        pts.emplace_back(eps, y);
    }
    auto c = vandermonde_interpolate(pts, 5, prec);
    for (size_t k = 0; k < ref.size(); ++k) {
        BigReal rel = abs(c[k] - ref[k]) / abs(ref[k]);
        CHECK(rel < BigReal::pow10(-10, bits));  // >= 10 recovered digits
    }
}

TEST_CASE("precision monotonicity on a fixed rational problem") {
    // solve the same exact-rational 2x2 at D and D+10; results agree to D-4
    auto solve_at = [&](int digits) {
        Precision prec(digits);
        auto C = [&](const char* v) { return BigComplex(BigReal(v, prec.bits)); };
        Mat2 m{C("3.25"), C("-1.5"), C("0.125"), C("2.75")};
        Vec2 r = solve2x2(m, {C("1.1"), C("-2.2")}, prec);
        return r;
    };
    Vec2 a = solve_at(30), b = solve_at(40);
    Precision p40(40);
    BigReal diff = abs(a.x - b.x) + abs(a.y - b.y);
    CHECK(diff < BigReal::pow10(-26, p40.bits));
}
