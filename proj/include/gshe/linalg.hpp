#pragma once

// Small dense helpers shared by the pipelines: the 4-vector state, 2x2
// solves for Newton steps and resonance closures, least squares for the
// roundoff-model fits, and exact polynomial interpolation in epsilon.

#include <array>
#include <functional>
#include <vector>

#include "gshe/mp.hpp"

namespace gshe {

// Phase-space vector, component order (q1, q2, p1, p2) fixed repo-wide.
struct Vec4 {
    std::array<BigComplex, 4> c;

    Vec4() = default;
    explicit Vec4(mpfr_prec_t bits)
        : c{BigComplex(bits), BigComplex(bits), BigComplex(bits), BigComplex(bits)} {}

    BigComplex& q1() { return c[0]; }
    BigComplex& q2() { return c[1]; }
    BigComplex& p1() { return c[2]; }
    BigComplex& p2() { return c[3]; }
    const BigComplex& q1() const { return c[0]; }
    const BigComplex& q2() const { return c[1]; }
    const BigComplex& p1() const { return c[2]; }
    const BigComplex& p2() const { return c[3]; }
    BigComplex& operator[](int i) { return c[i]; }
    const BigComplex& operator[](int i) const { return c[i]; }

    friend Vec4 operator+(const Vec4& a, const Vec4& b) {
        Vec4 r;
        for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
        return r;
    }
    friend Vec4 operator-(const Vec4& a, const Vec4& b) {
        Vec4 r;
        for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] - b.c[i];
        return r;
    }
    friend Vec4 operator*(const BigComplex& s, const Vec4& a) {
        Vec4 r;
        for (int i = 0; i < 4; ++i) r.c[i] = s * a.c[i];
        return r;
    }
    friend Vec4 operator*(const BigReal& s, const Vec4& a) {
        Vec4 r;
        for (int i = 0; i < 4; ++i) r.c[i] = s * a.c[i];
        return r;
    }
    friend Vec4 operator/(const Vec4& a, const BigComplex& s) {
        Vec4 r;
        for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] / s;
        return r;
    }
    Vec4 operator-() const {
        Vec4 r;
        for (int i = 0; i < 4; ++i) r.c[i] = -c[i];
        return r;
    }
};

using State4 = Vec4;

inline BigReal norm_inf(const Vec4& v) {
    BigReal m = abs(v.c[0]);
    for (int i = 1; i < 4; ++i) m = max(m, abs(v.c[i]));
    return m;
}

using Mat4 = std::array<std::array<BigComplex, 4>, 4>;

inline Vec4 mat_vec(const Mat4& m, const Vec4& v) {
    Vec4 r;
    for (int i = 0; i < 4; ++i) {
        BigComplex s(v.c[0].prec());
        for (int j = 0; j < 4; ++j) s.add_mul(m[i][j], v.c[j]);
        r.c[i] = s;
    }
    return r;
}

struct Mat2 {
    BigComplex a, b, c, d;  // [[a, b], [c, d]]
};
struct Vec2 {
    BigComplex x, y;
};

// Cramer solve; SingularMatrix when |det| <= 10^(-digits+4) * max row norm.
Vec2 solve2x2(const Mat2& m, const Vec2& rhs, const Precision& prec);

// Linear least squares over <= 2 basis functions via normal equations.
std::vector<BigReal> least_squares_fit(const std::vector<std::function<BigReal(const BigReal&)>>& basis,
                                       const std::vector<std::pair<BigReal, BigReal>>& samples,
                                       const Precision& prec);

// Unique degree-n interpolating polynomial through n+1 points, coefficients
// in ascending powers.  Newton divided differences expanded to monomials.
std::vector<BigReal> vandermonde_interpolate(const std::vector<std::pair<BigReal, BigReal>>& points,
                                             int degree, const Precision& prec);

} // namespace gshe
