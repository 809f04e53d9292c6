#pragma once

// Arbitrary-precision scalars shared by every pipeline.  BigReal wraps an
// mpfr_t (round-to-nearest everywhere, so identical inputs at identical
// precision give bit-identical results); BigComplex is a plain re/im pair.
// No double-precision shortcuts: everything downstream of a Precision is
// evaluated at its binary precision.

#include <mpfr.h>

#include <string>
#include <utility>

#include "gshe/errors.hpp"

namespace gshe {

class BigReal;

// Working-precision request: D decimal digits plus derived knobs used by the
// Taylor integrator (order max(22, floor(1.5 D)), local tolerance 10^-D).
struct Precision {
    int digits = 16;
    mpfr_prec_t bits = 0;       // ceil(D log2 10) + 32 guard bits
    int taylor_order = 22;

    Precision() : Precision(16) {}
    explicit Precision(int d);

    BigReal tol() const;        // 10^-digits, parsed as a decimal string
};

class BigReal {
  public:
    BigReal() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }
    explicit BigReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    BigReal(const std::string& s, mpfr_prec_t bits);
    BigReal(long n, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_si(v_, n, MPFR_RNDN); }

    BigReal(const BigReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigReal(BigReal&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigReal& operator=(BigReal&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigReal() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_neg() const { return mpfr_sgn(v_) < 0; }
    int sgn() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    // Minimal-digit decimal form that reparses bit-exactly at the same
    // precision (mpfr_get_str with n = 0).
    std::string to_string() const;
    // Exactly D significant digits; display/report form.
    std::string to_string_digits(int digits) const;

    static BigReal pi(mpfr_prec_t bits);
    static BigReal pow10(long k, mpfr_prec_t bits);   // 10^k from decimal string

    friend BigReal operator+(const BigReal& a, const BigReal& b) { return bin(mpfr_add, a, b); }
    friend BigReal operator-(const BigReal& a, const BigReal& b) { return bin(mpfr_sub, a, b); }
    friend BigReal operator*(const BigReal& a, const BigReal& b) { return bin(mpfr_mul, a, b); }
    friend BigReal operator/(const BigReal& a, const BigReal& b) { return bin(mpfr_div, a, b); }
    BigReal operator-() const { BigReal r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    BigReal& operator+=(const BigReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigReal& operator-=(const BigReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigReal& operator*=(const BigReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigReal& operator/=(const BigReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend BigReal operator*(long a, const BigReal& b) {
        BigReal r(b.prec());
        mpfr_mul_si(r.v_, b.v_, a, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(const BigReal& a, long b) {
        BigReal r(a.prec());
        mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator+(const BigReal& a, long b) {
        BigReal r(a.prec());
        mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a, long b) {
        BigReal r(a.prec());
        mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator!=(const BigReal& a, const BigReal& b) { return !mpfr_equal_p(a.v_, b.v_); }

  private:
    using mpfr_bin_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    static BigReal bin(mpfr_bin_fn f, const BigReal& a, const BigReal& b) {
        BigReal r(a.prec() > b.prec() ? a.prec() : b.prec());
        f(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    mpfr_t v_;
};

#define GSHE_MP_UNARY(name, mpfr_fn)                       \
    inline BigReal name(const BigReal& x) {                \
        BigReal r(x.prec());                               \
        mpfr_fn(r.raw(), x.raw(), MPFR_RNDN);              \
        return r;                                          \
    }
GSHE_MP_UNARY(abs, mpfr_abs)
GSHE_MP_UNARY(sqrt, mpfr_sqrt)
GSHE_MP_UNARY(exp, mpfr_exp)
GSHE_MP_UNARY(log, mpfr_log)
GSHE_MP_UNARY(log10, mpfr_log10)
GSHE_MP_UNARY(sin, mpfr_sin)
GSHE_MP_UNARY(cos, mpfr_cos)
GSHE_MP_UNARY(tan, mpfr_tan)
GSHE_MP_UNARY(atan, mpfr_atan)
GSHE_MP_UNARY(sinh, mpfr_sinh)
GSHE_MP_UNARY(cosh, mpfr_cosh)
GSHE_MP_UNARY(tanh, mpfr_tanh)
#undef GSHE_MP_UNARY

inline BigReal pow_si(const BigReal& x, long n) {
    BigReal r(x.prec());
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}
inline BigReal max(const BigReal& a, const BigReal& b) { return a >= b ? a : b; }
inline BigReal min(const BigReal& a, const BigReal& b) { return a <= b ? a : b; }

struct BigComplex {
    BigReal re, im;

    BigComplex() = default;
    explicit BigComplex(mpfr_prec_t bits) : re(bits), im(bits) {}
    BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
    explicit BigComplex(BigReal r) : re(std::move(r)), im(re.prec()) {}

    mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator*(const BigReal& a, const BigComplex& b) {
        return {a * b.re, a * b.im};
    }
    friend BigComplex operator*(long a, const BigComplex& b) { return {a * b.re, a * b.im}; }
    friend BigComplex operator/(const BigComplex& a, const BigReal& b) {
        return {a.re / b, a.im / b};
    }
    friend BigComplex operator/(const BigComplex& a, long b) { return {a.re / b, a.im / b}; }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        BigReal d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    BigComplex operator-() const { return {-re, -im}; }
    BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
    BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }

    // *this += a*b without temporaries beyond one scratch limb set.
    void add_mul(const BigComplex& a, const BigComplex& b);
    void sub_mul(const BigComplex& a, const BigComplex& b);
};

inline BigComplex conj(const BigComplex& z) { return {z.re, -z.im}; }
inline BigReal abs(const BigComplex& z) {
    BigReal r(z.prec());
    mpfr_hypot(r.raw(), z.re.raw(), z.im.raw(), MPFR_RNDN);
    return r;
}
// max(|re|,|im|): cheap norm for step-size control.
inline BigReal abs1(const BigComplex& z) {
    BigReal a = abs(z.re), b = abs(z.im);
    return a >= b ? a : b;
}
inline BigComplex exp(const BigComplex& z) {
    BigReal m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}
inline BigComplex cosh(const BigComplex& z) {
    return (exp(z) + exp(-z)) / 2L;
}
inline BigComplex sinh(const BigComplex& z) {
    return (exp(z) - exp(-z)) / 2L;
}
// unit complex e^{i t}
inline BigComplex cis(const BigReal& t) { return {cos(t), sin(t)}; }

std::string serialize(const BigReal& x);
BigReal parse_real(const std::string& s, mpfr_prec_t bits);

} // namespace gshe
