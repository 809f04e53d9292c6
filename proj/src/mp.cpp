#include "gshe/mp.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace gshe {

Precision::Precision(int d) : digits(d) {
    if (d < 16) throw Error("Precision: digits must be >= 16");
    bits = static_cast<mpfr_prec_t>(std::ceil(d * 3.32192809488736235)) + 32;
    int order = d + d / 2;  // floor(1.5 D)
    taylor_order = order < 22 ? 22 : order;
}

BigReal Precision::tol() const {
    return BigReal::pow10(-digits, bits);
}

BigReal::BigReal(const std::string& s, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(v_))
        throw Error("BigReal: cannot parse '" + s + "'");
}

BigReal BigReal::pi(mpfr_prec_t bits) {
    BigReal r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

BigReal BigReal::pow10(long k, mpfr_prec_t bits) {
    return BigReal("1e" + std::to_string(k), bits);
}

namespace {

std::string format_mpfr(mpfr_srcptr v, size_t ndigits) {
    if (mpfr_nan_p(v)) return "nan";
    if (mpfr_inf_p(v)) return mpfr_sgn(v) < 0 ? "-inf" : "inf";
    if (mpfr_zero_p(v)) {
        std::string z = "0.";
        z.append(ndigits > 1 ? ndigits - 1 : 1, '0');
        return z + "e0";
    }
    mpfr_exp_t e;
    char* raw = mpfr_get_str(nullptr, &e, 10, ndigits, v, MPFR_RNDN);
    std::string digits(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!digits.empty() && digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
    }
    // mpfr convention: value = 0.digits * 10^e; emit d.ddd e(e-1)
    std::string out = sign + digits.substr(0, 1) + "." +
                      (digits.size() > 1 ? digits.substr(1) : "0") + "e" +
                      std::to_string(static_cast<long>(e) - 1);
    return out;
}

} // namespace

std::string BigReal::to_string() const {
    return format_mpfr(v_, 0);
}

std::string BigReal::to_string_digits(int digits) const {
    return format_mpfr(v_, digits < 2 ? 2 : static_cast<size_t>(digits));
}

std::string serialize(const BigReal& x) { return x.to_string(); }

BigReal parse_real(const std::string& s, mpfr_prec_t bits) { return BigReal(s, bits); }

namespace {
// Scratch registers for fused complex accumulation; reused across calls.
struct Scratch {
    mpfr_t t;
    Scratch() { mpfr_init2(t, 64); }
    ~Scratch() { mpfr_clear(t); }
    mpfr_ptr at(mpfr_prec_t p) {
        if (mpfr_get_prec(t) != p) mpfr_set_prec(t, p);
        return t;
    }
};
thread_local Scratch scratch_;
} // namespace

void BigComplex::add_mul(const BigComplex& a, const BigComplex& b) {
    mpfr_prec_t p = prec() > a.prec() ? prec() : a.prec();
    if (b.prec() > p) p = b.prec();
    mpfr_ptr t = scratch_.at(p);
    mpfr_mul(t, a.re.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_add(re.raw(), re.raw(), t, MPFR_RNDN);
    mpfr_mul(t, a.im.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_sub(re.raw(), re.raw(), t, MPFR_RNDN);
    mpfr_mul(t, a.re.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_add(im.raw(), im.raw(), t, MPFR_RNDN);
    mpfr_mul(t, a.im.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_add(im.raw(), im.raw(), t, MPFR_RNDN);
}

void BigComplex::sub_mul(const BigComplex& a, const BigComplex& b) {
    mpfr_prec_t p = prec() > a.prec() ? prec() : a.prec();
    if (b.prec() > p) p = b.prec();
    mpfr_ptr t = scratch_.at(p);
    mpfr_mul(t, a.re.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_sub(re.raw(), re.raw(), t, MPFR_RNDN);
    mpfr_mul(t, a.im.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_add(re.raw(), re.raw(), t, MPFR_RNDN);
    mpfr_mul(t, a.re.raw(), b.im.raw(), MPFR_RNDN);
    mpfr_sub(im.raw(), im.raw(), t, MPFR_RNDN);
    mpfr_mul(t, a.im.raw(), b.re.raw(), MPFR_RNDN);
    mpfr_sub(im.raw(), im.raw(), t, MPFR_RNDN);
}

} // namespace gshe
