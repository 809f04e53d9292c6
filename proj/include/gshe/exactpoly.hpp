#pragma once

// Exact multivariate polynomials over Q with sqrt(2) adjoined as a formal
// generator s (rewrite s^2 -> 2), in the variables q1, q2, p1, p2 and the
// symbols eps, kappa.  Used for the zero-tolerance normal-form checks.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gshe/errors.hpp"

namespace gshe {

enum Var : int { VQ1 = 0, VQ2 = 1, VP1 = 2, VP2 = 3, VEPS = 4, VKAPPA = 5, VSQRT2 = 6 };

using Mono = std::array<int8_t, 7>;

class ExactPoly {
  public:
    std::map<Mono, mpq_class> terms;

    ExactPoly() = default;
    static ExactPoly constant(const mpq_class& c);
    static ExactPoly variable(Var v);
    static ExactPoly monomial(const Mono& m, const mpq_class& c);

    bool is_zero() const { return terms.empty(); }

    ExactPoly& operator+=(const ExactPoly& o);
    ExactPoly& operator-=(const ExactPoly& o);
    friend ExactPoly operator+(ExactPoly a, const ExactPoly& b) { return a += b; }
    friend ExactPoly operator-(ExactPoly a, const ExactPoly& b) { return a -= b; }
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator*(const mpq_class& c, const ExactPoly& a);
    ExactPoly operator-() const { return mpq_class(-1) * *this; }

    ExactPoly derivative(Var v) const;

    // weighted grading: w(q) = 2, w(p) = 1, w(eps) = 2, w(kappa) = w(s) = 0
    static int weight(const Mono& m) {
        return 2 * (m[VQ1] + m[VQ2]) + m[VP1] + m[VP2] + 2 * m[VEPS];
    }
    int min_weight() const;
    ExactPoly truncate_weight(int wmax) const;     // keep weight <= wmax
    ExactPoly select_weight(int w) const;          // keep weight == w

    mpq_class coeff(const Mono& m) const;
    // collect the (eps, kappa, s)-polynomial multiplying a given q/p monomial
    ExactPoly coeff_of_qp(int q1, int q2, int p1, int p2) const;

    std::string str() const;
};

// {F, G} = sum_i dF/dq_i dG/dp_i - dF/dp_i dG/dq_i
ExactPoly poisson(const ExactPoly& f, const ExactPoly& g);

// exp(ad_F) H truncated at weighted degree wcut.  Monomials of F with
// weight <= 3 must be momentum-only so the series terminates.
ExactPoly lie_flow(const ExactPoly& h, const ExactPoly& f, int wcut);

ExactPoly parse_mpq(const std::string& num);  // helper for literals like "19/576"

} // namespace gshe
