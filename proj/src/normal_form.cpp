#include "gshe/normal_form.hpp"

#include <ostream>

#include "gshe/model.hpp"

namespace gshe {

namespace {

ExactPoly term(const std::string& coeff, int q1, int q2, int p1, int p2, int eps = 0,
               int kappa = 0, int s = 0) {
    Mono m{static_cast<int8_t>(q1),  static_cast<int8_t>(q2),    static_cast<int8_t>(p1),
           static_cast<int8_t>(p2),  static_cast<int8_t>(eps),   static_cast<int8_t>(kappa),
           static_cast<int8_t>(s)};
    mpq_class c(coeff);
    c.canonicalize();
    return ExactPoly::monomial(m, c);
}

} // namespace

ExactPoly gshe_hamiltonian_exact() {
    ExactPoly h;
    h += term("1", 0, 1, 1, 0);        // p1 q2
    h -= term("1", 1, 0, 0, 1);        // -p2 q1
    h += term("1/2", 0, 0, 0, 2);      // p2^2/2
    h += term("1/2", 2, 0, 0, 0, 1);   // eps q1^2/2
    h += term("1/3", 3, 0, 0, 0, 0, 1);  // kappa q1^3/3
    h -= term("1/4", 4, 0, 0, 0);      // -q1^4/4
    return h;
}

std::array<std::array<ExactPoly, 4>, 4> reduction_matrix() {
    auto e = [](const std::string& c) { return term(c, 0, 0, 0, 0, 0, 0, 1); };  // c * sqrt(2)
    std::array<std::array<ExactPoly, 4>, 4> t;
    t[0][1] = e("-1/4");
    t[0][2] = e("-1/2");
    t[1][0] = e("1/4");
    t[1][3] = e("1/2");
    t[2][0] = e("1");
    t[3][1] = e("-1");
    return t;
}

ExactPoly linear_reduce(const ExactPoly& h) {
    auto t = reduction_matrix();

    // exact symplecticity: sum_{a,b} T_{a,i} J_{a,b} T_{b,j} = J_{i,j}
    static const int J[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            ExactPoly acc;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    if (J[a][b] == 0) continue;
                    acc += mpq_class(J[a][b]) * (t[a][i] * t[b][j]);
                }
            acc -= ExactPoly::constant(mpq_class(J[i][j]));
            if (!acc.is_zero()) throw NotSymplectic("T^T J T != J at entry " + std::to_string(i) +
                                                    "," + std::to_string(j));
        }

    // substitute x_i -> sum_j T_{i,j} x_j
    std::array<ExactPoly, 4> lin;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            lin[i] += t[i][j] * ExactPoly::variable(static_cast<Var>(j));

    // powers up to the maximal degree in h
    int maxdeg[4] = {0, 0, 0, 0};
    for (const auto& [m, c] : h.terms)
        for (int v = 0; v < 4; ++v) maxdeg[v] = std::max(maxdeg[v], static_cast<int>(m[v]));
    std::array<std::vector<ExactPoly>, 4> pw;
    for (int v = 0; v < 4; ++v) {
        pw[v].push_back(ExactPoly::constant(1));
        for (int d = 1; d <= maxdeg[v]; ++d) pw[v].push_back(pw[v].back() * lin[v]);
    }

    ExactPoly out;
    for (const auto& [m, c] : h.terms) {
        Mono rest{0, 0, 0, 0, m[VEPS], m[VKAPPA], m[VSQRT2]};
        ExactPoly t2 = ExactPoly::monomial(rest, c);
        for (int v = 0; v < 4; ++v)
            if (m[v] > 0) t2 = t2 * pw[v][m[v]];
        out += t2;
    }
    return out;
}

std::array<ExactPoly, 5> lie_generators() {
    std::array<ExactPoly, 5> f;
    // F0 = eps(-5/32 q1 p1 + 3/32 q2 p2 + 1/8 p1 p2)
    f[0] += term("-5/32", 1, 0, 1, 0, 1);
    f[0] += term("3/32", 0, 1, 0, 1, 1);
    f[0] += term("1/8", 0, 0, 1, 1, 1);
    // F1 = kappa sqrt(2) (7/216 q1^2 p2 + 95/216 q1 q2 p1 + 17/72 q1 p1^2
    //      + 5/36 q1 p2^2 + 175/432 q2^2 p2 + 1/36 q2 p1 p2
    //      - 1/12 p1^2 p2 - 1/18 p2^3)
    f[1] += term("7/216", 2, 0, 0, 1, 0, 1, 1);
    f[1] += term("95/216", 1, 1, 1, 0, 0, 1, 1);
    f[1] += term("17/72", 1, 0, 2, 0, 0, 1, 1);
    f[1] += term("5/36", 1, 0, 0, 2, 0, 1, 1);
    f[1] += term("175/432", 0, 2, 0, 1, 0, 1, 1);
    f[1] += term("1/36", 0, 1, 1, 1, 0, 1, 1);
    f[1] += term("-1/12", 0, 0, 2, 1, 0, 1, 1);
    f[1] += term("-1/18", 0, 0, 0, 3, 0, 1, 1);
    // F2: quartic, coefficients quadratic in kappa
    f[2] += term("-517/20736", 1, 0, 3, 0, 0, 2) + term("29/512", 1, 0, 3, 0);
    f[2] += term("-217/20736", 1, 0, 1, 2, 0, 2) + term("17/512", 1, 0, 1, 2);
    f[2] += term("2327/20736", 0, 1, 2, 1, 0, 2) + term("-31/512", 0, 1, 2, 1);
    f[2] += term("2027/20736", 0, 1, 0, 3, 0, 2) + term("-19/512", 0, 1, 0, 3);
    f[2] += term("7/192", 0, 0, 3, 1, 0, 2) + term("-5/128", 0, 0, 3, 1);
    f[2] += term("19/576", 0, 0, 1, 3, 0, 2) + term("-3/128", 0, 0, 1, 3);
    // F3 = eps kappa sqrt(2) (-143/1152 p1^2 p2 - 167/1728 p2^3)
    f[3] += term("-143/1152", 0, 0, 2, 1, 1, 1, 1);
    f[3] += term("-167/1728", 0, 0, 0, 3, 1, 1, 1);
    // F4: sqrt(2) kappa quintics.  The kappa^1 parts follow the printed
    // -2/1215 (.. - 27) p2^5, -1/648 (.. - 45) p1^4 p2, -1/243 (.. - 27)
    // p1^2 p2^3; the printed kappa^3 parts leave a weight-5 defect
    // ((2/243) p1 p2^4 + (8/243) p1^3 p2^2 + (13/486) p1^5) kappa^3 sqrt2,
    // and the homological equation {I1, dF4} = defect has the unique
    // solution that rescales all three kappa^3 coefficients by 2/3.
    f[4] += term("-148/3645", 0, 0, 0, 5, 0, 3, 1) + term("54/1215", 0, 0, 0, 5, 0, 1, 1);
    f[4] += term("-13/243", 0, 0, 4, 1, 0, 3, 1) + term("45/648", 0, 0, 4, 1, 0, 1, 1);
    f[4] += term("-68/729", 0, 0, 2, 3, 0, 3, 1) + term("27/243", 0, 0, 2, 3, 0, 1, 1);
    return f;
}

ExactPoly invariant_I(int which) {
    switch (which) {
        case 1: return term("1", 0, 1, 1, 0) - term("1", 1, 0, 0, 1);
        case 2: return term("1", 2, 0, 0, 0) + term("1", 0, 2, 0, 0);
        case 3: return term("1", 0, 0, 2, 0) + term("1", 0, 0, 0, 2);
        default: throw Error("invariant_I: which must be 1..3");
    }
}

NormalFormReport psi5_normalize(int wcut) {
    NormalFormReport rep;
    rep.h2 = linear_reduce(gshe_hamiltonian_exact());
    auto f = lie_generators();
    int winternal = wcut + 3;
    ExactPoly h = rep.h2.truncate_weight(winternal);
    for (int i = 0; i < 5; ++i) h = lie_flow(h, f[i], winternal);
    rep.h5 = h;

    ExactPoly h_low = h.truncate_weight(wcut);
    rep.eta = mpq_class(4) * h_low.coeff_of_qp(0, 0, 4, 0);
    rep.mu = mpq_class(2) * h_low.coeff_of_qp(0, 1, 3, 0);

    ExactPoly i1 = invariant_I(1), i2 = invariant_I(2), i3 = invariant_I(3);
    ExactPoly eps = ExactPoly::variable(VEPS);
    ExactPoly target = mpq_class(-1) * i1 + mpq_class(1, 2) * i2 + mpq_class(1, 8) * (eps * i3) +
                       mpq_class(1, 4) * (rep.eta * (i3 * i3)) + mpq_class(1, 8) * (eps * i1) +
                       mpq_class(1, 2) * (rep.mu * (i1 * i3));
    rep.residual = (h - target).truncate_weight(wcut);
    if (!rep.residual.is_zero())
        throw NormalizationMismatch("residual monomials of weight <= " + std::to_string(wcut) +
                                    ": " + rep.residual.str());
    return rep;
}

NFSeparatrix nf_separatrix(const BigReal& delta, const BigReal& kappa, const BigReal& phi,
                           const BigComplex& z, const Precision& prec) {
    const mpfr_prec_t bits = prec.bits;
    NFParams nf(kappa, prec);
    if (!(nf.eta.sgn() > 0)) throw Error("nf_separatrix: eta must be positive");
    BigReal sq2e = sqrt(2L * (BigReal(1, bits) / nf.eta));
    BigComplex ch = cosh(z);
    BigComplex sh = sinh(z);
    BigComplex ch2 = ch * ch;

    NFSeparatrix out;
    out.r5 = BigComplex(sq2e) / ch;
    out.R5 = sq2e * (sh / ch2);
    out.theta5 = BigComplex(phi) - (delta * nf.mu / nf.eta) * (sh / ch);

    BigReal seta = sqrt(nf.eta);
    BigReal c1 = cos(phi), s1 = sin(phi), c2 = cos(2L * phi);
    BigComplex first = -(delta / seta * c1) * (BigComplex(BigReal(1, bits)) / ch);
    BigComplex second =
        (kappa * (BigReal(9, bits) + c2) / (18L * nf.eta)) * (BigComplex(BigReal(1, bits)) / ch2) -
        ((BigReal(1, bits) / seta) * (nf.mu / nf.eta + BigReal(1, bits) / 2) * s1) * (sh / ch2);
    out.u_leading = first + (delta * delta) * second;
    return out;
}

void write_normal_form_report(std::ostream& os, const NormalFormReport& rep) {
    os << "normalized hamiltonian (weight <= 8 retained):\n" << rep.h5.str() << "\n\n";
    os << "eta(kappa) = " << rep.eta.str() << "\n";
    os << "mu(kappa)  = " << rep.mu.str() << "\n";
    os << "residual (weight <= 5): " << rep.residual.str() << "\n";
}

} // namespace gshe
