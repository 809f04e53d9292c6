#include "gshe/homoclinic.hpp"

#include <algorithm>
#include <cmath>

namespace gshe {

BigReal default_T0(const BigReal& epsilon, int outer_N, const Precision& prec) {
    const mpfr_prec_t bits = prec.bits;
    SpectralData spec(epsilon, prec);
    BigReal delta = sqrt(-epsilon) / 2L;
    BigReal base = (log(BigReal(1, bits) / delta) + 3) / spec.beta;
    // raise until the dropped outer tail e^{-(N+1) beta T0} < 10^{-D-5}
    BigReal guard = BigReal(prec.digits + 5, bits) * log(BigReal(10, bits)) /
                    (BigReal(static_cast<long>(outer_N) + 1, bits) * spec.beta);
    return max(base, guard);
}

int required_digits(const BigReal& epsilon, int acc_digits) {
    Precision scout(16);
    SpectralData spec(epsilon, scout);
    double expo = (BigReal::pi(scout.bits) * spec.alpha / (2L * spec.beta)).to_double();
    int d = static_cast<int>(std::ceil(expo / std::log(10.0))) + 10 + acc_digits;
    return d < 16 ? 16 : d;
}

namespace {

struct Shot {
    State4 x_end;
    Vec4 vpsi_end;
    State4 field_end;
    BigReal res;
    BigReal q2, p1;
};

Shot shoot(const BigReal& epsilon, const BigReal& kappa, const BigReal& psi, const BigReal& T0,
           const BigReal& T, int terms, const ModelParams& p) {
    OuterSeries series = compute_outer_series(epsilon, kappa, psi, terms, p.prec);
    OuterSeries::RealEval ic =
        series.eval_real(-(series.alpha * T0), -(series.beta * T0), terms);
    FlowResult fr = flow(ic.x, {ic.dpsi}, T, p);
    Shot s{fr.x_end, fr.tangents_end[0], vector_field(fr.x_end, p), BigReal(p.prec.bits),
           fr.x_end.q2().re, fr.x_end.p1().re};
    s.res = max(abs(s.q2), abs(s.p1));
    return s;
}

} // namespace

NewtonOutcome newton_symmetric(const BigReal& epsilon, const BigReal& kappa, int branch,
                               const Precision& prec, const HomoclinicOptions& opts) {
    const mpfr_prec_t bits = prec.bits;
    if (!(epsilon >= BigReal("-0.1", bits) && epsilon.sgn() < 0))
        throw Error("newton_symmetric: epsilon must lie in [-0.1, 0)");
    ModelParams p(kappa, epsilon, prec);
    auto [r0, psi0] = initial_match(epsilon, kappa, prec);
    (void)r0;
    BigReal T0 = default_T0(epsilon, opts.outer_N, prec);
    BigReal psi = branch == 0 ? psi0 : psi0 + BigReal::pi(bits);
    BigReal T = T0;

    NewtonOutcome out;
    out.T0 = T0;
    out.psi_seed = psi;

    Shot cur = shoot(epsilon, kappa, psi, T0, T, opts.outer_N, p);
    BigReal tol_n = BigReal::pow10(-prec.digits + 4, bits) *
                    max(BigReal(1, bits), norm_inf(cur.x_end));
    int stall = 0;
    int it = 0;
    for (; it < opts.max_iters && !(cur.res <= tol_n); ++it) {
        Mat2 jac{cur.field_end.q2(), cur.vpsi_end.q2(), cur.field_end.p1(), cur.vpsi_end.p1()};
        Vec2 rhs{BigComplex(cur.q2), BigComplex(cur.p1)};
        Vec2 step = solve2x2(jac, rhs, prec);
        BigReal dT = step.x.re, dpsi = step.y.re;

        // halve the step while it fails to reduce the residual
        Shot next = cur;
        bool improved = false;
        for (int halvings = 0; halvings <= 10; ++halvings) {
            next = shoot(epsilon, kappa, psi - dpsi, T0, T - dT, opts.outer_N, p);
            if (next.res < cur.res) {
                improved = true;
                break;
            }
            dT = dT / 2;
            dpsi = dpsi / 2;
        }
        T = T - dT;
        psi = psi - dpsi;
        stall = improved ? 0 : stall + 1;
        if (stall >= 5)
            throw NewtonDiverged("residual stuck at " + cur.res.to_string_digits(4) +
                                 " for 5 steps");
        cur = next;
        if (opts.progress)
            *opts.progress << "newton iter " << it + 1 << " res " << cur.res.to_string_digits(4)
                           << "\n";
        tol_n = BigReal::pow10(-prec.digits + 4, bits) *
                max(BigReal(1, bits), norm_inf(cur.x_end));
    }
    if (!(cur.res <= tol_n))
        throw NewtonDiverged("no convergence in " + std::to_string(opts.max_iters) +
                             " iterations; residual " + cur.res.to_string_digits(4));
    out.T_star = T;
    out.psi_star = psi;
    out.x_sym = cur.x_end;
    out.iters = it;
    out.residual = cur.res;
    return out;
}

HomoclinicResult homoclinic_invariant(const BigReal& epsilon, const BigReal& kappa, int branch,
                                      const Precision& prec, const HomoclinicOptions& opts) {
    NewtonOutcome nw = newton_symmetric(epsilon, kappa, branch, prec, opts);
    ModelParams p(kappa, epsilon, prec);
    SpectralData spec(epsilon, prec);

    OuterSeries series = compute_outer_series(epsilon, kappa, nw.psi_star, opts.outer_N, prec);
    OuterSeries::RealEval ic =
        series.eval_real(-(series.alpha * nw.T0), -(series.beta * nw.T0), opts.outer_N);
    Vec4 v0 = spec.alpha * ic.dphi;  // v(0) = alpha d_phi Gamma^u
    FlowResult fr = flow(ic.x, {v0}, nw.T_star, p);

    HomoclinicResult r;
    r.epsilon = epsilon;
    r.kappa = kappa;
    r.branch = branch;
    r.digits = prec.digits;
    r.alpha = spec.alpha;
    r.beta = spec.beta;
    r.T_star = nw.T_star;
    r.psi_star = nw.psi_star;
    r.T0 = nw.T0;
    r.psi_seed = nw.psi_seed;
    r.x_sym = fr.x_end;
    r.v_u = fr.tangents_end[0];
    r.newton_iters = nw.iters;
    r.residual = nw.residual;
    BigComplex om = symplectic_form(r.v_u, involution_tangent(r.v_u));
    r.omega_hat = om.re;
    r.omega_bar = r.omega_hat / 2 * spec.exp_factor;
    return r;
}

BigReal cross_check_scalar(const HomoclinicResult& r) {
    // The u^- route: with a = d_phi u and its d-jet read off the tangent
    // through the state dictionary (a, da, -(da+d3a), a+d2a), the invariant
    // is -2 d[a^2 + a d2a] = 2(w_q1 w_p1 - w_q2 w_p2) on w = d_phi Gamma^u.
    // The mirror relation pins the stable-side jets exactly, so this equals
    // Omega(d_phi Gamma^u, d_phi Gamma^s) with no approximation.
    BigComplex ia(r.alpha);
    Vec4 w = r.v_u / ia;
    BigComplex val = 2L * (w.q1() * w.p1() - w.q2() * w.p2());
    return val.re;
}

OmegaZCheck cross_check_omega_z(const HomoclinicResult& r, const Precision& prec) {
    ModelParams p(r.kappa, r.epsilon, prec);
    SpectralData spec(r.epsilon, prec);
    State4 field = vector_field(r.x_sym, p);
    Vec4 sv = involution_tangent(r.v_u);
    BigComplex ia(spec.alpha);
    BigComplex ib(spec.beta);
    Vec4 vphi_u = r.v_u / ia;
    Vec4 vphi_s = -(sv / ia);
    Vec4 vz_u = (field - r.v_u) / ib;
    Vec4 vz_s = (field + sv) / ib;
    OmegaZCheck out;
    out.omega = symplectic_form(vphi_u, vphi_s).re;
    // (stable, unstable) slot order; with (u, s) the identity holds with a
    // minus sign instead
    out.omega_z = symplectic_form(vz_s, vz_u).re;
    out.combo = (spec.alpha * spec.alpha * out.omega + spec.beta * spec.beta * out.omega_z);
    return out;
}

std::vector<ProfilePoint> orbit_profile(const BigReal& epsilon, const BigReal& kappa, int branch,
                                        const Precision& prec, const BigReal& x_max,
                                        const BigReal& dx, const HomoclinicOptions& opts) {
    NewtonOutcome nw = newton_symmetric(epsilon, kappa, branch, prec, opts);
    ModelParams p(kappa, epsilon, prec);
    OuterSeries series = compute_outer_series(epsilon, kappa, nw.psi_star, opts.outer_N, prec);
    OuterSeries::RealEval ic =
        series.eval_real(-(series.alpha * nw.T0), -(series.beta * nw.T0), opts.outer_N);

    // sample times T* + x for x in [-min(T*, x_max), x_max], step dx
    std::vector<BigReal> times;
    BigReal lo = -min(nw.T_star, x_max);
    for (BigReal x = lo; x <= x_max; x += dx) times.push_back(nw.T_star + x);
    std::vector<ProfilePoint> pts;
    pts.reserve(times.size());
    size_t next = 0;

    FlowOptions fo;
    fo.on_step = [&](const Jet& jet, const BigReal& t0, const BigReal& h) {
        while (next < times.size() && times[next] <= t0 + h) {
            State4 xs = eval_jet(jet, times[next] - t0);
            pts.push_back({times[next] - nw.T_star, xs.q1().re});
            ++next;
        }
    };
    flow(ic.x, {}, nw.T_star + x_max, p, fo);
    return pts;
}

} // namespace gshe
