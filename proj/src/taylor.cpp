#include "gshe/taylor.hpp"

namespace gshe {

namespace {

BigComplex convolve(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b, int m,
                    mpfr_prec_t bits) {
    BigComplex s(bits);
    for (int k = 0; k <= m; ++k) s.add_mul(a[k], b[m - k]);
    return s;
}

} // namespace

Jet jet_expand(const State4& x0, const std::vector<Vec4>& tangents, const ModelParams& p,
               int order) {
    if (order < 2) throw Error("jet_expand: order must be >= 2");
    const mpfr_prec_t bits = p.prec.bits;
    Jet jet;
    jet.order = order;
    for (int c = 0; c < 4; ++c) {
        jet.x[c].reserve(order + 1);
        jet.x[c].push_back(x0[c]);
    }
    jet.tangents.resize(tangents.size());
    for (size_t t = 0; t < tangents.size(); ++t)
        for (int c = 0; c < 4; ++c) {
            jet.tangents[t][c].reserve(order + 1);
            jet.tangents[t][c].push_back(tangents[t][c]);
        }
    auto& q1 = jet.x[0];
    auto& q2 = jet.x[1];
    auto& p1 = jet.x[2];
    auto& p2 = jet.x[3];
    auto& sq = jet.pow[0];
    auto& cu = jet.pow[1];
    sq.reserve(order + 1);
    cu.reserve(order + 1);

    for (int m = 0; m < order; ++m) {
        sq.push_back(convolve(q1, q1, m, bits));
        cu.push_back(convolve(sq, q1, m, bits));
        long div = m + 1;
        q1.push_back(q2[m] / div);
        q2.push_back((p2[m] - q1[m]) / div);
        p1.push_back((p2[m] - p.epsilon * q1[m] - p.kappa * sq[m] + cu[m]) / div);
        p2.push_back(-p1[m] / div);
        for (auto& v : jet.tangents) {
            auto& vq1 = v[0];
            auto& vq2 = v[1];
            auto& vp1 = v[2];
            auto& vp2 = v[3];
            BigComplex lin = convolve(q1, vq1, m, bits);     // q1 * vq1
            BigComplex quad = convolve(sq, vq1, m, bits);    // q1^2 * vq1
            vq1.push_back(vq2[m] / div);
            vq2.push_back((vp2[m] - vq1[m]) / div);
            vp1.push_back((vp2[m] - p.epsilon * vq1[m] - 2L * (p.kappa * lin) + 3L * quad) / div);
            vp2.push_back(-vp1[m] / div);
        }
    }
    return jet;
}

State4 eval_jet(const Jet& jet, const BigReal& h) {
    State4 r;
    for (int c = 0; c < 4; ++c) {
        BigComplex acc = jet.x[c][jet.order];
        for (int m = jet.order - 1; m >= 0; --m) acc = h * acc + jet.x[c][m];
        r[c] = acc;
    }
    return r;
}

Vec4 eval_jet_tangent(const Jet& jet, int which, const BigReal& h) {
    Vec4 r;
    const auto& v = jet.tangents[which];
    for (int c = 0; c < 4; ++c) {
        BigComplex acc = v[c][jet.order];
        for (int m = jet.order - 1; m >= 0; --m) acc = h * acc + v[c][m];
        r[c] = acc;
    }
    return r;
}

namespace {

BigReal layer_norm(const Jet& jet, int m) {
    BigReal n = abs1(jet.x[0][m]);
    for (int c = 1; c < 4; ++c) n = max(n, abs1(jet.x[c][m]));
    for (const auto& v : jet.tangents)
        for (int c = 0; c < 4; ++c) n = max(n, abs1(v[c][m]));
    return n;
}

} // namespace

BigReal step_size(const Jet& jet, const BigReal& tol) {
    const mpfr_prec_t bits = tol.prec();
    BigReal one(1, bits);
    BigReal h(bits);
    bool have = false;
    for (int m = jet.order - 1; m <= jet.order; ++m) {
        BigReal n = layer_norm(jet, m);
        if (n.is_zero()) continue;
        BigReal hm = exp(log(tol / n) / static_cast<long>(m));
        h = have ? min(h, hm) : hm;
        have = true;
    }
    if (!have) throw DegenerateJet("trailing jet coefficients vanish");
    h = BigReal("0.9", bits) * h;
    return h > one ? one : h;
}

FlowResult flow(const State4& x0, const std::vector<Vec4>& tangents, const BigReal& t_total,
                const ModelParams& p, const FlowOptions& opts) {
    const mpfr_prec_t bits = p.prec.bits;
    FlowResult res;
    res.x_end = x0;
    res.tangents_end = tangents;
    res.t_elapsed = BigReal(bits);
    res.max_h = BigReal(bits);
    if (t_total.is_zero()) return res;

    const bool backward = t_total.is_neg();
    const BigReal T = abs(t_total);
    const BigReal tol = p.prec.tol();
    const BigReal hmin = BigReal::pow10(-p.prec.digits, bits);
    BigReal t_done(bits);
    BigComplex h0;
    if (opts.trace) h0 = hamiltonian(x0, p);

    while (true) {
        Jet jet = jet_expand(res.x_end, res.tangents_end, p, p.prec.taylor_order);
        BigReal h = step_size(jet, tol);
        if (h < hmin) throw StepUnderflow("h = " + h.to_string_digits(3));
        BigReal rem = T - t_done;
        bool last = false;
        if (h >= rem) {
            h = rem;
            last = true;
        }
        BigReal hs = backward ? -h : h;
        res.x_end = eval_jet(jet, hs);
        for (size_t t = 0; t < res.tangents_end.size(); ++t)
            res.tangents_end[t] = eval_jet_tangent(jet, static_cast<int>(t), hs);
        if (opts.on_step) {
            BigReal start = backward ? -t_done : t_done;
            opts.on_step(jet, start, hs);
        }
        t_done += h;
        ++res.steps;
        res.max_h = max(res.max_h, h);
        if (opts.trace) {
            BigReal drift = abs(hamiltonian(res.x_end, p) - h0);
            *opts.trace << (backward ? "-" : "") << t_done.to_string_digits(12) << ","
                        << h.to_string_digits(8) << "," << drift.to_string_digits(4) << "\n";
        }
        if (last) break;
    }
    res.t_elapsed = backward ? -t_done : t_done;
    return res;
}

} // namespace gshe
