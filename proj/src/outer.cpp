#include "gshe/outer.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gshe {

std::pair<BigReal, BigReal> initial_match(const BigReal& epsilon, const BigReal& kappa,
                                          const Precision& prec) {
    const mpfr_prec_t bits = prec.bits;
    NFParams nf(kappa, prec);
    BigReal delta = sqrt(-epsilon) / 2L;
    BigReal slope = BigReal(1, bits) + 2L * nf.mu / nf.eta;  // 1 + 2 mu/eta
    BigReal psi0 = atan(-(slope * delta / 2L));
    BigReal r0 = (2L * delta / sqrt(nf.eta)) *
                 sqrt(BigReal(1, bits) + slope * slope * delta * delta / 4);
    return {r0, psi0};
}

namespace {

BigComplex symbol_at(int k, int j, const BigReal& alpha, const BigReal& beta,
                     const BigReal& epsilon, mpfr_prec_t bits) {
    // ((i j alpha + k beta)^2 + 1)^2 - eps
    BigComplex m(BigReal(static_cast<long>(k), bits) * beta,
                 BigReal(static_cast<long>(j), bits) * alpha);
    BigComplex t = m * m + BigComplex(BigReal(1, bits));
    return t * t - BigComplex(epsilon);
}

using Table = std::vector<std::vector<BigComplex>>;  // [k][j+k]

// c[k][j] += sum over a+b=k of x_a beside y_b (full bilinear convolution)
void accumulate_pair(BigComplex& acc, const Table& x, const Table& y, int k, int j, int a_min,
                     int a_max) {
    for (int a = a_min; a <= a_max; ++a) {
        int b = k - a;
        if (b < 1 || b >= static_cast<int>(y.size())) continue;
        int lo = std::max(-a, j - b), hi = std::min(a, j + b);
        for (int j1 = lo; j1 <= hi; ++j1) {
            const BigComplex& xa = x[a][j1 + a];
            if (xa.is_zero()) continue;
            const BigComplex& yb = y[b][j - j1 + b];
            if (yb.is_zero()) continue;
            acc.add_mul(xa, yb);
        }
    }
}

} // namespace

OuterSeries compute_outer_series(const BigReal& epsilon, const BigReal& kappa, const BigReal& psi,
                                 int N, const Precision& prec) {
    if (!(epsilon.sgn() < 0)) throw Error("compute_outer_series: epsilon must be negative");
    if (N < 1) throw Error("compute_outer_series: N must be >= 1");
    const mpfr_prec_t bits = prec.bits;
    SpectralData spec(epsilon, prec);
    NFParams nf(kappa, prec);
    auto [r0, psi0] = initial_match(epsilon, kappa, prec);

    OuterSeries s{epsilon, kappa, psi,  N,    prec, spec.alpha, spec.beta,
                  nf.eta,  nf.mu, r0,   psi0, {},   {}};
    s.w.resize(N + 1);
    s.dw.resize(N + 1);
    for (int k = 1; k <= N; ++k) {
        s.w[k].assign(2 * k + 1, BigComplex(bits));
        s.dw[k].assign(2 * k + 1, BigComplex(bits));
    }

    // k = 1: a cos(phi) + b sin(phi) with a = r0 cos psi, b = r0 sin psi;
    // w_{1,+1} = (a - i b)/2 = (r0/2) e^{-i psi}, and d/dpsi w = -i j w.
    BigComplex w11(r0 * cos(psi) / 2, -(r0 * sin(psi)) / 2L);
    s.w[1][2] = w11;
    s.w[1][0] = conj(w11);
    BigComplex mi(BigReal(bits), BigReal(-1, bits));
    s.dw[1][2] = mi * w11;
    s.dw[1][0] = conj(s.dw[1][2]);

    Table sq(N + 1), dsq(N + 1);  // (u^2)_m and its psi-derivative
    BigReal symfloor = sqrt(prec.tol());  // 10^(-D/2) guard

    for (int k = 2; k <= N; ++k) {
        sq[k].assign(2 * k + 1, BigComplex(bits));
        dsq[k].assign(2 * k + 1, BigComplex(bits));
        for (int j = -k; j <= k; ++j) {
            accumulate_pair(sq[k][j + k], s.w, s.w, k, j, 1, k - 1);
            accumulate_pair(dsq[k][j + k], s.dw, s.w, k, j, 1, k - 1);
            accumulate_pair(dsq[k][j + k], s.w, s.dw, k, j, 1, k - 1);
        }
        for (int j = -k; j <= k; ++j) {
            BigComplex cu(bits), dcu(bits);
            accumulate_pair(cu, sq, s.w, k, j, 2, k - 1);
            accumulate_pair(dcu, dsq, s.w, k, j, 2, k - 1);
            accumulate_pair(dcu, sq, s.dw, k, j, 2, k - 1);
            BigComplex sym = symbol_at(k, j, spec.alpha, spec.beta, epsilon, bits);
            if (abs(sym) < symfloor)
                throw NearResonantSymbol("mode (" + std::to_string(k) + "," + std::to_string(j) +
                                         "): |symbol| below 10^(-D/2)");
            s.w[k][j + k] = (kappa * sq[k][j + k] - cu) / sym;
            s.dw[k][j + k] = (kappa * dsq[k][j + k] - dcu) / sym;
        }
    }
    return s;
}

OuterSeries::Eval OuterSeries::eval(const BigReal& phi, const BigReal& z, int terms) const {
    if (terms < 1 || terms > N) throw Error("outer eval: terms out of range");
    const mpfr_prec_t bits = prec.bits;
    std::vector<BigComplex> ph(terms + 1, BigComplex(bits));
    ph[0] = BigComplex(BigReal(1, bits));
    BigComplex base = cis(phi);
    for (int j = 1; j <= terms; ++j) ph[j] = ph[j - 1] * base;
    BigReal ez = exp(z);

    Eval out;
    out.x = State4(bits);
    out.dphi = Vec4(bits);
    out.dpsi = Vec4(bits);
    BigReal ezk(1, bits);
    for (int k = 1; k <= terms; ++k) {
        ezk *= ez;
        for (int j = -k; j <= k; ++j) {
            const BigComplex& wkj = w[k][j + k];
            const BigComplex& dwkj = dw[k][j + k];
            if (wkj.is_zero() && dwkj.is_zero()) continue;
            // lift through d = alpha d_phi + beta d_z: multiply by m = i j alpha + k beta
            BigComplex m(BigReal(static_cast<long>(k), bits) * beta,
                         BigReal(static_cast<long>(j), bits) * alpha);
            BigComplex m2 = m * m;
            BigComplex e = (j >= 0 ? ph[j] : conj(ph[-j]));
            BigComplex ph_kj = ezk * e;
            State4 g = lift_scalar(wkj, m * wkj, m2 * wkj, m2 * (m * wkj));
            State4 dg = lift_scalar(dwkj, m * dwkj, m2 * dwkj, m2 * (m * dwkj));
            BigComplex ij(BigReal(bits), BigReal(static_cast<long>(j), bits));
            for (int c = 0; c < 4; ++c) {
                out.x[c].add_mul(g[c], ph_kj);
                out.dphi[c].add_mul(ij * g[c], ph_kj);
                out.dpsi[c].add_mul(dg[c], ph_kj);
            }
        }
    }
    return out;
}

OuterSeries::RealEval OuterSeries::eval_real(const BigReal& phi, const BigReal& z,
                                             int terms) const {
    Eval e = eval(phi, z, terms);
    const mpfr_prec_t bits = prec.bits;
    BigReal cap = BigReal::pow10(-prec.digits + 4, bits);
    RealEval r;
    r.x = State4(bits);
    r.dphi = Vec4(bits);
    r.dpsi = Vec4(bits);
    for (int c = 0; c < 4; ++c) {
        BigReal scale = max(BigReal(1, bits), abs(e.x[c].re));
        if (!(abs(e.x[c].im) <= cap * scale))
            throw Error("outer eval_real: imaginary contamination");
        r.x[c] = BigComplex(e.x[c].re);
        r.dphi[c] = BigComplex(e.dphi[c].re);
        r.dpsi[c] = BigComplex(e.dpsi[c].re);
    }
    return r;
}

void save_outer_series(const OuterSeries& s, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw Error("cannot write " + tmp);
        f << "format=1\nkind=outer\n";
        f << "kappa=" << serialize(s.kappa) << "\n";
        f << "epsilon=" << serialize(s.epsilon) << "\n";
        f << "psi=" << serialize(s.psi) << "\n";
        f << "N=" << s.N << "\n";
        f << "digits=" << s.prec.digits << "\n";
        for (int k = 1; k <= s.N; ++k)
            for (int j = -k; j <= k; ++j)
                f << k << " " << j << " " << serialize(s.w[k][j + k].re) << " "
                  << serialize(s.w[k][j + k].im) << " " << serialize(s.dw[k][j + k].re) << " "
                  << serialize(s.dw[k][j + k].im) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("rename failed for " + path);
}

std::optional<OuterSeries> try_load_outer_series(const std::string& path, const BigReal& epsilon,
                                                 const BigReal& kappa, const BigReal& psi, int N,
                                                 const Precision& prec) {
    std::ifstream f(path);
    if (!f) return std::nullopt;
    auto kv = [&](const std::string& key) -> std::string {
        std::string line;
        if (!std::getline(f, line)) throw CacheFormat("truncated header");
        auto pos = line.find('=');
        if (pos == std::string::npos || line.substr(0, pos) != key)
            throw CacheFormat("expected " + key);
        return line.substr(pos + 1);
    };
    try {
        if (kv("format") != "1" || kv("kind") != "outer") return std::nullopt;
        if (kv("kappa") != serialize(kappa) || kv("epsilon") != serialize(epsilon) ||
            kv("psi") != serialize(psi))
            return std::nullopt;
        if (std::stoi(kv("N")) != N || std::stoi(kv("digits")) != prec.digits) return std::nullopt;

        SpectralData spec(epsilon, prec);
        NFParams nf(kappa, prec);
        auto [r0, psi0] = initial_match(epsilon, kappa, prec);
        OuterSeries s{epsilon, kappa, psi,  N,    prec, spec.alpha, spec.beta,
                      nf.eta,  nf.mu, r0,   psi0, {},   {}};
        s.w.resize(N + 1);
        s.dw.resize(N + 1);
        for (int k = 1; k <= N; ++k) {
            s.w[k].assign(2 * k + 1, BigComplex(prec.bits));
            s.dw[k].assign(2 * k + 1, BigComplex(prec.bits));
        }
        std::string line;
        size_t count = 0, expected = 0;
        for (int k = 1; k <= N; ++k) expected += 2 * k + 1;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            std::istringstream is(line);
            int k, j;
            std::string a, b, c, d;
            if (!(is >> k >> j >> a >> b >> c >> d)) throw CacheFormat("bad line");
            if (k < 1 || k > N || j < -k || j > k) throw CacheFormat("range");
            s.w[k][j + k] = BigComplex(parse_real(a, prec.bits), parse_real(b, prec.bits));
            s.dw[k][j + k] = BigComplex(parse_real(c, prec.bits), parse_real(d, prec.bits));
            ++count;
        }
        if (count != expected) throw CacheFormat("count");
        return s;
    } catch (const CacheFormat&) {
        return std::nullopt;
    }
}

} // namespace gshe
