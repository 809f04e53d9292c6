#include "gshe/inner.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gshe {

namespace {

// Coefficient value that is affine in the currently pending resonant pair:
// a + b*lam_plus + c*lam_minus.  At most one pair is pending at a time, so a
// single (b, c) slot suffices repo-wide.
struct AffineC {
    BigComplex a, b, c;
    explicit AffineC(mpfr_prec_t bits) : a(bits), b(bits), c(bits) {}
    AffineC(const BigComplex& v) : a(v), b(v.prec()), c(v.prec()) {}
    bool affine() const { return !(b.is_zero() && c.is_zero()); }
    bool is_zero() const { return a.is_zero() && !affine(); }

    void add_mul(const AffineC& x, const AffineC& y) {
        if (x.affine() && y.affine())
            throw ResonanceClosureFailure("pending unknowns multiplied together");
        const AffineC& aff = x.affine() ? x : y;
        const AffineC& num = x.affine() ? y : x;
        a.add_mul(aff.a, num.a);
        if (!aff.b.is_zero()) b.add_mul(aff.b, num.a);
        if (!aff.c.is_zero()) c.add_mul(aff.c, num.a);
    }
    void resolve(const BigComplex& lam_p, const BigComplex& lam_m) {
        if (!b.is_zero()) {
            a.add_mul(b, lam_p);
            b = BigComplex(b.prec());
        }
        if (!c.is_zero()) {
            a.add_mul(c, lam_m);
            c = BigComplex(c.prec());
        }
    }
};

using Layer = std::vector<AffineC>;  // index j + k

struct Builder {
    const BigReal& kappa;
    int N;
    const Precision& prec;
    mpfr_prec_t bits;
    std::vector<Layer> u;   // u[k], k = 1..N+1
    std::vector<Layer> sq;  // (u^2)_m, built at iteration m

    Builder(const BigReal& kappa_, int N_, const Precision& p)
        : kappa(kappa_), N(N_), prec(p), bits(p.bits) {
        u.resize(N + 2);
        sq.resize(N + 3);
        for (int k = 1; k <= N + 1; ++k) u[k].assign(2 * k + 1, AffineC(bits));
    }

    AffineC& uc(int k, int j) { return u[k][j + k]; }
    bool in_range(int k, int j) const { return k >= 1 && k <= N + 1 && j >= -k && j <= k; }

    // Fresh (u^2)_{n,j} from current tables.
    AffineC conv_sq(int n, int j) {
        AffineC s(bits);
        for (int a = 1; a <= n - 1; ++a) {
            int b_ = n - a;
            int lo = std::max(-a, j - b_), hi = std::min(a, j + b_);
            for (int j1 = lo; j1 <= hi; ++j1) {
                const AffineC& x = uc(a, j1);
                const AffineC& y = uc(b_, j - j1);
                if (x.is_zero() || y.is_zero()) continue;
                s.add_mul(x, y);
            }
        }
        return s;
    }

    // (u^3)_{n,j} via the stored squares: sum_{a=2..n-1} (u^2)_a u_{n-a}.
    AffineC conv_cube(int n, int j) {
        AffineC s(bits);
        for (int a = 2; a <= n - 1; ++a) {
            int c_ = n - a;
            const Layer& sqa = sq[a];
            int lo = std::max(-a, j - c_), hi = std::min(a, j + c_);
            for (int j1 = lo; j1 <= hi; ++j1) {
                const AffineC& x = sqa[j1 + a];
                const AffineC& y = uc(c_, j - j1);
                if (x.is_zero() || y.is_zero()) continue;
                s.add_mul(x, y);
            }
        }
        return s;
    }

    // kappa (u^2)_{n,j} - (u^3)_{n,j}
    AffineC rhs(int n, int j, const AffineC* sq_nj) {
        AffineC r = sq_nj ? *sq_nj : conv_sq(n, j);
        BigComplex k_(kappa);
        r.a = k_ * r.a;
        r.b = k_ * r.b;
        r.c = k_ * r.c;
        AffineC cu = conv_cube(n, j);
        r.a -= cu.a;
        r.b -= cu.b;
        r.c -= cu.c;
        return r;
    }

    // Contribution of u_{k,j} tau^-k to equation order n through the linear
    // operator (1 + (ij + d_tau)^2)^2; zero when out of range.
    BigComplex op_coeff(int n, int j, int k) const {
        long a = 1 - static_cast<long>(j) * j;  // 1 - j^2
        BigReal re(bits), im(bits);
        long K = k;
        if (k == n) {
            re = BigReal(a * a, bits);
        } else if (k == n - 1) {
            im = BigReal(-4 * j * a * K, bits);
        } else if (k == n - 2) {
            re = BigReal((2 - 6 * static_cast<long>(j) * j) * K * (K + 1), bits);
        } else if (k == n - 3) {
            im = BigReal(-4 * j * K * (K + 1) * (K + 2), bits);
        } else if (k == n - 4) {
            re = BigReal(K * (K + 1) * (K + 2) * (K + 3), bits);
        }
        return {re, im};
    }

    // LHS tail at equation order n, mode j, from layers k < n.
    AffineC lhs_tail(int n, int j) {
        AffineC t(bits);
        for (int k = n - 4; k <= n - 1; ++k) {
            if (!in_range(k, j)) continue;
            BigComplex c = op_coeff(n, j, k);
            if (c.is_zero()) continue;
            const AffineC& x = uc(k, j);
            if (x.is_zero()) continue;
            t.a.add_mul(c, x.a);
            if (!x.b.is_zero()) t.b.add_mul(c, x.b);
            if (!x.c.is_zero()) t.c.add_mul(c, x.c);
        }
        return t;
    }

    void resolve_all(const BigComplex& lp, const BigComplex& lm) {
        for (auto& layer : u)
            for (auto& e : layer) e.resolve(lp, lm);
        for (auto& layer : sq)
            for (auto& e : layer) e.resolve(lp, lm);
    }

    // Solvability condition for layer 1: with the pure-cos normalization
    // u_{1,+-1} = i t, the order-3 resonant equation -8 u_{1,s} = RHS_{3,s}
    // has a one-parameter family of roots; take the positive one.
    void bootstrap_layer1(const BigReal& eta) {
        auto residual = [&](const BigReal& t) {
            BigComplex it(BigReal(bits), t);
            uc(1, 1) = AffineC(it);
            uc(1, -1) = AffineC(it);
            // layer-2 non-resonant candidates at this trial value
            for (int j : {-2, 0, 2}) {
                AffineC r = rhs(2, j, nullptr);
                long sym = (1 - j * j) * (1 - j * j);
                r.a = r.a / sym;
                uc(2, j) = AffineC(r.a);
            }
            sq[2].assign(5, AffineC(bits));
            for (int j = -2; j <= 2; ++j) sq[2][j + 2] = conv_sq(2, j);
            AffineC r3 = rhs(3, 1, nullptr);
            BigComplex lhs = BigComplex(BigReal(-8, bits)) * it;
            return (lhs - r3.a).im;  // equation is purely imaginary on this ray
        };
        // secant iteration, seeded at the scale 1/sqrt(4 eta)
        BigReal t0 = BigReal(1, bits) / sqrt(4L * eta);
        BigReal t1 = t0 * BigReal("1.25", bits);
        BigReal f0 = residual(t0), f1 = residual(t1);
        BigReal tiny = BigReal::pow10(-prec.digits + 2, bits);
        for (int it = 0; it < 200; ++it) {
            if (f1 == f0) break;
            BigReal t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
            t0 = t1;
            f0 = f1;
            t1 = t2;
            f1 = residual(t1);
            if (abs(f1) < tiny * abs(t1)) break;
        }
        if (!(abs(f1) < BigReal::pow10(-prec.digits + 6, bits) * max(abs(t1), BigReal(1, bits))))
            throw ResonanceClosureFailure("layer-1 solvability did not converge");
        // leave layer 1 set; layer 2 is recomputed by the main loop
        for (int j : {-2, 0, 2}) uc(2, j) = AffineC(bits);
    }

    void run(const BigReal& eta) {
        BigReal tolfloor = BigReal::pow10(-prec.digits + 6, bits);
        bootstrap_layer1(eta);
        sq[1].assign(3, AffineC(bits));

        for (int n = 2; n <= N + 2; ++n) {
            // close the resonant pair of layer n-2
            if (n == 3) {
                // consistency of the bootstrap against the full machinery
                for (int s : {1, -1}) {
                    AffineC r = rhs(3, s, nullptr);
                    BigComplex lhs = op_coeff(3, s, 1) * uc(1, s).a;
                    BigReal scale = max(abs(r.a), BigReal(1, bits));
                    if (!(abs(lhs - r.a) < tolfloor * scale))
                        throw ResonanceClosureFailure("layer-1 closing equation violated");
                }
            } else if (n >= 4) {
                close_layer(n, tolfloor);
            }
            // introduce the pending pair of layer n-1 (identity affines)
            if (n >= 3 && n <= N + 1 && n - 1 >= 2) {
                uc(n - 1, 1).b = BigComplex(BigReal(1, bits));
                uc(n - 1, -1).c = BigComplex(BigReal(1, bits));
            }
            if (n <= N + 1) {
                // store (u^2)_n now that the pending pair participates
                Layer sqn(2 * n + 1, AffineC(bits));
                for (int j = -n; j <= n; ++j) sqn[j + n] = conv_sq(n, j);
                sq[n] = std::move(sqn);
                // layer-n non-resonant modes
                for (int j = -n; j <= n; ++j) {
                    if (j == 1 || j == -1) continue;
                    AffineC r = rhs(n, j, &sq[n][j + n]);
                    AffineC t = lhs_tail(n, j);
                    long sym = (1 - static_cast<long>(j) * j) * (1 - static_cast<long>(j) * j);
                    r.a = (r.a - t.a) / sym;
                    r.b = (r.b - t.b) / sym;
                    r.c = (r.c - t.c) / sym;
                    uc(n, j) = r;
                }
            }
        }
    }

    void close_layer(int n, const BigReal& tolfloor) {
        const int kc = n - 2;
        // -4 k (k+1) lam_s + tail_s(known layers) = rhs_s(affine)
        BigComplex diag(BigReal(-4L * kc * (kc + 1), bits));
        AffineC r_p = rhs(n, 1, nullptr);
        AffineC r_m = rhs(n, -1, nullptr);
        BigComplex tail_p(bits), tail_m(bits);
        for (int k = n - 4; k <= n - 3; ++k) {
            if (k < 1) continue;
            tail_p += op_coeff(n, 1, k) * uc(k, 1).a;
            tail_m += op_coeff(n, -1, k) * uc(k, -1).a;
        }
        // (diag - b) lam_p - c lam_m = a - tail  per mode
        Mat2 m{diag - r_p.b, -r_p.c, -r_m.b, diag - r_m.c};
        Vec2 rv{r_p.a - tail_p, r_m.a - tail_m};
        BigComplex lp(bits), lm(bits);
        if (n == 4) {
            // rank-1 closing: the tau-translation freedom; normalize the
            // resonant layer 2 to pure sin (lam_p + lam_m = 0)
            BigComplex den = m.a - m.b;
            if (abs(den) < tolfloor)
                throw ResonanceClosureFailure("degenerate layer-2 normalization");
            lp = rv.x / den;
            lm = -lp;
            BigReal res = abs(m.c * lp + m.d * lm - rv.y);
            if (!(res < BigReal::pow10(-prec.digits + 8, bits) * max(abs(rv.y), BigReal(1, bits))))
                throw ResonanceClosureFailure("layer-2 mirror equation inconsistent");
        } else {
            Vec2 sol;
            try {
                sol = solve2x2(m, rv, prec);
            } catch (const SingularMatrix& e) {
                throw ResonanceClosureFailure(std::string("closing system singular at layer ") +
                                              std::to_string(kc) + " (" + e.what() + ")");
            }
            lp = sol.x;
            lm = sol.y;
        }
        uc(kc, 1) = AffineC(lp);
        uc(kc, -1) = AffineC(lm);
        resolve_all(lp, lm);
    }
};

// d = d_phi + d_tau acting termwise on a coefficient table:
// (Df)_{k,j} = i j f_{k,j} - (k-1) f_{k-1,j.}
std::vector<std::vector<BigComplex>> apply_d(const std::vector<std::vector<BigComplex>>& f, int N,
                                             mpfr_prec_t bits) {
    std::vector<std::vector<BigComplex>> g(N + 1);
    for (int k = 1; k <= N; ++k) {
        g[k].assign(2 * k + 1, BigComplex(bits));
        for (int j = -k; j <= k; ++j) {
            BigComplex v = BigComplex(BigReal(bits), BigReal(static_cast<long>(j), bits)) * f[k][j + k];
            if (k - 1 >= 1 && j >= -(k - 1) && j <= k - 1)
                v -= BigReal(static_cast<long>(k - 1), bits) * f[k - 1][j + k - 1];
            g[k][j + k] = v;
        }
    }
    return g;
}

} // namespace

InnerSeries compute_inner_series(const BigReal& kappa, int N, const Precision& prec) {
    if (N < 2) throw Error("compute_inner_series: N must be >= 2");
    NFParams nf(kappa, prec);
    if (!(nf.eta.sgn() > 0)) throw Error("compute_inner_series: eta(kappa) must be positive");

    Builder b(kappa, N, prec);
    b.run(nf.eta);

    InnerSeries s{kappa, nf.eta, N, prec, {}, {}, {}};
    s.u.resize(N + 1);
    for (int k = 1; k <= N; ++k) {
        s.u[k].reserve(2 * k + 1);
        for (int j = -k; j <= k; ++j) {
            const AffineC& e = b.uc(k, j);
            if (e.affine()) throw ResonanceClosureFailure("unresolved coefficient survived");
            s.u[k].push_back(e.a);
        }
    }

    auto d1 = apply_d(s.u, N, prec.bits);
    auto d2 = apply_d(d1, N, prec.bits);
    auto d3 = apply_d(d2, N, prec.bits);
    s.gamma.resize(N + 1);
    s.gamma_max.assign(N + 1, BigReal(prec.bits));
    for (int k = 1; k <= N; ++k) {
        s.gamma[k].reserve(2 * k + 1);
        for (int j = -k; j <= k; ++j) {
            Vec4 g = lift_scalar(s.u[k][j + k], d1[k][j + k], d2[k][j + k], d3[k][j + k]);
            s.gamma_max[k] = max(s.gamma_max[k], norm_inf(g));
            s.gamma[k].push_back(std::move(g));
        }
    }
    return s;
}

InnerSeries::Eval InnerSeries::eval(const BigReal& phi, const BigComplex& tau, int terms) const {
    if (terms < 1 || terms > N) throw Error("eval: terms out of range");
    const mpfr_prec_t bits = prec.bits;
    // e^{i j phi} for |j| <= terms
    std::vector<BigComplex> ph(terms + 1, BigComplex(bits));
    ph[0] = BigComplex(BigReal(1, bits));
    BigComplex base = cis(phi);
    for (int j = 1; j <= terms; ++j) ph[j] = ph[j - 1] * base;

    BigComplex tinv = BigComplex(BigReal(1, bits)) / tau;
    BigComplex tpow = tinv;
    Eval out;
    out.x = State4(bits);
    out.v = Vec4(bits);
    for (int k = 1; k <= terms; ++k) {
        State4 xk(bits);
        Vec4 vk(bits);
        for (int j = -k; j <= k; ++j) {
            BigComplex e = j >= 0 ? ph[j] : conj(ph[-j]);
            const Vec4& g = gamma[k][j + k];
            BigComplex ije = BigComplex(BigReal(bits), BigReal(static_cast<long>(j), bits)) * e;
            for (int c = 0; c < 4; ++c) {
                xk[c].add_mul(g[c], e);
                vk[c].add_mul(g[c], ije);
            }
        }
        for (int c = 0; c < 4; ++c) {
            out.x[c].add_mul(xk[c], tpow);
            out.v[c].add_mul(vk[c], tpow);
        }
        tpow = tpow * tinv;
    }
    return out;
}

std::pair<int, BigReal> InnerSeries::least_term(const BigReal& tau_abs) const {
    const mpfr_prec_t bits = prec.bits;
    BigReal tinv = BigReal(1, bits) / tau_abs;
    BigReal tpow = tinv;
    int best = 1;
    BigReal best_v = gamma_max[1] * tpow;
    for (int k = 2; k <= N; ++k) {
        tpow *= tinv;
        BigReal v = gamma_max[k] * tpow;
        if (v < best_v) {
            best = k;
            best_v = v;
        }
    }
    return {best, best_v};
}

std::vector<std::vector<BigComplex>> inner_residual(const InnerSeries& s, int n_trunc,
                                                    int max_order) {
    const mpfr_prec_t bits = s.prec.bits;
    // plain numeric re-collection of L u - kappa u^2 + u^3 for the truncation
    auto ucoef = [&](int k, int j) -> BigComplex {
        if (k < 1 || k > n_trunc || j < -k || j > k) return BigComplex(bits);
        return s.u[k][j + k];
    };
    std::vector<std::vector<BigComplex>> res(max_order + 1);
    for (int n = 1; n <= max_order; ++n) {
        res[n].assign(2 * n + 1, BigComplex(bits));
        for (int j = -n; j <= n; ++j) {
            BigComplex acc(bits);
            // linear operator contributions
            for (int k = n - 4; k <= n; ++k) {
                if (k < 1 || j < -k || j > k) continue;
                long a = 1 - static_cast<long>(j) * j;
                long K = k;
                BigReal re(bits), im(bits);
                if (k == n) re = BigReal(a * a, bits);
                else if (k == n - 1) im = BigReal(-4 * j * a * K, bits);
                else if (k == n - 2) re = BigReal((2 - 6 * static_cast<long>(j) * j) * K * (K + 1), bits);
                else if (k == n - 3) im = BigReal(-4 * j * K * (K + 1) * (K + 2), bits);
                else re = BigReal(K * (K + 1) * (K + 2) * (K + 3), bits);
                acc.add_mul(BigComplex{re, im}, ucoef(k, j));
            }
            // - kappa u^2 + u^3
            BigComplex sq_(bits), cu_(bits);
            for (int a = 1; a <= n - 1; ++a)
                for (int j1 = -a; j1 <= a; ++j1) {
                    BigComplex x = ucoef(a, j1);
                    if (x.is_zero()) continue;
                    sq_.add_mul(x, ucoef(n - a, j - j1));
                    for (int b_ = 1; b_ <= n - a - 1; ++b_)
                        for (int j2 = -b_; j2 <= b_; ++j2) {
                            BigComplex y = ucoef(b_, j2);
                            if (y.is_zero()) continue;
                            cu_.add_mul(x * y, ucoef(n - a - b_, j - j1 - j2));
                        }
                }
            acc -= s.kappa * sq_;
            acc += cu_;
            res[n][j + n] = acc;
        }
    }
    return res;
}

void save_inner_series(const InnerSeries& s, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw Error("cannot write " + tmp);
        f << "format=1\n";
        f << "kind=inner\n";
        f << "kappa=" << serialize(s.kappa) << "\n";
        f << "N=" << s.N << "\n";
        f << "digits=" << s.prec.digits << "\n";
        for (int k = 1; k <= s.N; ++k)
            for (int j = -k; j <= k; ++j)
                f << k << " " << j << " " << serialize(s.u[k][j + k].re) << " "
                  << serialize(s.u[k][j + k].im) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("rename failed for " + path);
}

std::optional<InnerSeries> try_load_inner_series(const std::string& path, const BigReal& kappa,
                                                 int N, const Precision& prec) {
    std::ifstream f(path);
    if (!f) return std::nullopt;
    auto expect_kv = [&](const std::string& key) -> std::string {
        std::string line;
        if (!std::getline(f, line)) throw CacheFormat("truncated header in " + path);
        auto pos = line.find('=');
        if (pos == std::string::npos || line.substr(0, pos) != key)
            throw CacheFormat("expected '" + key + "=' in " + path);
        return line.substr(pos + 1);
    };
    try {
        if (expect_kv("format") != "1") return std::nullopt;
        if (expect_kv("kind") != "inner") return std::nullopt;
        std::string kap = expect_kv("kappa");
        int n_file = std::stoi(expect_kv("N"));
        int d_file = std::stoi(expect_kv("digits"));
        // lower-precision caches are never upgraded in place
        if (kap != serialize(kappa) || n_file != N || d_file != prec.digits) return std::nullopt;

        InnerSeries s{kappa, NFParams(kappa, prec).eta, N, prec, {}, {}, {}};
        s.u.resize(N + 1);
        for (int k = 1; k <= N; ++k) s.u[k].assign(2 * k + 1, BigComplex(prec.bits));
        std::string line;
        size_t count = 0;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            std::istringstream is(line);
            int k, j;
            std::string re, im;
            if (!(is >> k >> j >> re >> im)) throw CacheFormat("bad coefficient line");
            if (k < 1 || k > N || j < -k || j > k) throw CacheFormat("coefficient out of range");
            s.u[k][j + k] = BigComplex(parse_real(re, prec.bits), parse_real(im, prec.bits));
            ++count;
        }
        size_t expected = 0;
        for (int k = 1; k <= N; ++k) expected += 2 * k + 1;
        if (count != expected) throw CacheFormat("coefficient count mismatch");

        auto d1 = apply_d(s.u, N, prec.bits);
        auto d2 = apply_d(d1, N, prec.bits);
        auto d3 = apply_d(d2, N, prec.bits);
        s.gamma.resize(N + 1);
        s.gamma_max.assign(N + 1, BigReal(prec.bits));
        for (int k = 1; k <= N; ++k) {
            s.gamma[k].reserve(2 * k + 1);
            for (int j = -k; j <= k; ++j) {
                Vec4 g = lift_scalar(s.u[k][j + k], d1[k][j + k], d2[k][j + k], d3[k][j + k]);
                s.gamma_max[k] = max(s.gamma_max[k], norm_inf(g));
                s.gamma[k].push_back(std::move(g));
            }
        }
        return s;
    } catch (const CacheFormat&) {
        return std::nullopt;
    }
}

} // namespace gshe
