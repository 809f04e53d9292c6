#include "gshe/exactpoly.hpp"

#include <sstream>

namespace gshe {

ExactPoly ExactPoly::constant(const mpq_class& c) {
    ExactPoly p;
    if (c != 0) p.terms[{0, 0, 0, 0, 0, 0, 0}] = c;
    return p;
}

ExactPoly ExactPoly::variable(Var v) {
    Mono m{0, 0, 0, 0, 0, 0, 0};
    m[v] = 1;
    ExactPoly p;
    p.terms[m] = 1;
    return p;
}

ExactPoly ExactPoly::monomial(const Mono& m, const mpq_class& c) {
    ExactPoly p;
    if (c != 0) p.terms[m] = c;
    return p;
}

ExactPoly& ExactPoly::operator+=(const ExactPoly& o) {
    for (const auto& [m, c] : o.terms) {
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    return *this;
}

ExactPoly& ExactPoly::operator-=(const ExactPoly& o) {
    for (const auto& [m, c] : o.terms) {
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, -c);
        } else {
            it->second -= c;
            if (it->second == 0) terms.erase(it);
        }
    }
    return *this;
}

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    ExactPoly out;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Mono m;
            for (int i = 0; i < 7; ++i) m[i] = static_cast<int8_t>(ma[i] + mb[i]);
            mpq_class c = ca * cb;
            if (m[VSQRT2] >= 2) {  // s^2 -> 2
                m[VSQRT2] = static_cast<int8_t>(m[VSQRT2] - 2);
                c *= 2;
            }
            auto it = out.terms.find(m);
            if (it == out.terms.end()) {
                out.terms.emplace(m, c);
            } else {
                it->second += c;
                if (it->second == 0) out.terms.erase(it);
            }
        }
    return out;
}

ExactPoly operator*(const mpq_class& c, const ExactPoly& a) {
    ExactPoly out;
    if (c == 0) return out;
    for (const auto& [m, ca] : a.terms) out.terms.emplace(m, c * ca);
    return out;
}

ExactPoly ExactPoly::derivative(Var v) const {
    ExactPoly out;
    for (const auto& [m, c] : terms) {
        if (m[v] == 0) continue;
        Mono d = m;
        d[v] = static_cast<int8_t>(d[v] - 1);
        out.terms.emplace(d, c * m[v]);
    }
    return out;
}

int ExactPoly::min_weight() const {
    int w = -1;
    for (const auto& [m, c] : terms) {
        int mw = weight(m);
        if (w < 0 || mw < w) w = mw;
    }
    return w;
}

ExactPoly ExactPoly::truncate_weight(int wmax) const {
    ExactPoly out;
    for (const auto& [m, c] : terms)
        if (weight(m) <= wmax) out.terms.emplace(m, c);
    return out;
}

ExactPoly ExactPoly::select_weight(int w) const {
    ExactPoly out;
    for (const auto& [m, c] : terms)
        if (weight(m) == w) out.terms.emplace(m, c);
    return out;
}

mpq_class ExactPoly::coeff(const Mono& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? mpq_class(0) : it->second;
}

ExactPoly ExactPoly::coeff_of_qp(int q1, int q2, int p1, int p2) const {
    ExactPoly out;
    for (const auto& [m, c] : terms) {
        if (m[VQ1] != q1 || m[VQ2] != q2 || m[VP1] != p1 || m[VP2] != p2) continue;
        Mono r{0, 0, 0, 0, m[VEPS], m[VKAPPA], m[VSQRT2]};
        out.terms.emplace(r, c);
    }
    return out;
}

std::string ExactPoly::str() const {
    if (terms.empty()) return "0";
    static const char* names[7] = {"q1", "q2", "p1", "p2", "eps", "kappa", "s"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.get_str() << ")";
        for (int i = 0; i < 7; ++i) {
            if (m[i] == 0) continue;
            os << "*" << names[i];
            if (m[i] > 1) os << "^" << static_cast<int>(m[i]);
        }
    }
    return os.str();
}

ExactPoly poisson(const ExactPoly& f, const ExactPoly& g) {
    ExactPoly out;
    out += f.derivative(VQ1) * g.derivative(VP1);
    out -= f.derivative(VP1) * g.derivative(VQ1);
    out += f.derivative(VQ2) * g.derivative(VP2);
    out -= f.derivative(VP2) * g.derivative(VQ2);
    return out;
}

ExactPoly lie_flow(const ExactPoly& h, const ExactPoly& f, int wcut) {
    for (const auto& [m, c] : f.terms) {
        if (ExactPoly::weight(m) <= 3 && (m[VQ1] != 0 || m[VQ2] != 0))
            throw NonincreasingWeight("generator has weight<=3 monomial with q-dependence: " +
                                      ExactPoly::monomial(m, c).str());
    }
    ExactPoly out = h.truncate_weight(wcut);
    ExactPoly term = out;
    mpq_class fact = 1;
    for (int m = 1; m <= 500; ++m) {
        term = poisson(term, f).truncate_weight(wcut);
        if (term.is_zero()) return out;
        fact *= m;
        out += mpq_class(1, 1) / fact * term;
    }
    throw NonincreasingWeight("Lie series did not terminate within 500 brackets");
}

ExactPoly parse_mpq(const std::string& num) {
    mpq_class q(num);
    q.canonicalize();
    return ExactPoly::constant(q);
}

} // namespace gshe
