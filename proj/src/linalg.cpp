#include "gshe/linalg.hpp"

namespace gshe {

Vec2 solve2x2(const Mat2& m, const Vec2& rhs, const Precision& prec) {
    BigComplex det = m.a * m.d - m.b * m.c;
    BigReal row1 = abs(m.a) + abs(m.b);
    BigReal row2 = abs(m.c) + abs(m.d);
    BigReal scale = max(row1, row2);
    BigReal floor_ = BigReal::pow10(-prec.digits + 4, prec.bits) * scale;
    if (!(abs(det) > floor_))
        throw SingularMatrix("2x2 determinant below conditioning floor");
    Vec2 out;
    out.x = (rhs.x * m.d - rhs.y * m.b) / det;
    out.y = (m.a * rhs.y - m.c * rhs.x) / det;
    return out;
}

std::vector<BigReal> least_squares_fit(const std::vector<std::function<BigReal(const BigReal&)>>& basis,
                                       const std::vector<std::pair<BigReal, BigReal>>& samples,
                                       const Precision& prec) {
    const size_t n = basis.size();
    if (n == 0 || n > 2) throw Error("least_squares_fit: 1 or 2 basis functions expected");
    if (samples.size() < n) throw RankDeficient("fewer samples than basis functions");

    // Gram matrix G_ij = sum f_i f_j, rhs_i = sum f_i y.
    std::vector<BigReal> g(n * n, BigReal(prec.bits));
    std::vector<BigReal> r(n, BigReal(prec.bits));
    for (const auto& [x, y] : samples) {
        std::vector<BigReal> f;
        f.reserve(n);
        for (const auto& bf : basis) f.push_back(bf(x));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) g[i * n + j] += f[i] * f[j];
            r[i] += f[i] * y;
        }
    }

    if (n == 1) {
        if (g[0].is_zero()) throw RankDeficient("normal equations singular");
        return {r[0] / g[0]};
    }
    // equilibrate: the two basis columns can differ by many orders of
    // magnitude (1 vs e^-sigma), which would trip the determinant floor
    BigReal s0 = sqrt(g[0]), s1 = sqrt(g[3]);
    if (s0.is_zero() || s1.is_zero()) throw RankDeficient("zero basis column");
    Mat2 m{BigComplex(g[0] / (s0 * s0)), BigComplex(g[1] / (s0 * s1)),
           BigComplex(g[2] / (s1 * s0)), BigComplex(g[3] / (s1 * s1))};
    Vec2 rhs{BigComplex(r[0] / s0), BigComplex(r[1] / s1)};
    Vec2 sol;
    try {
        sol = solve2x2(m, rhs, prec);
    } catch (const SingularMatrix&) {
        throw RankDeficient("normal equations singular");
    }
    return {sol.x.re / s0, sol.y.re / s1};
}

std::vector<BigReal> vandermonde_interpolate(const std::vector<std::pair<BigReal, BigReal>>& points,
                                             int degree, const Precision& prec) {
    const size_t n = static_cast<size_t>(degree) + 1;
    if (points.size() != n)
        throw Error("vandermonde_interpolate: need exactly degree+1 points");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (points[i].first == points[j].first)
                throw DuplicateAbscissa("coincident abscissae at indices " + std::to_string(i) +
                                        "," + std::to_string(j));

    // Divided differences in place.
    std::vector<BigReal> dd(n, BigReal(prec.bits));
    for (size_t i = 0; i < n; ++i) dd[i] = points[i].second;
    for (size_t level = 1; level < n; ++level)
        for (size_t i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (points[i].first - points[i - level].first);

    // Expand the Newton form to monomial coefficients.
    std::vector<BigReal> coeff(n, BigReal(prec.bits));
    for (size_t i = n; i-- > 0;) {
        // coeff(x) := coeff(x) * (x - x_i) + dd[i]
        for (size_t k = n - 1; k >= 1; --k)
            coeff[k] = coeff[k - 1] - points[i].first * coeff[k];
        coeff[0] = dd[i] - points[i].first * coeff[0];
    }
    return coeff;
}

} // namespace gshe
