#include "gshe/asymfit.hpp"

#include <algorithm>

namespace gshe {

std::vector<BigReal> fit_expansion(const std::vector<EpsOmega>& points, int degree,
                                   const Precision& prec) {
    return vandermonde_interpolate(points, degree, prec);
}

std::string common_digits(const std::vector<BigReal>& values, int max_digits) {
    if (values.empty()) return "";
    struct Decomp {
        bool neg;
        std::string digits;
        long exp10;  // value = 0.digits * 10^exp10
    };
    std::vector<Decomp> ds;
    for (const auto& v : values) {
        if (v.is_zero()) return "";
        mpfr_exp_t e;
        char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(max_digits), v.raw(),
                                 MPFR_RNDN);
        std::string s(raw);
        mpfr_free_str(raw);
        bool neg = !s.empty() && s[0] == '-';
        if (neg) s.erase(0, 1);
        ds.push_back({neg, s, static_cast<long>(e)});
    }
    for (const auto& d : ds)
        if (d.neg != ds[0].neg || d.exp10 != ds[0].exp10) return "";
    size_t n = 0;
    while (n < ds[0].digits.size()) {
        char c = ds[0].digits[n];
        bool all = true;
        for (const auto& d : ds)
            if (n >= d.digits.size() || d.digits[n] != c) {
                all = false;
                break;
            }
        if (!all) break;
        ++n;
    }
    if (n == 0) return "";
    std::string digits = ds[0].digits.substr(0, n);
    long e = ds[0].exp10;
    std::string out = ds[0].neg ? "-" : "";
    if (e > 0 && static_cast<size_t>(e) <= digits.size()) {
        out += digits.substr(0, e);
        if (static_cast<size_t>(e) < digits.size()) out += "." + digits.substr(e);
    } else if (e > 0) {
        out += digits;  // fewer common digits than integer places
    } else {
        out += "0.";
        out.append(static_cast<size_t>(-e), '0');
        out += digits;
    }
    return out;
}

WindowFits sliding_window_fits(const std::vector<EpsOmega>& points, int degree,
                               const Precision& prec) {
    const size_t w = static_cast<size_t>(degree) + 1;
    if (points.size() < w) throw Error("sliding_window_fits: not enough points");
    WindowFits out;
    out.degree = degree;
    for (size_t start = 0; start + w <= points.size(); ++start) {
        std::vector<EpsOmega> win(points.begin() + start, points.begin() + start + w);
        out.coeffs.push_back(fit_expansion(win, degree, prec));
    }
    for (int k = 0; k <= degree; ++k) {
        std::vector<BigReal> col;
        col.reserve(out.coeffs.size());
        for (const auto& row : out.coeffs) col.push_back(row[k]);
        out.stable.push_back(common_digits(col));
    }
    return out;
}

FitReport fit_report(const std::vector<EpsOmega>& points, int degree_lo, int degree_hi,
                     const Precision& prec) {
    FitReport rep;
    for (int d = degree_lo; d <= degree_hi; ++d)
        rep.per_degree.push_back(sliding_window_fits(points, d, prec));
    return rep;
}

BigReal eval_poly(const std::vector<BigReal>& coeffs, const BigReal& x) {
    BigReal acc = coeffs.back();
    for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

ValidityReport validity_tests(const std::vector<EpsOmega>& window_points,
                              const std::vector<EpsOmega>& outside_points, int degree,
                              const BigReal& stokes_im, const BigReal& stokes_err,
                              const BigReal& rel_err_cap, const Precision& prec) {
    ValidityReport rep;
    WindowFits wf = sliding_window_fits(window_points, degree, prec);
    rep.omega0_common = wf.stable[0];
    size_t digit_count = 0;
    for (char c : rep.omega0_common)
        if (c >= '0' && c <= '9') ++digit_count;
    rep.subset_stable = digit_count >= 10;

    // fit on the full leading window for the remaining checks
    std::vector<EpsOmega> head(window_points.begin(), window_points.begin() + degree + 1);
    auto coeffs = fit_expansion(head, degree, prec);
    rep.omega0_minus_stokes = abs(coeffs[0] - stokes_im);
    rep.const_matches_stokes = rep.omega0_minus_stokes <= stokes_err;

    rep.max_rel_err = BigReal(prec.bits);
    for (const auto& [eps, om] : outside_points) {
        BigReal err = abs(om - eval_poly(coeffs, eps)) / abs(om);
        rep.max_rel_err = max(rep.max_rel_err, err);
    }
    rep.tail_bounded = rep.max_rel_err <= rel_err_cap;
    return rep;
}

void write_fit_csv(std::ostream& os, const FitReport& rep, int digits,
                   const std::string& manifest_ref) {
    os << "degree,k,coefficient,stable_digits\n";
    for (const auto& wf : rep.per_degree)
        for (int k = 0; k <= wf.degree; ++k) {
            os << wf.degree << "," << k << ",";
            // representative value: the first window's coefficient
            os << wf.coeffs.front()[k].to_string_digits(digits) << "," << wf.stable[k] << "\n";
        }
    if (!manifest_ref.empty()) os << "# manifest: " << manifest_ref << "\n";
}

void write_fit_table(std::ostream& os, const FitReport& rep) {
    for (const auto& wf : rep.per_degree) {
        os << wf.degree;
        for (const auto& s : wf.stable) os << "\t" << (s.empty() ? "-" : s);
        os << "\n";
    }
}

} // namespace gshe
