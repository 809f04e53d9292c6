#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gshe/asymfit.hpp"

using namespace gshe;

namespace {

// the repo's recorded omega_bar dataset (14 points, D=48, kappa=2, branch 0)
std::vector<EpsOmega> load_dataset(const Precision& prec) {
    std::vector<EpsOmega> pts;
    for (const char* path : {"data/omega_bar_kappa2.txt", "../data/omega_bar_kappa2.txt"}) {
        std::ifstream f(path);
        if (!f) continue;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream is(line);
            std::string e, o;
            if (is >> e >> o) pts.emplace_back(BigReal(e, prec.bits), BigReal(o, prec.bits));
        }
        break;
    }
    return pts;
}

} // namespace

TEST_CASE("fit_expansion recovers exact polynomial data") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    std::vector<BigReal> ref = {BigReal("10.47", bits), BigReal("8.98", bits),
                                BigReal("-42.6", bits), BigReal("152.9", bits)};
    std::vector<EpsOmega> pts;
    for (long i = 0; i < 4; ++i) {
        BigReal x = BigReal("-0.002", bits) - BigReal("0.0003", bits) * BigReal(i, bits);
        pts.emplace_back(x, eval_poly(ref, x));
    }
    auto c = fit_expansion(pts, 3, prec);
    for (size_t k = 0; k < ref.size(); ++k)
        CHECK(abs(c[k] - ref[k]) < BigReal::pow10(-18, bits) * abs(ref[k]));
}

TEST_CASE("common_digits") {
    Precision prec(30);
    const mpfr_prec_t bits = prec.bits;
    std::vector<BigReal> a = {BigReal("10.4721621", bits), BigReal("10.4721619", bits)};
    CHECK(common_digits(a) == "10.47216");
    std::vector<BigReal> b = {BigReal(1, bits), BigReal(-1, bits)};
    CHECK(common_digits(b) == "");
    std::vector<BigReal> c = {BigReal("-42.601100432", bits), BigReal("-42.601100433", bits)};
    // binary expansions of ...432 and ...433 share one further digit
    CHECK(common_digits(c) == "-42.601100432");
    std::vector<BigReal> d = {BigReal("0.00123456", bits), BigReal("0.00123457", bits)};
    CHECK(common_digits(d) == "0.0012345");
}

TEST_CASE("interpolation exactness at the fitting nodes") {
    Precision prec(48);
    auto pts = load_dataset(prec);
    REQUIRE(pts.size() == 14);
    std::vector<EpsOmega> head(pts.begin(), pts.begin() + 7);
    auto c = fit_expansion(head, 6, prec);
    for (const auto& [x, y] : head) {
        BigReal r = abs(eval_poly(c, x) - y);
        CHECK(r <= BigReal::pow10(-40, prec.bits) * abs(y));
    }
}

TEST_CASE("Table-3 digits from the recorded dataset") {
    Precision prec(48);
    const mpfr_prec_t bits = prec.bits;
    auto pts = load_dataset(prec);
    REQUIRE(pts.size() == 14);

    // degree-5 windows of 6 consecutive points: constant terms share the
    // 10.47216195694 prefix; degree 10: omega_1 prefix 8.9799431275210
    WindowFits w5 = sliding_window_fits(pts, 5, prec);
    CHECK(w5.stable[0].size() >= 14);  // "10.47216195694" has 14 chars
    CHECK(w5.stable[0].substr(0, 14) == std::string("10.47216195694"));

    WindowFits w10 = sliding_window_fits(pts, 10, prec);
    CHECK(w10.stable[1].substr(0, 15) == "8.9799431275210");

    // omega_2 across degrees 9..12 shares -42.601100432
    std::vector<BigReal> w2s;
    for (int deg : {9, 10, 11, 12}) {
        WindowFits wf = sliding_window_fits(pts, deg, prec);
        for (const auto& row : wf.coeffs) w2s.push_back(row[2]);
    }
    std::string w2common = common_digits(w2s);
    CHECK(w2common.substr(0, 12) == "-42.60110043");

    // degree monotonicity of the omega_0 stable-digit count on degrees 5..12
    size_t prev = 0;
    for (int deg = 5; deg <= 12; ++deg) {
        WindowFits wf = sliding_window_fits(pts, deg, prec);
        size_t n = 0;
        for (char ch : wf.stable[0])
            if (ch >= '0' && ch <= '9') ++n;
        CHECK(n + 2 >= prev);  // non-decreasing up to trailing-digit jitter
        prev = std::max(prev, n);
    }
}

TEST_CASE("validity tests on the recorded dataset") {
    Precision prec(48);
    const mpfr_prec_t bits = prec.bits;
    auto pts = load_dataset(prec);
    REQUIRE(pts.size() == 14);
    BigReal stokes_im("10.47216195694439835828552143203190", bits);

    // leave-one-out stability: dropping one interior point moves omega_0 by
    // less than 1e-12
    std::vector<EpsOmega> base(pts.begin(), pts.begin() + 7);
    auto c_all = fit_expansion(std::vector<EpsOmega>(pts.begin(), pts.begin() + 6), 5, prec);
    std::vector<EpsOmega> dropped;
    for (size_t i = 0; i < 7; ++i)
        if (i != 3) dropped.push_back(pts[i]);
    auto c_drop = fit_expansion(dropped, 5, prec);
    CHECK(abs(c_all[0] - c_drop[0]) < BigReal::pow10(-12, bits));

    // subset stability + constant-vs-Stokes + out-of-window error; the tail
    // check reuses the large-|eps| half of the dataset as "outside" points
    std::vector<EpsOmega> window(pts.begin() + 7, pts.end());
    std::vector<EpsOmega> outside(pts.begin(), pts.begin() + 7);
    ValidityReport rep = validity_tests(window, outside, 5, stokes_im,
                                        BigReal("1e-12", bits), BigReal("0.06", bits), prec);
    CHECK(rep.subset_stable);
    CHECK(rep.const_matches_stokes);
    CHECK(rep.omega0_minus_stokes < BigReal("1e-12", bits));
    CHECK(rep.tail_bounded);
}

TEST_CASE("fit report emission") {
    Precision prec(48);
    auto pts = load_dataset(prec);
    REQUIRE(!pts.empty());
    FitReport rep = fit_report(pts, 5, 6, prec);
    std::ostringstream csv, tab;
    write_fit_csv(csv, rep, 20, "manifest.txt");
    write_fit_table(tab, rep);
    CHECK(csv.str().find("degree,k,coefficient,stable_digits") == 0);
    CHECK(csv.str().find("# manifest: manifest.txt") != std::string::npos);
    CHECK(tab.str().find("10.47216") != std::string::npos);
}
