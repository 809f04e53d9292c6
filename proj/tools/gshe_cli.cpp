// Command-line laboratory for the stationary GSHE splitting computations:
// Stokes-constant pipeline, symmetric-homoclinic invariant, asymptotic fits,
// kappa scans and the exact normal-form verification.

#include <CLI11.hpp>
#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gshe/asymfit.hpp"
#include "gshe/homoclinic.hpp"
#include "gshe/normal_form.hpp"
#include "gshe/stokes.hpp"

using namespace gshe;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> fields;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void add(const std::string& k, const std::string& v) { fields.emplace_back(k, v); }
    std::string write(const std::string& out_dir) {
        fs::create_directories(out_dir);
        std::string path = out_dir + "/manifest.txt";
        std::ofstream f(path);
        f << "command=" << command << "\n";
        f << "version=" << kVersion << "\n";
        for (const auto& [k, v] : fields) f << k << "=" << v << "\n";
        f << "wall_seconds="
          << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << "\n";
        return path;
    }
};

// cache writes are guarded by a file lock so concurrent runs don't collide
struct CacheLock {
    int fd = -1;
    explicit CacheLock(const std::string& dir) {
        if (dir.empty()) return;
        fs::create_directories(dir);
        fd = ::open((dir + "/.lock").c_str(), O_CREAT | O_RDWR, 0644);
        if (fd >= 0) ::flock(fd, LOCK_EX);
    }
    ~CacheLock() {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
};

std::vector<BigReal> parse_grid(const std::string& lo, const std::string& hi,
                                const std::string& step, mpfr_prec_t bits) {
    std::vector<BigReal> g;
    BigReal a(lo, bits), b(hi, bits), h(step, bits);
    for (BigReal x = a; x <= b; x += h) g.push_back(x);
    return g;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

int run_stokes(const std::string& kappa_s, int digits, const std::string& d_spec, int terms,
               int series_order, const std::string& smin, const std::string& smax,
               const std::string& sstep, const std::string& out_dir,
               const std::string& cache_dir, bool quiet) {
    Manifest man;
    man.command = "stokes";
    man.add("kappa", kappa_s);
    man.add("digits", std::to_string(digits));
    man.add("d", d_spec);
    man.add("terms", std::to_string(terms));
    man.add("series_order", std::to_string(series_order));
    man.add("sigma", smin + ".." + smax + " step " + sstep);
    man.add("cache_dir", cache_dir);

    Precision prec(digits);
    StokesOptions opts;
    opts.series_N = series_order;
    opts.n_terms = terms;
    opts.d_spec = d_spec;
    opts.cache_dir = cache_dir;
    if (!quiet) opts.progress = &std::cerr;
    if (!smin.empty() && !smax.empty()) opts.sigma_grid = parse_grid(smin, smax, sstep, prec.bits);

    CacheLock lock(cache_dir);
    StokesEstimate est = stokes_constant(BigReal(kappa_s, prec.bits), digits, opts);

    std::string manifest = man.write(out_dir);
    {
        std::ofstream f(out_dir + "/sigma_sweep.csv");
        write_sweep_csv(f, est.sweep, digits, manifest);
    }
    std::ostringstream rec;
    rec << "kappa=" << kappa_s << "\n";
    rec << "digits=" << digits << "\n";
    rec << "d=" << est.d.to_string_digits(digits) << "\n";
    rec << "n_terms=" << est.n_terms << "\nseries_N=" << est.series_N << "\n";
    rec << "sigma_star=" << est.sigma_star.to_string_digits(10) << "\n";
    rec << "C=" << est.C.to_string_digits(8) << "\n";
    rec << "C0=" << est.C0.to_string_digits(digits) << "\n";
    rec << "C1=" << est.C1.to_string_digits(8) << "\n";
    rec << "re_theta0=" << est.theta0.re.to_string_digits(digits) << "\n";
    rec << "im_theta0=" << est.theta0.im.to_string_digits(digits) << "\n";
    rec << "err_est=" << est.err_est.to_string_digits(6) << "\n";
    rec << "manifest=" << manifest << "\n";
    write_text(out_dir + "/stokes_estimate.txt", rec.str());
    std::cout << "Im Theta0 = " << est.theta0.im.to_string_digits(digits) << "  (err_est "
              << est.err_est.to_string_digits(4) << ", sigma* "
              << est.sigma_star.to_string_digits(6) << ")\n";
    return 0;
}

int run_homoclinic(const std::string& eps_s, const std::string& kappa_s, int digits, int branch,
                   int acc, bool profile, const std::string& out_dir, bool quiet) {
    Manifest man;
    man.command = "homoclinic";
    man.add("epsilon", eps_s);
    man.add("kappa", kappa_s);
    man.add("branch", std::to_string(branch));

    Precision scout(16);
    BigReal eps_probe(eps_s, scout.bits);
    int d_needed = required_digits(eps_probe, acc);
    if (digits < d_needed) digits = d_needed;  // auto-raise
    man.add("digits", std::to_string(digits));
    man.add("accuracy_digits", std::to_string(acc));

    Precision prec(digits);
    BigReal eps(eps_s, prec.bits), kappa(kappa_s, prec.bits);
    HomoclinicOptions opts;
    if (!quiet) opts.progress = &std::cerr;
    HomoclinicResult r = homoclinic_invariant(eps, kappa, branch, prec, opts);

    std::string manifest = man.write(out_dir);
    std::ostringstream rec;
    rec << "epsilon=" << eps_s << "\nkappa=" << kappa_s << "\nbranch=" << branch << "\n";
    rec << "digits=" << digits << "\n";
    rec << "alpha=" << r.alpha.to_string_digits(digits) << "\n";
    rec << "beta=" << r.beta.to_string_digits(digits) << "\n";
    rec << "T0=" << r.T0.to_string_digits(20) << "\n";
    rec << "psi_seed=" << r.psi_seed.to_string_digits(20) << "\n";
    rec << "T_star=" << r.T_star.to_string_digits(digits) << "\n";
    rec << "psi_star=" << r.psi_star.to_string_digits(digits) << "\n";
    rec << "newton_iters=" << r.newton_iters << "\n";
    rec << "residual=" << r.residual.to_string_digits(4) << "\n";
    const char* names[4] = {"q1", "q2", "p1", "p2"};
    for (int c = 0; c < 4; ++c)
        rec << "x_sym_" << names[c] << "=" << r.x_sym[c].re.to_string_digits(digits) << "\n";
    for (int c = 0; c < 4; ++c)
        rec << "v_u_" << names[c] << "=" << r.v_u[c].re.to_string_digits(digits) << "\n";
    rec << "omega_hat=" << r.omega_hat.to_string_digits(digits) << "\n";
    rec << "omega_bar=" << r.omega_bar.to_string_digits(digits) << "\n";
    rec << "manifest=" << manifest << "\n";
    write_text(out_dir + "/homoclinic_result.txt", rec.str());
    std::cout << "omega_bar = " << r.omega_bar.to_string_digits(digits) << "  (omega_hat "
              << r.omega_hat.to_string_digits(8) << ", " << r.newton_iters << " Newton iters)\n";

    if (profile) {
        BigReal xmax(60, prec.bits), dx("0.25", prec.bits);
        auto prof = orbit_profile(eps, kappa, branch, prec, xmax, dx, opts);
        std::ofstream f(out_dir + "/orbit_profile.csv");
        f << "x,u\n";
        for (const auto& p : prof)
            f << p.x.to_string_digits(10) << "," << p.u.to_string_digits(digits) << "\n";
        f << "# manifest: " << manifest << "\n";
    }
    return 0;
}

int run_fit(const std::string& points_file, int deg_lo, int deg_hi, int digits,
            const std::string& out_dir) {
    Manifest man;
    man.command = "fit";
    man.add("points", points_file);
    man.add("degrees", std::to_string(deg_lo) + ".." + std::to_string(deg_hi));
    man.add("digits", std::to_string(digits));

    Precision prec(digits);
    std::vector<EpsOmega> pts;
    std::ifstream f(points_file);
    if (!f) throw Error("cannot open points file " + points_file);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::string e, o;
        if (is >> e >> o) pts.emplace_back(BigReal(e, prec.bits), BigReal(o, prec.bits));
    }
    FitReport rep = fit_report(pts, deg_lo, deg_hi, prec);
    std::string manifest = man.write(out_dir);
    {
        std::ofstream csv(out_dir + "/fit_report.csv");
        write_fit_csv(csv, rep, digits, manifest);
    }
    {
        std::ofstream tab(out_dir + "/fit_table.txt");
        write_fit_table(tab, rep);
    }
    write_fit_table(std::cout, rep);
    return 0;
}

int run_scan(const std::string& kmin, const std::string& kmax, const std::string& kstep,
             int digits, int series_order, const std::string& d_spec, const std::string& out_dir,
             const std::string& cache_dir, bool quiet) {
    Manifest man;
    man.command = "scan";
    man.add("kappa", kmin + ".." + kmax + " step " + kstep);
    man.add("digits", std::to_string(digits));

    Precision prec(digits);
    StokesOptions opts;
    opts.series_N = series_order;
    opts.n_terms = series_order;
    opts.d_spec = d_spec;
    opts.cache_dir = cache_dir;
    if (!quiet) opts.progress = &std::cerr;
    CacheLock lock(cache_dir);
    auto rows = stokes_scan(parse_grid(kmin, kmax, kstep, prec.bits), digits, opts);
    std::string manifest = man.write(out_dir);
    std::ofstream csv(out_dir + "/kappa_scan.csv");
    write_scan_csv(csv, rows, digits, manifest);
    int failures = 0;
    for (const auto& r : rows)
        if (!r.ok) ++failures;
    std::cout << rows.size() << " kappa points, " << failures << " failures; CSV in " << out_dir
              << "\n";
    return 0;
}

int run_normal_form(bool verify, const std::string& out_dir) {
    Manifest man;
    man.command = "normal-form";
    NormalFormReport rep = psi5_normalize(5);
    std::string manifest = man.write(out_dir);
    std::ofstream f(out_dir + "/normal_form_report.txt");
    write_normal_form_report(f, rep);
    f << "manifest: " << manifest << "\n";
    if (verify) {
        std::cout << "no residual monomials <= weight 5\n";
        std::cout << "eta(kappa) = " << rep.eta.str() << "\n";
        std::cout << "mu(kappa)  = " << rep.mu.str() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-precision splitting laboratory for the stationary generalized "
                 "Swift-Hohenberg equation"};
    app.set_config("--config", "", "key=value config file, overridable by flags");
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = "gshe_out";
    std::string cache_dir;
    bool quiet = false;
    app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    app.add_option("--cache-dir", cache_dir, "series cache directory")->envname("GSHE_CACHE_DIR");
    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* st = app.add_subcommand("stokes", "Stokes-constant pipeline (sigma sweep + error model)");
    std::string kappa = "2", d_spec = "350pi", smin, smax, sstep = "0.3";
    int digits = 16, terms = 9, series_order = 40;
    st->add_option("--kappa", kappa, "quadratic coefficient")->capture_default_str();
    st->add_option("--digits", digits, "decimal digits")->capture_default_str();
    st->add_option("--d", d_spec, "integration span, e.g. 350pi")->capture_default_str();
    st->add_option("--terms", terms, "series terms for initial data")->capture_default_str();
    st->add_option("--series-order", series_order, "formal series order N")->capture_default_str();
    st->add_option("--sigma-min", smin, "sigma grid start");
    st->add_option("--sigma-max", smax, "sigma grid end");
    st->add_option("--sigma-step", sstep, "sigma grid step")->capture_default_str();

    auto* ho = app.add_subcommand("homoclinic", "symmetric homoclinic invariant");
    std::string eps = "-0.05";
    int branch = 0, hdigits = 16, acc = 6;
    bool profile = false;
    ho->add_option("--epsilon", eps, "bifurcation parameter (< 0)")->capture_default_str();
    ho->add_option("--kappa", kappa, "quadratic coefficient")->capture_default_str();
    ho->add_option("--digits", hdigits, "decimal digits (auto-raised)")->capture_default_str();
    ho->add_option("--branch", branch, "symmetric orbit branch, 0 or 1")
        ->check(CLI::Range(0, 1))
        ->capture_default_str();
    ho->add_option("--acc", acc, "requested omega_bar accuracy digits")->capture_default_str();
    ho->add_flag("--profile", profile, "emit orbit profile CSV");

    auto* fi = app.add_subcommand("fit", "asymptotic-expansion window fits");
    std::string points_file;
    int deg_lo = 5, deg_hi = 8, fdigits = 48;
    fi->add_option("--points", points_file, "file of (epsilon omega_bar) lines")->required();
    fi->add_option("--degree-min", deg_lo, "lowest degree")->capture_default_str();
    fi->add_option("--degree-max", deg_hi, "highest degree")->capture_default_str();
    fi->add_option("--digits", fdigits, "decimal digits")->capture_default_str();

    auto* sc = app.add_subcommand("scan", "Im Theta0 over a kappa grid");
    std::string kmin = "0.85", kmax = "3", kstep = "0.05";
    int sdigits = 16, sorder = 40;
    sc->add_option("--kappa-min", kmin)->capture_default_str();
    sc->add_option("--kappa-max", kmax)->capture_default_str();
    sc->add_option("--kappa-step", kstep)->capture_default_str();
    sc->add_option("--digits", sdigits)->capture_default_str();
    sc->add_option("--series-order", sorder)->capture_default_str();
    sc->add_option("--d", d_spec, "integration span")->capture_default_str();

    auto* nf = app.add_subcommand("normal-form", "exact degree-5 normal form");
    bool verify = false;
    nf->add_flag("--verify", verify, "print the verification summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // invalid flags
    }

    try {
        if (st->parsed())
            return run_stokes(kappa, digits, d_spec, terms, series_order, smin, smax, sstep,
                              out_dir, cache_dir, quiet);
        if (ho->parsed())
            return run_homoclinic(eps, kappa, hdigits, branch, acc, profile, out_dir, quiet);
        if (fi->parsed()) return run_fit(points_file, deg_lo, deg_hi, fdigits, out_dir);
        if (sc->parsed())
            return run_scan(kmin, kmax, kstep, sdigits, sorder, d_spec, out_dir, cache_dir, quiet);
        if (nf->parsed()) return run_normal_form(verify, out_dir);
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
