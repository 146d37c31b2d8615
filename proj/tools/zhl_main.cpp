// zhl: numerical laboratory for Mellin-transform zeta families, their
// Hankel-contour continuation, the associated Hamiltonian identities,
// critical-line zeros, and the zero <-> eigenvalue map.
#include "zhl/errors.hpp"
#include "zhl/hamiltonian.hpp"
#include "zhl/kernels.hpp"
#include "zhl/zeros.hpp"
#include "zhl/zeta_engine.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

using namespace zhl;
using njson = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2, kVerifyFail = 3 };

Complex parse_complex(std::string s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw domain_error("empty complex literal");
    // forms: a | a+bi | a-bi | bi
    if (t.back() == 'i' || t.back() == 'I') {
        t.pop_back();
        std::size_t split = std::string::npos;
        for (std::size_t i = 1; i < t.size(); ++i) {
            if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E')
                split = i; // last sign wins: the imaginary part follows it
        }
        std::size_t pos = 0;
        if (split == std::string::npos) {
            const std::string im = t.empty() || t == "+" || t == "-" ? t + "1" : t;
            const double b = std::stod(im, &pos);
            if (pos != im.size()) throw domain_error("bad complex literal: " + s);
            return Complex(0.0, b);
        }
        const std::string re = t.substr(0, split);
        std::string im = t.substr(split);
        if (im == "+" || im == "-") im += "1";
        const double a = std::stod(re, &pos);
        if (pos != re.size()) throw domain_error("bad complex literal: " + s);
        const double b = std::stod(im, &pos);
        if (pos != im.size()) throw domain_error("bad complex literal: " + s);
        return Complex(a, b);
    }
    std::size_t pos = 0;
    const double a = std::stod(t, &pos);
    if (pos != t.size()) throw domain_error("bad complex literal: " + s);
    return Complex(a, 0.0);
}

std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
    return buf;
}

struct KernelOptions {
    std::string kernel = "riemann";
    std::string character = "chi4";
    std::string character_file;
    int tau_terms = 64;
};

Kernel build_kernel(const KernelOptions& opt) {
    if (opt.kernel == "riemann") return make_riemann_kernel();
    if (opt.kernel == "lambda") return make_lambda_kernel();
    if (opt.kernel == "dirichlet") {
        if (!opt.character_file.empty())
            return make_dirichlet_kernel(DirichletCharacter::from_json_file(opt.character_file));
        if (opt.character == "chi4")
            return make_dirichlet_kernel(DirichletCharacter::mod4_nonprincipal());
        if (opt.character == "chi3")
            return make_dirichlet_kernel(DirichletCharacter::mod3_nonprincipal());
        if (opt.character.rfind("mod", 0) == 0)
            return make_dirichlet_kernel(
                DirichletCharacter::principal(std::stoi(opt.character.substr(3))));
        throw domain_error("unknown character '" + opt.character +
                           "' (use chi3, chi4, modN, or --character-file)");
    }
    if (opt.kernel == "hecke")
        return make_hecke_kernel(compute_tau_coefficients(opt.tau_terms));
    throw domain_error("unknown kernel '" + opt.kernel +
                       "' (riemann | lambda | dirichlet | hecke)");
}

void add_kernel_flags(CLI::App* cmd, KernelOptions& opt) {
    cmd->add_option("--kernel", opt.kernel, "riemann | lambda | dirichlet | hecke");
    cmd->add_option("--character", opt.character, "dirichlet character: chi3 | chi4 | modN");
    cmd->add_option("--character-file", opt.character_file,
                    "JSON character table {\"modulus\": m, \"values\": [[re,im],...]}");
    cmd->add_option("--tau-terms", opt.tau_terms, "Fourier coefficients for the Hecke kernel");
}

struct OutputOptions {
    std::string format = "plain"; // json | csv | plain
    bool no_timestamp = false;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opt) {
    cmd->add_option("--format", opt.format, "json | csv | plain")
        ->check(CLI::IsMember({"json", "csv", "plain"}));
    cmd->add_flag("--no-timestamp", opt.no_timestamp, "suppress the timestamp field (json)");
}

struct EngineOptions {
    double quad_tol = 1e-12;
    double hankel_eps = 0.0;
    int em_terms = 40;
};

void add_engine_flags(CLI::App* cmd, EngineOptions& opt) {
    cmd->add_option("--quad-tol", opt.quad_tol, "quadrature relative tolerance");
    cmd->add_option("--hankel-eps", opt.hankel_eps, "Hankel circle radius (0 = auto)");
    cmd->add_option("--em-terms", opt.em_terms, "Euler-Maclaurin direct terms");
}

EngineConfig engine_config(const EngineOptions& opt) {
    EngineConfig cfg;
    cfg.quad.rel_tol = opt.quad_tol;
    cfg.contour.ray_spec.rel_tol = opt.quad_tol;
    cfg.contour.epsilon = opt.hankel_eps;
    cfg.em_terms = opt.em_terms;
    return cfg;
}

njson zero_to_json(const ZeroRecord& r) {
    njson j;
    j["kernel"] = r.kernel;
    j["z"] = {r.z.real(), r.z.imag()};
    j["residual"] = r.residual;
    j["eigenvalue"] = {r.eigenvalue.real(), r.eigenvalue.imag()};
    j["method"] = r.method;
    j["verified_count"] = r.verified_count;
    return j;
}

// ---------------------------------------------------------------------------

int cmd_eval(const KernelOptions& kopt, const OutputOptions& out, const EngineOptions& eng,
             const std::string& z_text, double x, const std::string& force) {
    const Kernel kernel = build_kernel(kopt);
    const Complex z = parse_complex(z_text);
    EngineConfig cfg = engine_config(eng);
    if (force == "mellin") cfg.force = ForcePath::mellin;
    else if (force == "hankel") cfg.force = ForcePath::hankel;
    else if (!force.empty()) throw domain_error("--force-path must be mellin or hankel");

    const EvaluationResult r = continued_L(kernel, z, x, cfg);
    if (out.format == "json") {
        njson j;
        j["kernel"] = kernel.name;
        j["z"] = {z.real(), z.imag()};
        j["x"] = x;
        j["value"] = {r.value.real(), r.value.imag()};
        j["est_error"] = r.est_error;
        j["method"] = method_name(r.method);
        if (!out.no_timestamp) j["timestamp"] = iso_timestamp();
        std::cout << j.dump() << "\n";
    } else if (out.format == "csv") {
        std::printf("kernel,z_re,z_im,x,value_re,value_im,est_error,method\n");
        std::printf("%s,%.15g,%.15g,%.15g,%.15g,%.15g,%.3g,%s\n", kernel.name.c_str(), z.real(),
                    z.imag(), x, r.value.real(), r.value.imag(), r.est_error,
                    method_name(r.method));
    } else {
        std::printf("L(%s, z=%s, x=%g) = %.15g %+.15gi   (est_error=%.3g, method=%s)\n",
                    kernel.name.c_str(), format_complex(z).c_str(), x, r.value.real(),
                    r.value.imag(), r.est_error, method_name(r.method));
    }
    return kOk;
}

int cmd_zeros(const KernelOptions& kopt, const OutputOptions& out, double t_min, double t_max,
              double step, double sigma, const std::string& cache) {
    const Kernel kernel = build_kernel(kopt);
    ScanWindow w{t_min, t_max, step, sigma};
    const std::vector<ZeroRecord> records = find_zeros(kernel, w);
    if (out.format == "json") {
        njson j = njson::array();
        for (const auto& r : records) j.push_back(zero_to_json(r));
        njson root;
        root["records"] = j;
        if (!out.no_timestamp) root["timestamp"] = iso_timestamp();
        std::cout << root.dump() << "\n";
    } else if (out.format == "csv") {
        std::printf("kernel,re,im,residual,E_re,E_im,method,verified_count\n");
        for (const auto& r : records)
            std::printf("%s,%.15g,%.15g,%.3g,%.15g,%.15g,%s,%d\n", r.kernel.c_str(), r.z.real(),
                        r.z.imag(), r.residual, r.eigenvalue.real(), r.eigenvalue.imag(),
                        r.method.c_str(), r.verified_count);
    } else {
        for (const auto& r : records)
            std::printf("zero z = %.12g %+.12gi  |L| = %.2e  E = %.12g %+.2ei  count=%d\n",
                        r.z.real(), r.z.imag(), r.residual, r.eigenvalue.real(),
                        r.eigenvalue.imag(), r.verified_count);
        std::printf("%zu zero(s) in [%g, %g]\n", records.size(), t_min, t_max);
    }
    if (!cache.empty()) append_zero_cache(cache, records);
    return kOk;
}

int cmd_spectrum(const KernelOptions& kopt, const OutputOptions& out,
                 const std::string& from_cache, double t_min, double t_max, double step,
                 double sigma) {
    std::vector<ZeroRecord> records;
    if (!from_cache.empty()) {
        records = read_zero_cache(from_cache);
    } else {
        const Kernel kernel = build_kernel(kopt);
        records = find_zeros(kernel, ScanWindow{t_min, t_max, step, sigma});
    }
    if (records.empty()) {
        std::fprintf(stderr, "spectrum: no input zeros\n");
        return kUsage;
    }
    std::sort(records.begin(), records.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        return std::abs(a.eigenvalue) < std::abs(b.eigenvalue);
    });
    if (out.format == "json") {
        njson rows = njson::array();
        int n = 1;
        for (const auto& r : records) {
            njson row;
            row["n"] = n++;
            row["z"] = {r.z.real(), r.z.imag()};
            row["E"] = {r.eigenvalue.real(), r.eigenvalue.imag()};
            row["abs_im_E"] = std::abs(r.eigenvalue.imag());
            rows.push_back(row);
        }
        njson root;
        root["spectrum"] = rows;
        if (!out.no_timestamp) root["timestamp"] = iso_timestamp();
        std::cout << root.dump() << "\n";
    } else if (out.format == "csv") {
        std::printf("n,z_re,z_im,E_re,E_im,abs_im_E\n");
        int n = 1;
        for (const auto& r : records)
            std::printf("%d,%.15g,%.15g,%.15g,%.15g,%.3g\n", n++, r.z.real(), r.z.imag(),
                        r.eigenvalue.real(), r.eigenvalue.imag(), std::abs(r.eigenvalue.imag()));
    } else {
        int n = 1;
        for (const auto& r : records) {
            std::printf("n=%-3d z = %.12g %+.12gi   E = %.12g %+.3gi   |Im E| = %.2e%s\n", n++,
                        r.z.real(), r.z.imag(), r.eigenvalue.real(), r.eigenvalue.imag(),
                        std::abs(r.eigenvalue.imag()),
                        std::abs(r.eigenvalue.imag()) > 2e-9 ? "  [non-real E]" : "");
        }
    }
    return kOk;
}

struct VerifyCase {
    std::string name;
    double residual;
    double bound;
    bool pass() const { return residual < bound; }
};

int cmd_verify(const KernelOptions& kopt, const OutputOptions& out, const std::string& suite,
               const std::string& z_list, const std::string& grid_text) {
    std::vector<VerifyCase> cases;
    std::mt19937 rng(20240817u);

    GridSpec grid{2.0, 8.0, 13};
    if (!grid_text.empty()) {
        double a, b;
        int c;
        if (std::sscanf(grid_text.c_str(), "%lf:%lf:%d", &a, &b, &c) != 3)
            throw domain_error("--grid must be min:max:count");
        grid = GridSpec{a, b, c};
    }
    std::vector<Complex> zs;
    if (!z_list.empty()) {
        std::stringstream ss(z_list);
        std::string item;
        while (std::getline(ss, item, ',')) zs.push_back(parse_complex(item));
    }

    if (suite == "functional") {
        std::uniform_real_distribution<double> re(-2.9, 0.9), im(-20.0, 20.0);
        for (int i = 0; i < 20; ++i) {
            Complex z;
            do {
                z = Complex(re(rng), im(rng));
            } while (std::abs(z.imag()) < 0.2 &&
                     std::abs(z.real() - 2.0 * std::rint(z.real() / 2.0)) < 0.3);
            std::ostringstream name;
            name << "functional z=" << format_complex(z);
            cases.push_back({name.str(), functional_equation_residual(z), 1e-10});
        }
    } else if (suite == "oracle") {
        const Kernel kernel = build_kernel(kopt);
        std::uniform_real_distribution<double> re(-3.0, 4.0), im(-30.0, 30.0);
        for (int i = 0; i < 50; ++i) {
            Complex z;
            do {
                z = Complex(re(rng), im(rng));
            } while (std::abs(z - Complex(1.0, 0.0)) < 0.1);
            const Complex a = continued_L(kernel, z, 1.0).value;
            const Complex b = oracle_L(kernel, z, 1.0);
            std::ostringstream name;
            name << "oracle z=" << format_complex(z);
            cases.push_back({name.str(), std::abs(a - b) / std::abs(b), 1e-7});
        }
    } else if (suite == "prop21") {
        const Kernel kernel = build_kernel(kopt);
        std::uniform_real_distribution<double> re(1.1, 3.0), im(-2.0, 2.0), xd(0.5, 1.5);
        EngineConfig cfg;
        for (int i = 0; i < 20; ++i) {
            const Complex z(re(rng), im(rng));
            double x = xd(rng);
            x = std::max(x, kernel.contour_window_min() + 0.25);
            const EvaluationResult m = mellin_L(kernel, z, x, cfg.quad);
            const EvaluationResult h = hankel_I(kernel, z, x, cfg.contour);
            const Complex lhs = std::exp(log_gamma(1.0 - z)) * h.value;
            std::ostringstream name;
            name << "prop21 z=" << format_complex(z) << " x=" << x;
            cases.push_back({name.str(), std::abs(lhs - m.value) / std::abs(m.value), 1e-7});
        }
    } else if (suite == "eigen") {
        const Kernel kernel = build_kernel(kopt);
        if (zs.empty()) zs = {Complex(2.3, 1.1), Complex(0.5, 14.134725)};
        for (const Complex& z : zs) {
            const Eigenstate st = make_eigenstate(kernel, z, Branch::principal);
            const OperatorReport rep = eigen_residual(kernel, st, grid);
            std::ostringstream name;
            name << "eigen z=" << format_complex(z);
            cases.push_back({name.str(), rep.residual_sup / rep.phi_sup, 1e-5});
        }
    } else if (suite == "asymptotic") {
        const Kernel kernel = build_kernel(kopt);
        const Complex z(2.5, 0.0);
        for (int terms : {4, 6}) {
            const AsymptoticTarget& tgt = asymptotic_target(kernel);
            if (!tgt.ok) throw domain_error("asymptotic: no registered target for this kernel");
            auto err = [&](double x) {
                const std::complex<long double> zl(z.real(), z.imag());
                const std::complex<long double> c(tgt.constant.real(), tgt.constant.imag());
                std::complex<long double> truth;
                if (oracle_available(kernel))
                    truth = oracle_L_l(kernel, zl, (long double)(x + tgt.sigma));
                else {
                    const Complex t = continued_L(kernel, z, x + tgt.sigma).value;
                    truth = {t.real(), t.imag()};
                }
                return (double)std::abs(delta_inv_asymptotic_l(kernel, zl, (long double)x, terms) -
                                        c * truth);
            };
            const double expected = std::pow(2.0, -(terms + z.real() - 1.0));
            const double r1 = err(40.0) / err(20.0), r2 = err(80.0) / err(40.0);
            for (double r : {r1, r2}) {
                std::ostringstream name;
                name << "asymptotic N=" << terms << " ratio=" << r;
                const double off = r > expected ? r / expected : expected / r;
                cases.push_back({name.str(), off, 4.0});
            }
        }
    } else {
        throw domain_error("unknown suite '" + suite +
                           "' (prop21 | eigen | asymptotic | functional | oracle)");
    }

    bool all_pass = true;
    double worst = 0.0;
    for (const auto& c : cases) {
        worst = std::max(worst, c.residual / c.bound);
        all_pass = all_pass && c.pass();
        if (out.format != "json")
            std::printf("%s  %-50s residual %.3g (bound %.3g)\n", c.pass() ? "ok  " : "FAIL",
                        c.name.c_str(), c.residual, c.bound);
    }
    if (out.format == "json") {
        njson rows = njson::array();
        for (const auto& c : cases)
            rows.push_back({{"name", c.name}, {"residual", c.residual}, {"bound", c.bound},
                            {"pass", c.pass()}});
        njson root;
        root["suite"] = suite;
        root["cases"] = rows;
        root["pass"] = all_pass;
        if (!out.no_timestamp) root["timestamp"] = iso_timestamp();
        std::cout << root.dump() << "\n";
    } else {
        std::printf("%s: %s (worst residual at %.3g of bound)\n", suite.c_str(),
                    all_pass ? "all pass" : "FAILURES", worst);
    }
    return all_pass ? kOk : kVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zhl: Mellin-transform zeta families, Hankel continuation, Hamiltonian "
                 "identity checks, and critical-line zeros.\n"
                 "Complex numbers are written a+bi (spaces allowed).  ZHL_THREADS caps the "
                 "zero-scan worker count."};
    app.require_subcommand(1);

    KernelOptions kopt;
    OutputOptions out;
    EngineOptions eng;

    auto* eval = app.add_subcommand(
        "eval", "evaluate L(f,z,x); csv columns: "
                "kernel,z_re,z_im,x,value_re,value_im,est_error,method");
    std::string z_text = "2+0i", force;
    double x = 1.0;
    add_kernel_flags(eval, kopt);
    add_output_flags(eval, out);
    add_engine_flags(eval, eng);
    eval->add_option("--z", z_text, "evaluation point, form a+bi")->required();
    eval->add_option("--x", x, "Hurwitz shift parameter (default 1)");
    eval->add_option("--force-path", force, "mellin | hankel (bypass dispatch)");

    auto* zeros = app.add_subcommand(
        "zeros", "scan a window of the critical line for zeros; csv columns: "
                 "kernel,re,im,residual,E_re,E_im,method,verified_count");
    double t_min = 10.0, t_max = 30.0, step = 0.05, sigma = 0.5;
    std::string cache;
    add_kernel_flags(zeros, kopt);
    add_output_flags(zeros, out);
    zeros->add_option("--t-min", t_min, "window start")->required();
    zeros->add_option("--t-max", t_max, "window end")->required();
    zeros->add_option("--step", step, "scan step (default 0.05)");
    zeros->add_option("--sigma", sigma, "real part of the scan line (default 0.5)");
    zeros->add_option("--cache", cache, "append results to this CSV cache");

    auto* spectrum = app.add_subcommand(
        "spectrum", "eigenvalues E_n = i(2 z_n - 1), sorted by |E|; csv columns: "
                    "n,z_re,z_im,E_re,E_im,abs_im_E");
    std::string from_cache;
    add_kernel_flags(spectrum, kopt);
    add_output_flags(spectrum, out);
    spectrum->add_option("--from-cache", from_cache, "read zeros from a CSV cache");
    spectrum->add_option("--t-min", t_min, "window start (when scanning inline)");
    spectrum->add_option("--t-max", t_max, "window end");
    spectrum->add_option("--step", step, "scan step");
    spectrum->add_option("--sigma", sigma, "scan line");

    auto* verify = app.add_subcommand("verify", "run a named invariant suite");
    std::string suite, z_list, grid_text;
    add_kernel_flags(verify, kopt);
    add_output_flags(verify, out);
    verify->add_option("--suite", suite, "prop21 | eigen | asymptotic | functional | oracle")
        ->required();
    verify->add_option("--z", z_list, "comma-separated list of a+bi points");
    verify->add_option("--grid", grid_text, "grid as min:max:count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(kopt, out, eng, z_text, x, force);
        if (zeros->parsed()) return cmd_zeros(kopt, out, t_min, t_max, step, sigma, cache);
        if (spectrum->parsed())
            return cmd_spectrum(kopt, out, from_cache, t_min, t_max, step, sigma);
        if (verify->parsed()) return cmd_verify(kopt, out, suite, z_list, grid_text);
    } catch (const pole_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kNumeric;
    } catch (const convergence_error& e) {
        std::fprintf(stderr, "numerical error: %s (achieved %.3g)\n", e.what(), e.achieved);
        return kNumeric;
    } catch (const window_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kNumeric;
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
