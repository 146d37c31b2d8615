#include "zhl/kernels.hpp"
#include "zhl/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace zhl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTaylorLen = 41; // a_0..a_40 precomputed for every built-in

using ComplexL = std::complex<long double>;

// exp(w) - 1 without cancellation near w = 0.
Complex cexpm1(Complex w) {
    if (std::abs(w) < 0.5) {
        Complex term = w, sum = w;
        for (int k = 2; k <= 24; ++k) {
            term *= w / static_cast<double>(k);
            sum += term;
        }
        return sum;
    }
    return std::exp(w) - 1.0;
}

Complex eval_series(const std::vector<Complex>& a, Complex t) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * t + a[i];
    return acc;
}

// --- long double power-series helpers (coefficients of built-in kernels) ---

std::vector<ComplexL> series_reciprocal(const std::vector<ComplexL>& h, int len) {
    std::vector<ComplexL> b(len);
    b[0] = ComplexL(1.0L) / h[0];
    for (int n = 1; n < len; ++n) {
        ComplexL acc(0.0L);
        for (int k = 1; k <= n; ++k) acc += (k < (int)h.size() ? h[k] : ComplexL(0.0L)) * b[n - k];
        b[n] = -acc / h[0];
    }
    return b;
}

std::vector<ComplexL> series_product(const std::vector<ComplexL>& a,
                                     const std::vector<ComplexL>& b, int len) {
    std::vector<ComplexL> c(len, ComplexL(0.0L));
    for (int i = 0; i < len && i < (int)a.size(); ++i)
        for (int j = 0; i + j < len && j < (int)b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// R(u) = u / (1 - e^{-u}) = sum r_k u^k; core of every exponential kernel.
std::vector<ComplexL> riemann_core_series(int len) {
    std::vector<ComplexL> h(len);
    long double fact = 1.0L;
    for (int k = 0; k < len; ++k) {
        fact *= (k + 1);
        h[k] = ComplexL((k % 2 == 0 ? 1.0L : -1.0L) / fact); // (1-e^{-u})/u
    }
    return series_reciprocal(h, len);
}

// S(u) = u / (e^u - 1) = R(-u).
std::vector<ComplexL> bernoulli_core_series(int len) {
    auto r = riemann_core_series(len);
    for (int k = 1; k < len; k += 2) r[k] = -r[k];
    return r;
}

std::vector<ComplexL> exp_series(long double c, int len) {
    std::vector<ComplexL> e(len);
    e[0] = 1.0L;
    for (int k = 1; k < len; ++k) e[k] = e[k - 1] * c / static_cast<long double>(k);
    return e;
}

std::vector<Complex> downcast(const std::vector<ComplexL>& v) {
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = Complex(static_cast<double>(v[i].real()), static_cast<double>(v[i].imag()));
    return out;
}

double measure_decay_bound(const std::function<Complex(double)>& f_neg, double alpha) {
    double k = 0.0;
    for (double t = 1.0; t <= 10.0; t += 0.5)
        k = std::max(k, std::abs(f_neg(t)) * std::exp(alpha * t));
    return std::max(k, 1e-12);
}

ShiftReduction pattern_shift(const DirichletPattern& p) {
    ShiftReduction s;
    s.delta = p.period;
    s.elementary = [p](Complex z, double x) {
        Complex acc(0.0, 0.0);
        for (int r = 1; r <= p.period; ++r)
            acc += p.coeffs[r - 1] * complex_pow(Complex(x + r - 1.0, 0.0), -z);
        return acc;
    };
    return s;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

} // namespace

// ---------------------------------------------------------------------------
// DirichletCharacter

Complex DirichletCharacter::operator()(long long n) const {
    long long r = n % modulus;
    if (r < 0) r += modulus;
    return values[static_cast<std::size_t>(r)];
}

void DirichletCharacter::validate() const {
    if (modulus < 1) throw kernel_error("character: modulus must be >= 1");
    if (static_cast<int>(values.size()) != modulus)
        throw kernel_error("character: value table must have exactly m entries");
    const double tol = 1e-9;
    for (int r = 0; r < modulus; ++r) {
        const double mag = std::abs(values[r]);
        const bool unit = gcd_ll(r, modulus) == 1;
        if (unit && std::abs(mag - 1.0) > tol)
            throw kernel_error("character: |chi(r)| must be 1 on units");
        if (!unit && mag > tol)
            throw kernel_error("character: chi(r) must vanish off units");
    }
    for (int a = 0; a < modulus; ++a)
        for (int b = 0; b < modulus; ++b) {
            const Complex lhs = values[(a * b) % modulus];
            const Complex rhs = values[a] * values[b];
            if (std::abs(lhs - rhs) > tol)
                throw kernel_error("character: not completely multiplicative");
        }
}

DirichletCharacter DirichletCharacter::principal(int m) {
    if (m < 1) throw kernel_error("character: modulus must be >= 1");
    DirichletCharacter chi;
    chi.modulus = m;
    chi.values.assign(m, Complex(0.0, 0.0));
    for (int r = 0; r < m; ++r)
        if (gcd_ll(r, m) == 1) chi.values[r] = Complex(1.0, 0.0);
    chi.validate();
    return chi;
}

DirichletCharacter DirichletCharacter::mod3_nonprincipal() {
    DirichletCharacter chi;
    chi.modulus = 3;
    chi.values = {Complex(0.0), Complex(1.0), Complex(-1.0)};
    chi.validate();
    return chi;
}

DirichletCharacter DirichletCharacter::mod4_nonprincipal() {
    DirichletCharacter chi;
    chi.modulus = 4;
    chi.values = {Complex(0.0), Complex(1.0), Complex(0.0), Complex(-1.0)};
    chi.validate();
    return chi;
}

DirichletCharacter DirichletCharacter::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw kernel_error(std::string("character: bad JSON: ") + e.what());
    }
    if (!j.contains("modulus") || !j.contains("values"))
        throw kernel_error("character: JSON needs 'modulus' and 'values'");
    DirichletCharacter chi;
    chi.modulus = j["modulus"].get<int>();
    chi.values.clear();
    for (const auto& v : j["values"]) {
        if (!v.is_array() || v.size() != 2)
            throw kernel_error("character: each value must be [re, im]");
        chi.values.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    chi.validate();
    return chi;
}

DirichletCharacter DirichletCharacter::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kernel_error("character: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

// ---------------------------------------------------------------------------
// Cusp form coefficients

void CuspFormCoefficients::validate() const {
    if (weight < 4 || weight % 2 != 0)
        throw kernel_error("cusp form: weight must be an even integer >= 4");
    if (lambda.empty() || lambda[0] != 1.0)
        throw kernel_error("cusp form: normalized expansion needs lambda_1 = 1");
}

CuspFormCoefficients compute_tau_coefficients(int n_max) {
    if (n_max < 1) throw domain_error("compute_tau_coefficients: n_max must be >= 1");
    // Coefficients of prod_{k} (1 - q^k)^24 up to q^{n_max - 1}.
    static const long long binom24[25] = {
        1,       24,      276,     2024,    10626,   42504,  134596, 346104, 735471,
        1307504, 1961256, 2496144, 2704156, 2496144, 1961256, 1307504, 735471, 346104,
        134596,  42504,   10626,   2024,    276,     24,      1};
    const int m = n_max;
    std::vector<__int128> p(m, 0);
    p[0] = 1;
    std::vector<__int128> tmp(m);
    for (int k = 1; k < m; ++k) {
        std::fill(tmp.begin(), tmp.end(), 0);
        for (int i = 0; i < m; ++i) {
            if (p[i] == 0) continue;
            for (int j = 0; j <= 24 && i + j * k < m; ++j) {
                const __int128 c = (j % 2 == 0 ? binom24[j] : -binom24[j]);
                tmp[i + j * k] += p[i] * c;
            }
        }
        p.swap(tmp);
    }
    CuspFormCoefficients out;
    out.weight = 12;
    out.lambda.resize(n_max);
    for (int n = 1; n <= n_max; ++n) out.lambda[n - 1] = static_cast<double>((long long)p[n - 1]);
    return out;
}

// ---------------------------------------------------------------------------
// Kernel helpers

double Kernel::contour_window_min() const { return std::max(0.0, 1.0 - decay_alpha); }

Complex Kernel::apply_prefactor(Complex z) const {
    return has_prefactor ? prefactor(z) : Complex(1.0, 0.0);
}

namespace detail {

ShiftDeltaForm delta_form_from_pattern(const DirichletPattern& pattern) {
    const int m = pattern.period;
    // seq(k) = coefficient attached to (k + x)^{-z}, k mod m (index 1..m).
    auto seq = [&](int k) {
        int r = ((k - 1) % m + m) % m;
        return pattern.coeffs[r];
    };
    // Fourier support of the periodic sequence.
    std::vector<int> support;
    double top = 0.0;
    std::vector<Complex> hat(m);
    for (int a = 0; a < m; ++a) {
        Complex acc(0.0, 0.0);
        for (int k = 0; k < m; ++k)
            acc += seq(k) * std::exp(Complex(0.0, -2.0 * kPi * a * k / m));
        hat[a] = acc;
        top = std::max(top, std::abs(acc));
    }
    for (int a = 0; a < m; ++a)
        if (std::abs(hat[a]) > 1e-9 * top) support.push_back(a);
    // q(y) = prod_{a in support} (y - e^{-2 pi i a / m}) annihilates the
    // sequence backwards: sum_j q_j seq(i - j) = 0 for all i.
    std::vector<Complex> q{Complex(1.0, 0.0)};
    for (int a : support) {
        const Complex root = std::exp(Complex(0.0, -2.0 * kPi * a / m));
        std::vector<Complex> next(q.size() + 1, Complex(0.0, 0.0));
        for (std::size_t j = 0; j < q.size(); ++j) {
            next[j + 1] += q[j];
            next[j] -= root * q[j];
        }
        q = std::move(next);
    }
    ShiftDeltaForm form;
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (std::abs(q[j]) < 1e-13) continue;
        Complex w = q[j];
        if (std::abs(w.imag()) < 1e-13) w = Complex(w.real(), 0.0); // real patterns stay real
        form.terms.emplace_back(static_cast<double>(j) - 1.0, w);
    }
    return form;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Built-in kernels

Kernel make_riemann_kernel() {
    Kernel k;
    k.name = "riemann";
    k.radius = 2.0 * kPi;
    k.decay_alpha = 1.0;
    k.abscissa = 1.0;
    k.pattern = DirichletPattern{1, {Complex(1.0, 0.0)}};

    auto core = riemann_core_series(kTaylorLen); // t / (1 - e^{-t})
    k.taylor = downcast(core);

    auto taylor = k.taylor;
    k.eval_neg_tf = [taylor](Complex t) {
        if (std::abs(t) < 0.5) return eval_series(taylor, t);
        return -t / cexpm1(-t);
    };
    k.eval_f = [neg_tf = k.eval_neg_tf](Complex t) { return neg_tf(t) / (-t); };
    k.eval_f_neg = [](double t) { return Complex(1.0 / std::expm1(t), 0.0); };

    k.shift = pattern_shift(*k.pattern);
    k.delta_form_hint = detail::delta_form_from_pattern(*k.pattern);
    k.decay_bound = measure_decay_bound(k.eval_f_neg, k.decay_alpha);
    return k;
}

Kernel make_lambda_kernel() {
    Kernel k;
    k.name = "lambda";
    k.radius = kPi;
    k.decay_alpha = 1.0;
    k.abscissa = 1.0;
    k.pattern = DirichletPattern{2, {Complex(1.0, 0.0), Complex(0.0, 0.0)}};

    // (-t) f(t) = t e^{-t} / (1 - e^{-2t}) = (1/2) e^{-t} R(2t).
    auto core = riemann_core_series(kTaylorLen);
    for (int n = 0; n < kTaylorLen; ++n) core[n] *= std::pow(2.0L, (long double)n);
    auto prod = series_product(exp_series(-1.0L, kTaylorLen), core, kTaylorLen);
    for (auto& c : prod) c *= 0.5L;
    k.taylor = downcast(prod);

    auto taylor = k.taylor;
    k.eval_neg_tf = [taylor](Complex t) {
        if (std::abs(t) < 0.25) return eval_series(taylor, t);
        return -t * std::exp(-t) / cexpm1(-2.0 * t);
    };
    k.eval_f = [neg_tf = k.eval_neg_tf](Complex t) { return neg_tf(t) / (-t); };
    // e^t / (e^{2t} - 1) = 1 / (2 sinh t)
    k.eval_f_neg = [](double t) { return Complex(0.5 / std::sinh(t), 0.0); };

    k.shift = pattern_shift(*k.pattern);
    k.delta_form_hint = detail::delta_form_from_pattern(*k.pattern);
    k.decay_bound = measure_decay_bound(k.eval_f_neg, k.decay_alpha);
    return k;
}

Kernel make_dirichlet_kernel(const DirichletCharacter& chi) {
    chi.validate();
    const int m = chi.modulus;
    Kernel k;
    {
        std::ostringstream name;
        name << "dirichlet-m" << m << "-";
        for (int r = 0; r < m; ++r) {
            const Complex v = chi.values[r];
            name << (std::abs(v) < 1e-9 ? '0' : (std::abs(v - Complex(1.0)) < 1e-9 ? '1' : 'c'));
        }
        k.name = name.str();
    }
    k.radius = 2.0 * kPi / m;
    k.decay_alpha = 1.0;
    k.abscissa = 1.0;
    DirichletPattern pat;
    pat.period = m;
    pat.coeffs.resize(m);
    for (int n = 1; n <= m; ++n) pat.coeffs[n - 1] = chi(n);
    k.pattern = pat;

    // (-t) f(t) = (1/m) sum_r chi(r) e^{rt} * S(mt),  S(u) = u/(e^u - 1).
    auto s_core = bernoulli_core_series(kTaylorLen);
    for (int n = 0; n < kTaylorLen; ++n) s_core[n] *= std::pow((long double)m, (long double)n);
    std::vector<ComplexL> acc(kTaylorLen, ComplexL(0.0L));
    for (int r = 1; r <= m; ++r) {
        const Complex c = chi(r);
        if (std::abs(c) < 1e-15) continue;
        auto term = series_product(exp_series((long double)r, kTaylorLen), s_core, kTaylorLen);
        for (int n = 0; n < kTaylorLen; ++n)
            acc[n] += ComplexL(c.real(), c.imag()) * term[n] / (long double)m;
    }
    k.taylor = downcast(acc);

    auto taylor = k.taylor;
    const auto chi_copy = chi;
    k.eval_neg_tf = [taylor, chi_copy, m](Complex t) {
        if (std::abs(t) < 0.5 / m) return eval_series(taylor, t);
        Complex num(0.0, 0.0);
        for (int r = 1; r <= m; ++r) num += chi_copy(r) * std::exp(double(r) * t);
        return t * num / cexpm1(double(m) * t);
    };
    k.eval_f = [neg_tf = k.eval_neg_tf](Complex t) { return neg_tf(t) / (-t); };
    k.eval_f_neg = [chi_copy, m](double t) {
        Complex num(0.0, 0.0);
        for (int r = 1; r <= m; ++r) num += chi_copy(r) * std::exp(-double(r) * t);
        return num / (-std::expm1(-double(m) * t));
    };

    k.shift = pattern_shift(*k.pattern);
    k.delta_form_hint = detail::delta_form_from_pattern(*k.pattern);
    k.decay_bound = measure_decay_bound(k.eval_f_neg, k.decay_alpha);
    return k;
}

Kernel make_hecke_kernel(const CuspFormCoefficients& coeffs) {
    coeffs.validate();
    const int n_terms = static_cast<int>(coeffs.lambda.size());
    if (n_terms < 50)
        throw kernel_error("hecke kernel: need at least 50 Fourier coefficients");
    Kernel k;
    {
        std::ostringstream name;
        name << "hecke-w" << coeffs.weight << "-N" << n_terms;
        k.name = name.str();
    }
    // The shipped object is the truncated series, entire in t; the stored
    // radius is where the precomputed Taylor data reproduces it.
    k.radius = 2.0 / n_terms;
    k.decay_alpha = 2.0 * kPi;
    k.abscissa = (coeffs.weight + 1) / 2.0; // classical abscissa for weight w+2
    k.has_prefactor = true;
    k.prefactor = [](Complex z) { return complex_pow(Complex(2.0 * kPi, 0.0), z); };

    const std::vector<double> lam = coeffs.lambda;
    // a_0 = 0; a_n = -sum_k lambda_k (2 pi k)^{n-1} / (n-1)!
    {
        std::vector<ComplexL> a(kTaylorLen, ComplexL(0.0L));
        for (int kk = 1; kk <= n_terms; ++kk) {
            long double pw = 1.0L, fact = 1.0L;
            const long double w = 2.0L * (long double)kPi * kk;
            for (int n = 1; n < kTaylorLen; ++n) {
                a[n] -= (long double)lam[kk - 1] * pw / fact;
                pw *= w;
                fact *= n;
            }
        }
        k.taylor = downcast(a);
    }

    const double lam_last = std::abs(lam.back());
    // Truncated-object semantics: the analytic core is the finite sum itself.
    k.eval_neg_tf = [lam, n_terms](Complex t) {
        Complex sum(0.0, 0.0);
        for (int n = 1; n <= n_terms; ++n)
            sum += lam[n - 1] * std::exp(2.0 * kPi * double(n) * t);
        return -t * sum;
    };
    k.eval_f = [neg_tf = k.eval_neg_tf](Complex t) { return neg_tf(t) / (-t); };
    k.eval_f_neg = [lam, n_terms, lam_last](double t) {
        Complex sum(0.0, 0.0);
        for (int n = n_terms; n >= 1; --n)
            sum += lam[n - 1] * std::exp(-2.0 * kPi * double(n) * t);
        // Tail estimate against the true (untruncated) expansion.
        const double tail =
            lam_last * std::exp(-2.0 * kPi * n_terms * t) * (1.0 + 1.0 / std::max(t, 1e-6)) * 4.0;
        if (tail > 1e-9 * (std::abs(sum) + 1e-300))
            throw kernel_error("hecke kernel: truncation tail exceeds tolerance at this t");
        return sum;
    };

    k.decay_bound = 2.0; // leading term e^{-2 pi t}, lambda_1 = 1
    return k;
}

// ---------------------------------------------------------------------------
// Taylor data

std::vector<Complex> kernel_taylor(const Kernel& kernel, int N) {
    if (N < 0 || N > 40) throw domain_error("kernel_taylor: need 0 <= N <= 40");
    if (static_cast<int>(kernel.taylor.size()) >= N + 1)
        return {kernel.taylor.begin(), kernel.taylor.begin() + N + 1};

    // Contour samples of (-t) f(t) on |t| = radius/4.
    const double rho = kernel.radius / 4.0;
    const int samples = 256;
    const int n_internal = std::max(N, 24); // enough terms for the resum check
    std::vector<Complex> vals(samples);
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * kPi * j / samples;
        vals[j] = kernel.eval_neg_tf(rho * std::exp(Complex(0.0, th)));
    }
    std::vector<Complex> a(n_internal + 1);
    for (int n = 0; n <= n_internal; ++n) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < samples; ++j) {
            const double th = 2.0 * kPi * j / samples;
            acc += vals[j] * std::exp(Complex(0.0, -n * th));
        }
        a[n] = acc / (double(samples) * std::pow(rho, n));
    }
    // Self-check: resum must reproduce fresh samples on |t| = rho/2.
    for (int j = 0; j < 8; ++j) {
        const Complex t = 0.5 * rho * std::exp(Complex(0.0, 2.0 * kPi * (j + 0.37) / 8));
        const Complex direct = kernel.eval_neg_tf(t);
        if (std::abs(eval_series(a, t) - direct) > 1e-8 * (1.0 + std::abs(direct)))
            throw kernel_error("kernel_taylor: numeric differentiation failed its self-check "
                               "(radius exceeded?)");
    }
    a.resize(N + 1);
    return a;
}

} // namespace zhl
