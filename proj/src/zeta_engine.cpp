#include "zhl/zeta_engine.hpp"
#include "zhl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace zhl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;

// B_{2j} / (2j)! for the Euler-Maclaurin corrections, j = 1..12.
constexpr long double kBernFact[13] = {
    0.0L,
    1.0L / 12.0L,
    -1.0L / 720.0L,
    1.0L / 30240.0L,
    -1.0L / 1209600.0L,
    1.0L / 47900160.0L,
    -691.0L / 1307674368000.0L,
    1.0L / 74724249600.0L,
    -3617.0L / 10670622842880000.0L,
    43867.0L / 5109094217170944000.0L,
    -174611.0L / 802857662698291200000.0L,
    854513.0L / 155112100433309859840000.0L,
    -236364091.0L / 1693824136731743669452800000.0L,
};

double mellin_gate(const Kernel& k) {
    return k.has_prefactor ? std::max(1.0, k.abscissa) : 1.0;
}

// Truncation point where t^{max(0,Re z - 1)} K e^{-beta t} drops below the
// target tail mass.
double tail_cut(double re_z, double beta, double decay_bound, double from) {
    const double p = std::max(0.0, re_z - 1.0);
    double t = std::max(from + 5.0, 30.0 / beta);
    for (int it = 0; it < 3; ++it) {
        t = (42.0 + std::log(std::max(decay_bound, 1.0)) + p * std::log(std::max(t, 2.0))) / beta;
        t = std::max(t, from + 5.0);
    }
    return std::min(t, from + 4000.0 / beta);
}

// f(-t) for the engine's real-axis integrands, through the analytic core so
// that checked kernels (Hecke) are evaluated with truncated-object
// semantics and small t stays stable.
Complex f_neg_engine(const Kernel& k, double t) {
    return k.eval_neg_tf(Complex(-t, 0.0)) / t; // t f(-t) = (-s) f(s) at s = -t
}

EvaluationResult oracle_result(const Kernel& k, Complex z, double x, const EngineConfig& cfg) {
    if (!k.pattern)
        throw domain_error("oracle_L: no closed-form oracle for kernel '" + k.name + "'");
    const auto& pat = *k.pattern;
    std::complex<long double> acc(0.0L, 0.0L);
    const std::complex<long double> zl(z.real(), z.imag());
    for (int r = 1; r <= pat.period; ++r) {
        const Complex c = pat.coeffs[r - 1];
        if (std::abs(c) < 1e-15) continue;
        acc += std::complex<long double>(c.real(), c.imag()) *
               hurwitz_em_l(zl, ((long double)x - 1.0L + r) / pat.period, cfg.em_terms,
                            cfg.em_order);
    }
    acc *= std::exp(-zl * std::log((long double)pat.period));
    const Complex v((double)acc.real(), (double)acc.imag());
    return {v, 1e-13 * std::abs(v) + 1e-300, Method::oracle};
}

// Predicted relative noise of the integral representations: the quadrature
// works at the scale of Gamma(z) L, so dividing back by Gamma(z) amplifies
// roundoff by 1/|Gamma(z)|.
double conditioning_noise(Complex z) {
    return 100.0 * kEps * std::abs(reciprocal_gamma(z));
}

} // namespace

void ContourSpec::validate(double kernel_radius) const {
    if (epsilon < 0.0 || ray_cut < 0.0)
        throw domain_error("ContourSpec: epsilon and ray_cut must be >= 0");
    if (epsilon > 0.0 && epsilon >= kernel_radius)
        throw domain_error("ContourSpec: contour touches a pole of t f(t) (epsilon >= radius)");
    if (ray_cut > 0.0 && ray_cut <= epsilon)
        throw domain_error("ContourSpec: ray_cut must exceed epsilon");
    if (circle_nodes < 16) throw domain_error("ContourSpec: circle_nodes must be >= 16");
    ray_spec.validate();
}

const char* method_name(Method m) {
    switch (m) {
        case Method::mellin: return "mellin";
        case Method::hankel: return "hankel";
        case Method::oracle: return "oracle";
        case Method::series_reduced: return "series-reduced";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Mellin path

namespace {

struct HeadPiece {
    Complex value{};
    double err = 0.0;
    double abs_sum = 0.0;
};

// Exact head Int_0^h t^{z-2} [t f(-t) e^{-(x-1)t}] dt as a Taylor series:
// the bracket is analytic with coefficients d_k = conv(a_n (-1)^n, (1-x)^j/j!),
// so each term integrates to d_k h^{z-1+k}/(z-1+k).  Geometric in h/radius;
// also the t^{z-2} endpoint behavior is handled exactly, oscillation-free.
HeadPiece mellin_series_head(const Kernel& kernel, Complex z, double x, double h) {
    const int K = static_cast<int>(kernel.taylor.size());
    std::vector<double> e(K);
    e[0] = 1.0;
    for (int j = 1; j < K; ++j) e[j] = e[j - 1] * (1.0 - x) / j;
    HeadPiece out;
    Complex hp = complex_pow(Complex(h, 0.0), z - 1.0);
    double last = 0.0;
    for (int k = 0; k < K; ++k) {
        Complex d(0.0, 0.0);
        for (int n = 0; n <= k; ++n)
            d += kernel.taylor[n] * ((n % 2 == 0) ? e[k - n] : -e[k - n]);
        const Complex term = d * hp / (z - 1.0 + static_cast<double>(k));
        out.value += term;
        out.abs_sum += std::abs(term);
        last = std::abs(term);
        hp *= h;
    }
    // Geometric tail bound from the last kept term.
    const double ratio = std::min(h / (0.9 * kernel.radius), 0.9);
    out.err = last * ratio / (1.0 - ratio) + 4.0 * kEps * out.abs_sum;
    return out;
}

} // namespace

EvaluationResult mellin_L(const Kernel& kernel, Complex z, double x,
                          const QuadratureSpec& spec) {
    detail::require_finite(z, "mellin_L");
    detail::require_finite(x, "mellin_L");
    spec.validate();
    if (!(x > 0.0)) throw domain_error("mellin_L: x must be > 0");
    const double gate = mellin_gate(kernel);
    if (!(z.real() > gate))
        throw domain_error("mellin_L: Re z must exceed the kernel abscissa");
    const double beta = x - 1.0 + kernel.decay_alpha;
    if (!(beta > 0.0))
        throw domain_error("mellin_L: integrand does not decay for this x");

    const double head_end = std::min(0.25 * kernel.radius, 1.0);
    const double T = tail_cut(z.real(), beta, kernel.decay_bound, head_end);

    const HeadPiece head = mellin_series_head(kernel, z, x, head_end);
    auto tail_g = [&](double t) {
        return complex_pow(Complex(t, 0.0), z - 1.0) * std::exp(-(x - 1.0) * t) *
               f_neg_engine(kernel, t);
    };
    const IntegralEstimate tail = integrate_panels(tail_g, head_end, T, spec);

    const Complex J = head.value + tail.value;
    const double quad_err = head.err + tail.est_error;
    const double abs_mass = head.abs_sum + tail.abs_integral;
    const Complex scale = kernel.apply_prefactor(z) * reciprocal_gamma(z);

    EvaluationResult r;
    r.value = scale * J;
    r.est_error = std::abs(scale) * (quad_err + 10.0 * kEps * abs_mass);
    r.method = Method::mellin;
    return r;
}

// ---------------------------------------------------------------------------
// Hankel path

EvaluationResult hankel_I(const Kernel& kernel, Complex z, double x,
                          const ContourSpec& spec) {
    detail::require_finite(z, "hankel_I");
    detail::require_finite(x, "hankel_I");
    spec.validate(kernel.radius);
    if (!(x > kernel.contour_window_min()))
        throw window_error("hankel_I: x outside the kernel's contour-convergence window");

    const double eps = spec.epsilon > 0.0 ? spec.epsilon : std::min(0.5 * kernel.radius, 0.5);
    if (eps >= kernel.radius)
        throw domain_error("hankel_I: contour touches a pole of t f(t)");

    // Rays C1/C3: arg t = -pi and +pi.  Both reduce to the same real-axis
    // integral R; the phases combine into e^{i pi z} - e^{-i pi z}.
    const double beta = x - 1.0 + kernel.decay_alpha;
    const double T =
        spec.ray_cut > 0.0 ? spec.ray_cut : tail_cut(z.real(), beta, kernel.decay_bound, eps);
    auto ray_g = [&](double u) {
        return complex_pow(Complex(u, 0.0), z - 1.0) * std::exp(-(x - 1.0) * u) *
               f_neg_engine(kernel, u);
    };
    const IntegralEstimate R = integrate_panels(ray_g, eps, T, spec.ray_spec);
    const Complex phase_up = complex_pow(Complex(-1.0, 0.0), z, kPi);
    const Complex phase_dn = complex_pow(Complex(-1.0, 0.0), z, -kPi);
    const Complex ray_factor = (phase_up - phase_dn) / Complex(0.0, 2.0 * kPi);
    const Complex rays = ray_factor * R.value;

    // Circle C2, theta in [-pi, pi], kept at finite epsilon:
    // (1/2 pi i) Int = -(1/2 pi) Int exp((z-1)(log eps + i theta))
    //                               e^{(x-1) eps e^{i theta}} (-t f(t)) dtheta.
    const double log_eps = std::log(eps);
    auto circle_g = [&](double th) {
        const Complex t = eps * std::exp(Complex(0.0, th));
        return std::exp((z - 1.0) * Complex(log_eps, th) + (x - 1.0) * t) *
               kernel.eval_neg_tf(t);
    };
    QuadratureSpec circle_spec = spec.ray_spec;
    circle_spec.nodes_per_panel = std::max(2, spec.circle_nodes / 4);
    circle_spec.max_panels = std::max(circle_spec.max_panels, 64);
    const IntegralEstimate C = integrate_panels(circle_g, -kPi, kPi, circle_spec);
    const Complex circle = -C.value / (2.0 * kPi);

    EvaluationResult r;
    r.value = rays + circle;
    const double parts_mass = std::abs(ray_factor) * R.abs_integral + C.abs_integral / (2.0 * kPi);
    const double quad_err =
        std::abs(ray_factor) * R.est_error + C.est_error / (2.0 * kPi);
    r.est_error = quad_err + 10.0 * kEps * parts_mass;
    r.method = Method::hankel;
    return r;
}

// ---------------------------------------------------------------------------
// Dispatcher

EvaluationResult continued_L(const Kernel& kernel, Complex z, double x,
                             const EngineConfig& cfg) {
    detail::require_finite(z, "continued_L");
    detail::require_finite(x, "continued_L");
    if (!(x > 0.0)) throw domain_error("continued_L: x must be > 0");
    if (std::abs(z - Complex(1.0, 0.0)) < 1e-13)
        throw pole_error("continued_L: z = 1 is the pole of the family");

    if (cfg.force == ForcePath::mellin) return mellin_L(kernel, z, x, cfg.quad);

    const bool has_oracle = oracle_available(kernel);
    const double gate = mellin_gate(kernel);

    if (cfg.force == ForcePath::none && z.real() > gate) {
        if (has_oracle && conditioning_noise(z) > cfg.oracle_fallback_rel)
            return oracle_result(kernel, z, x, cfg);
        EvaluationResult r = mellin_L(kernel, z, x, cfg.quad);
        if (has_oracle && r.est_error > cfg.oracle_fallback_rel * std::abs(r.value))
            return oracle_result(kernel, z, x, cfg);
        return r;
    }

    if (cfg.force == ForcePath::none && has_oracle &&
        conditioning_noise(z) > cfg.oracle_fallback_rel)
        return oracle_result(kernel, z, x, cfg);

    // Raise x into a comfortably convergent region with the exact shift
    // reduction, accumulating the elementary terms.
    double xr = x;
    Complex acc(0.0, 0.0);
    int steps = 0;
    if (kernel.shift) {
        while (xr < 1.0) {
            acc += kernel.shift->elementary(z, xr);
            xr += kernel.shift->delta;
            ++steps;
        }
    }
    const EvaluationResult I = hankel_I(kernel, z, xr, cfg.contour);
    const Complex g1z = std::exp(log_gamma(1.0 - z)); // Re z <= 1, z != 1: no pole
    EvaluationResult r;
    r.value = acc + g1z * I.value;
    r.est_error = std::abs(g1z) * I.est_error + kEps * std::abs(acc);
    r.method = steps > 0 ? Method::series_reduced : Method::hankel;
    if (cfg.force == ForcePath::none && has_oracle &&
        r.est_error > cfg.oracle_fallback_rel * std::abs(r.value))
        return oracle_result(kernel, z, x, cfg);
    return r;
}

EvaluationResult continued_L(const Kernel& kernel, Complex z, double x) {
    return continued_L(kernel, z, x, EngineConfig{});
}

EvaluationResult continued_L(const Kernel& kernel, Complex z) {
    return continued_L(kernel, z, 1.0, EngineConfig{});
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin oracle

namespace {

template <typename R>
std::complex<R> pow_real_base(R base, std::complex<R> expo) {
    return std::exp(expo * std::log(base));
}

template <typename R>
std::complex<R> hurwitz_em_impl(std::complex<R> z, R x, int terms, int order) {
    if (!(x > R(0))) throw domain_error("hurwitz_em: x must be > 0");
    if (z == std::complex<R>(R(1), R(0)))
        throw pole_error("hurwitz_em: pole at z = 1");
    if (terms < 1) throw domain_error("hurwitz_em: terms must be >= 1");
    order = std::clamp(order, 0, 12);

    const int n_sum = terms;
    std::complex<R> acc(R(0), R(0));
    for (int k = 0; k < n_sum; ++k) acc += pow_real_base(x + R(k), -z);
    const R w = x + R(n_sum);
    acc += pow_real_base(w, std::complex<R>(R(1), R(0)) - z) / (z - std::complex<R>(R(1), R(0)));
    acc += R(0.5) * pow_real_base(w, -z);

    // Bernoulli corrections: B_{2j}/(2j)! * z(z+1)...(z+2j-2) * w^{-z-2j+1}.
    std::complex<R> rising(R(1), R(0)); // prod_{i=0}^{2j-2} (z+i)
    for (int j = 1; j <= order; ++j) {
        if (j == 1)
            rising = z;
        else
            rising *= (z + R(2 * j - 3)) * (z + R(2 * j - 2));
        acc += R(kBernFact[j]) * rising *
               pow_real_base(w, -z - std::complex<R>(R(2 * j - 1), R(0)));
    }
    return acc;
}

} // namespace

Complex hurwitz_em(Complex z, double x, int terms, int correction_order) {
    detail::require_finite(z, "hurwitz_em");
    detail::require_finite(x, "hurwitz_em");
    const std::complex<long double> v = hurwitz_em_impl<long double>(
        std::complex<long double>(z.real(), z.imag()), (long double)x, terms, correction_order);
    return Complex((double)v.real(), (double)v.imag());
}

std::complex<long double> hurwitz_em_l(std::complex<long double> z, long double x, int terms,
                                       int correction_order) {
    return hurwitz_em_impl<long double>(z, x, terms, correction_order);
}

bool oracle_available(const Kernel& kernel) { return kernel.pattern.has_value(); }

Complex oracle_L(const Kernel& kernel, Complex z, double x) {
    const std::complex<long double> v =
        oracle_L_l(kernel, std::complex<long double>(z.real(), z.imag()), (long double)x);
    return Complex((double)v.real(), (double)v.imag());
}

std::complex<long double> oracle_L_l(const Kernel& kernel, std::complex<long double> z,
                                     long double x) {
    if (!kernel.pattern)
        throw domain_error("oracle_L: no closed-form oracle for kernel '" + kernel.name + "'");
    if (!(x > 0.0L)) throw domain_error("oracle_L: x must be > 0");
    const auto& pat = *kernel.pattern;
    const long double m = pat.period;
    // sum_r c_r m^{-z} zeta(z, (x - 1 + r)/m)
    std::complex<long double> acc(0.0L, 0.0L);
    for (int r = 1; r <= pat.period; ++r) {
        const Complex c = pat.coeffs[r - 1];
        if (std::abs(c) < 1e-15) continue;
        acc += std::complex<long double>(c.real(), c.imag()) *
               hurwitz_em_l(z, (x - 1.0L + r) / m);
    }
    return std::exp(-z * std::log(m)) * acc;
}

// ---------------------------------------------------------------------------
// Functional equation

double functional_equation_residual(Complex z) {
    detail::require_finite(z, "functional_equation_residual");
    if (!(z.real() < 1.0))
        throw domain_error("functional_equation_residual: need Re z < 1");
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        const double r = std::rint(z.real());
        if (std::abs(z.real() - r) < 1e-9 && std::fmod(r, 2.0) == 0.0)
            throw domain_error("functional_equation_residual: trivial zero (0/0)");
    }
    const Complex zeta_z = hurwitz_em(z, 1.0);
    const Complex zeta_1mz = hurwitz_em(1.0 - z, 1.0);
    const Complex rhs = 2.0 * complex_pow(Complex(2.0 * kPi, 0.0), z - 1.0) *
                        std::exp(log_gamma(1.0 - z)) * std::sin(0.5 * kPi * z) * zeta_1mz;
    return std::abs(zeta_z - rhs) / std::abs(zeta_z);
}

} // namespace zhl
