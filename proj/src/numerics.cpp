#include "zhl/numerics.hpp"
#include "zhl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace zhl {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, 9 coefficients (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoef[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::rint(z.real());
}

} // namespace

namespace detail {

void require_finite(Complex z, const char* where) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw domain_error(std::string(where) + ": non-finite complex argument");
}

void require_finite(double x, const char* where) {
    if (!std::isfinite(x))
        throw domain_error(std::string(where) + ": non-finite argument");
}

} // namespace detail

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw domain_error("QuadratureSpec: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw domain_error("QuadratureSpec: abs_tol must be >= 0");
    if (max_panels < 1) throw domain_error("QuadratureSpec: max_panels must be >= 1");
    if (nodes_per_panel < 2) throw domain_error("QuadratureSpec: nodes_per_panel must be >= 2");
}

void GridSpec::validate() const {
    if (!(0.0 < x_min) || !(x_min < x_max))
        throw domain_error("GridSpec: need 0 < x_min < x_max");
    if (count < 2) throw domain_error("GridSpec: count must be >= 2");
}

Complex log_gamma(Complex z) {
    detail::require_finite(z, "log_gamma");
    if (is_nonpositive_integer(z))
        throw pole_error("log_gamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // Reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1-z).
        return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
    }
    const Complex zm = z - 1.0;
    Complex acc = kLanczosCoef[0];
    for (int i = 1; i < 9; ++i) acc += kLanczosCoef[i] / (zm + static_cast<double>(i));
    const Complex t = zm + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(acc);
}

Complex reciprocal_gamma(Complex z) {
    detail::require_finite(z, "reciprocal_gamma");
    if (is_nonpositive_integer(z)) return Complex(0.0, 0.0);
    if (z.real() < 0.5)
        return std::sin(kPi * z) / kPi * std::exp(log_gamma(1.0 - z));
    return std::exp(-log_gamma(z));
}

Complex complex_pow(Complex t, Complex z) {
    detail::require_finite(t, "complex_pow");
    detail::require_finite(z, "complex_pow");
    if (t == Complex(0.0, 0.0)) throw domain_error("complex_pow: zero base");
    if (t.imag() == 0.0 && t.real() < 0.0)
        throw domain_error("complex_pow: base on the branch cut; supply an arg override");
    return std::exp(z * Complex(std::log(std::abs(t)), std::arg(t)));
}

Complex complex_pow(Complex t, Complex z, double arg_override) {
    detail::require_finite(t, "complex_pow");
    detail::require_finite(z, "complex_pow");
    detail::require_finite(arg_override, "complex_pow");
    if (t == Complex(0.0, 0.0)) throw domain_error("complex_pow: zero base");
    return std::exp(z * Complex(std::log(std::abs(t)), arg_override));
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

struct NodeSet {
    std::vector<double> x; // on (-1, 1)
    std::vector<double> w;
};

// Gauss-Legendre nodes by Newton iteration on P_n.
NodeSet compute_gl(int n) {
    NodeSet ns;
    ns.x.resize(n);
    ns.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 64; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        ns.x[i] = -x;
        ns.x[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        ns.w[i] = w;
        ns.w[n - 1 - i] = w;
    }
    return ns;
}

const NodeSet& gl_nodes(int n) {
    static std::map<int, NodeSet> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

struct PanelResult {
    Complex value{};
    double err = 0.0;
    double abs_sum = 0.0;
};

PanelResult gl_panel(const std::function<Complex(double)>& g, double a, double b, int n) {
    const NodeSet& coarse = gl_nodes(n);
    const NodeSet& fine = gl_nodes(2 * n);
    const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
    Complex sc{}, sf{};
    double abs_sum = 0.0;
    for (int i = 0; i < n; ++i) sc += coarse.w[i] * g(mid + hl * coarse.x[i]);
    for (int i = 0; i < 2 * n; ++i) {
        const Complex v = g(mid + hl * fine.x[i]);
        sf += fine.w[i] * v;
        abs_sum += fine.w[i] * std::abs(v);
    }
    PanelResult r;
    r.value = hl * sf;
    r.err = std::abs(hl * (sf - sc));
    r.abs_sum = hl * abs_sum;
    return r;
}

// tanh-sinh rule on [a, b]; nodes never touch the endpoints, so an
// integrable algebraic singularity at either end is fine.
PanelResult tanh_sinh_panel(const std::function<Complex(double)>& g, double a, double b,
                            double tol) {
    const double hl = 0.5 * (b - a);
    const double umax = 4.0;

    auto node = [&](double u, double& weight) -> Complex {
        const double s = 0.5 * kPi * std::sinh(u);
        // Distances to the endpoints without cancellation:
        // hl (1 + tanh s) and hl (1 - tanh s).
        const double dl = hl * 2.0 / (1.0 + std::exp(-2.0 * s));
        const double dr = hl * 2.0 / (1.0 + std::exp(2.0 * s));
        const double t = (s <= 0.0) ? a + dl : b - dr;
        const double sech = 1.0 / std::cosh(s);
        const double w = hl * 0.5 * kPi * std::cosh(u) * sech * sech;
        if (!(t > a) || !(t < b) || w == 0.0 || !std::isfinite(w)) {
            weight = 0.0;
            return Complex(0.0, 0.0);
        }
        weight = w;
        return g(t);
    };

    double h = 0.5;
    Complex sum{};
    double abs_sum = 0.0;
    {
        double w;
        Complex v = node(0.0, w);
        sum = w * v;
        abs_sum = w * std::abs(v);
        for (int k = 1; k * h <= umax; ++k) {
            v = node(k * h, w);
            sum += w * v;
            abs_sum += w * std::abs(v);
            v = node(-k * h, w);
            sum += w * v;
            abs_sum += w * std::abs(v);
        }
    }
    Complex best = h * sum;
    double best_abs = h * abs_sum;
    double err = std::abs(best);
    for (int level = 1; level <= 9; ++level) {
        h *= 0.5;
        Complex odd{};
        double odd_abs = 0.0;
        for (int k = 1; k * h <= umax; k += 2) {
            double w;
            Complex v = node(k * h, w);
            odd += w * v;
            odd_abs += w * std::abs(v);
            v = node(-k * h, w);
            odd += w * v;
            odd_abs += w * std::abs(v);
        }
        const Complex next = 0.5 * best + h * odd;
        const double next_abs = 0.5 * best_abs + h * odd_abs;
        err = std::abs(next - best);
        best = next;
        best_abs = next_abs;
        if (level >= 3 && err <= tol * std::max(1.0, std::abs(best))) break;
    }
    PanelResult r;
    r.value = best;
    r.err = std::max(err, 1e-16 * best_abs);
    r.abs_sum = best_abs;
    return r;
}

struct Segment {
    double a, b;
    bool de; // tanh-sinh segment (touches the global left endpoint)
    PanelResult res;
};

} // namespace

IntegralEstimate integrate_panels(const std::function<Complex(double)>& g,
                                  double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    detail::require_finite(a, "integrate_panels");
    detail::require_finite(b, "integrate_panels");
    if (!(a < b)) throw domain_error("integrate_panels: need a < b");

    const int n = spec.nodes_per_panel;
    const double de_tol = 0.1 * spec.rel_tol;

    auto eval_seg = [&](Segment& s) {
        s.res = s.de ? tanh_sinh_panel(g, s.a, s.b, de_tol) : gl_panel(g, s.a, s.b, n);
    };

    std::vector<Segment> segs;
    // First panel is always tanh-sinh (handles a possible singularity at a).
    const double first_end = std::min(b, a + std::min(1.0, 0.5 * (b - a)));
    segs.push_back({a, first_end, true, {}});
    if (first_end < b) segs.push_back({first_end, b, false, {}});
    for (auto& s : segs) eval_seg(s);

    auto totals = [&]() {
        Complex v{};
        double e = 0.0, ab = 0.0;
        for (const auto& s : segs) {
            v += s.res.value;
            e += s.res.err;
            ab += s.res.abs_sum;
        }
        return std::tuple<Complex, double, double>(v, e, ab);
    };

    while (true) {
        auto [value, err, abs_sum] = totals();
        const double target =
            std::max({spec.abs_tol, spec.rel_tol * std::abs(value), 1e-16 * abs_sum});
        if (err <= target) {
            return {value, err, abs_sum, static_cast<int>(segs.size()), true};
        }
        if (static_cast<int>(segs.size()) >= spec.max_panels) {
            return {value, err, abs_sum, static_cast<int>(segs.size()), false};
        }
        // Split the worst segment.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].res.err > segs[worst].res.err) worst = i;
        Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        Segment left{s.a, mid, s.de, {}};
        Segment right{mid, s.b, false, {}};
        eval_seg(left);
        eval_seg(right);
        segs[worst] = left;
        segs.push_back(right);
    }
}

Complex derivative(const std::function<Complex(double)>& g, double x, int order, double scale) {
    detail::require_finite(x, "derivative");
    if (order != 1) throw domain_error("derivative: only order 1 is supported");
    if (!(scale > 0.0)) throw domain_error("derivative: scale must be > 0");
    const double h = 1e-5 * scale * std::max(std::abs(x), 1.0);
    if (x + 0.25 * h == x) throw domain_error("derivative: step underflow at x");

    auto central4 = [&](double hh) {
        return (g(x - 2.0 * hh) - 8.0 * g(x - hh) + 8.0 * g(x + hh) - g(x + 2.0 * hh)) /
               (12.0 * hh);
    };
    const Complex d1 = central4(h);
    const Complex d2 = central4(0.5 * h);
    const Complex d3 = central4(0.25 * h);
    const Complex r1 = (16.0 * d2 - d1) / 15.0;
    const Complex r2 = (16.0 * d3 - d2) / 15.0;
    return (64.0 * r2 - r1) / 63.0;
}

} // namespace zhl
