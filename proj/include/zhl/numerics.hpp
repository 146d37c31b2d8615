#ifndef ZHL_NUMERICS_HPP
#define ZHL_NUMERICS_HPP

#include <complex>
#include <functional>

namespace zhl {

using Complex = std::complex<double>;

// Parameters for the adaptive panel quadrature.
struct QuadratureSpec {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_panels = 4000;
    int nodes_per_panel = 15;

    void validate() const; // throws domain_error on bad fields
};

// Uniform grid on a positive interval of the half-line.
struct GridSpec {
    double x_min = 2.0;
    double x_max = 8.0;
    int count = 13;

    void validate() const;
    double point(int i) const { return x_min + (x_max - x_min) * i / (count - 1); }
};

// Principal-branch log Gamma.  exp(log_gamma(z)) == Gamma(z) to ~1e-13
// relative for |z| <= 50.  Throws pole_error at non-positive integers.
Complex log_gamma(Complex z);

// 1/Gamma(z), entire; returns exactly 0 at z = 0, -1, -2, ...
Complex reciprocal_gamma(Complex z);

// t^z on the principal branch, cut along (-inf, 0].  Throws on t = 0 and
// on the cut itself; use the arg-override overload for ray integrands.
Complex complex_pow(Complex t, Complex z);

// t^z with an explicit choice of arg t (e.g. +/- pi on the two sides of
// the cut): exp(z * (log|t| + i * arg_override)).
Complex complex_pow(Complex t, Complex z, double arg_override);

struct IntegralEstimate {
    Complex value{};
    double est_error = 0.0;   // estimated absolute error
    double abs_integral = 0.0; // integral of |g|, for conditioning reports
    int panels = 0;
    bool converged = false;
};

// Adaptive quadrature of g over [a, b]: Gauss-Legendre panels with a
// tanh-sinh (double-exponential) rule on the panel touching a, so an
// algebraic endpoint singularity t^sigma with sigma > -1 is admissible
// at a.  On non-convergence after max_panels the achieved error is
// reported in the result (converged = false); no throw.
IntegralEstimate integrate_panels(const std::function<Complex(double)>& g,
                                  double a, double b, const QuadratureSpec& spec);

// First derivative of g at x: 4th-order central difference, two levels of
// Richardson extrapolation, step h = 1e-5 * scale * max(|x|, 1).
Complex derivative(const std::function<Complex(double)>& g, double x,
                   int order = 1, double scale = 1.0);

namespace detail {
// Throws domain_error when a component is NaN/Inf.
void require_finite(Complex z, const char* where);
void require_finite(double x, const char* where);
} // namespace detail

} // namespace zhl

#endif
