#ifndef ZHL_KERNELS_HPP
#define ZHL_KERNELS_HPP

#include "zhl/numerics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zhl {

// Dirichlet character mod m as an explicit value table.
// values[r] is chi(r) for the residue r in [0, m).
struct DirichletCharacter {
    int modulus = 1;
    std::vector<Complex> values{Complex(1.0, 0.0)};

    Complex operator()(long long n) const;
    void validate() const; // periodicity is structural; checks gcd/modulus/multiplicativity

    static DirichletCharacter principal(int m);
    static DirichletCharacter mod3_nonprincipal(); // 1, -1 pattern
    static DirichletCharacter mod4_nonprincipal(); // chi_4: 1, 0, -1, 0
    // {"modulus": m, "values": [[re, im], ...]}
    static DirichletCharacter from_json_text(const std::string& text);
    static DirichletCharacter from_json_file(const std::string& path);
};

// Normalized Fourier coefficients of a cusp form of the given even weight:
// lambda[i] is the coefficient of index i+1, lambda_1 = 1.
struct CuspFormCoefficients {
    int weight = 12;
    std::vector<double> lambda;

    void validate() const;
};

// Ramanujan tau by expanding q * prod_{k<=n_max} (1 - q^k)^24 with exact
// integer power-series arithmetic.
CuspFormCoefficients compute_tau_coefficients(int n_max);

// L(f,z,x) = L(f,z,x+delta) + elementary(z,x), exact identity.
struct ShiftReduction {
    double delta = 1.0;
    std::function<Complex(Complex, double)> elementary;
};

// Candidate closed form for the kernel's difference operator:
// (D psi)(x) = sum_j weight_j * psi(x + shift_j).  Validated before use.
struct ShiftDeltaForm {
    std::vector<std::pair<double, Complex>> terms;
};

// Periodic Dirichlet-series coefficient pattern: the kernel's L function is
// sum_{n>=1} coeff[(n-1) mod period] * (n + x - 1)^{-z}.  Drives the
// Euler-Maclaurin oracle, the shift reduction, and the closed-form operator.
struct DirichletPattern {
    int period = 1;
    std::vector<Complex> coeffs{Complex(1.0, 0.0)}; // coefficient of n = 1..period
};

struct Kernel {
    std::string name;

    // f(t) for complex t away from singularities.
    std::function<Complex(Complex)> eval_f;
    // f(-t) for real t > 0 (the Mellin integrand factor).
    std::function<Complex(double)> eval_f_neg;
    // (-t) f(t), analytic on |t| < radius; the contour/circle integrand core.
    std::function<Complex(Complex)> eval_neg_tf;

    std::vector<Complex> taylor;  // a_0..a_N of (-t) f(t) at t = 0
    double radius = 1.0;          // analyticity radius of t f(t)
    double decay_alpha = 1.0;     // |f(-t)| <= K exp(-decay_alpha t)
    double decay_bound = 1.0;     // empirical K
    double abscissa = 1.0;        // series/integral converge for Re z > abscissa

    std::function<Complex(Complex)> prefactor; // c(z); unset => identity
    bool has_prefactor = false;

    std::optional<ShiftReduction> shift;
    std::optional<DirichletPattern> pattern;
    std::optional<ShiftDeltaForm> delta_form_hint;

    // x below which the Hankel rays stop converging: max(0, 1 - decay_alpha).
    double contour_window_min() const;
    Complex apply_prefactor(Complex z) const;
};

Kernel make_riemann_kernel();
Kernel make_lambda_kernel();
Kernel make_dirichlet_kernel(const DirichletCharacter& chi);
Kernel make_hecke_kernel(const CuspFormCoefficients& coeffs);

// Taylor coefficients a_0..a_N of (-t) f(t).  Served from the kernel's
// precomputed series data when long enough, otherwise recovered from
// samples on the circle |t| = radius/4 with a resummation self-check.
std::vector<Complex> kernel_taylor(const Kernel& kernel, int N);

namespace detail {
// Annihilating shift polynomial of a periodic sequence, turned into the
// closed-form difference operator candidate for a pattern kernel.
ShiftDeltaForm delta_form_from_pattern(const DirichletPattern& pattern);
} // namespace detail

} // namespace zhl

#endif
