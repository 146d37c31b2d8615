#ifndef ZHL_ZETA_ENGINE_HPP
#define ZHL_ZETA_ENGINE_HPP

#include "zhl/kernels.hpp"
#include "zhl/numerics.hpp"

#include <string>

namespace zhl {

// Hankel contour parameters: circle of radius epsilon around the origin
// plus two rays along the negative axis, truncated at ray_cut.
struct ContourSpec {
    double epsilon = 0.0;  // 0 => min(radius/2, 1/2)
    double ray_cut = 0.0;  // 0 => derived from the kernel's decay data
    int circle_nodes = 64;
    QuadratureSpec ray_spec{};

    void validate(double kernel_radius) const;
};

enum class Method { mellin, hankel, oracle, series_reduced };
const char* method_name(Method m);

struct EvaluationResult {
    Complex value{};
    double est_error = 0.0; // estimated absolute error, incl. conditioning
    Method method = Method::mellin;
};

enum class ForcePath { none, mellin, hankel };

struct EngineConfig {
    QuadratureSpec quad{};
    ContourSpec contour{};
    // Route to the Euler-Maclaurin oracle when the integral representations
    // cannot reach this relative accuracy (conditioning at large |Im z|).
    double oracle_fallback_rel = 1e-8;
    int em_terms = 40;
    int em_order = 12;
    ForcePath force = ForcePath::none;
};

// Mellin integral (c(z)/Gamma(z)) Int_0^inf t^{z-1} e^{-(x-1)t} f(-t) dt.
// Requires Re z above the kernel gate and x inside the decay region.
EvaluationResult mellin_L(const Kernel& kernel, Complex z, double x,
                          const QuadratureSpec& spec);

// Hankel loop integral I(f,z,x) = (1/2 pi i) Int_C t^{z-1} e^{(x-1)t} f(t) dt:
// two ray integrals with arg t = -pi / +pi combined into the
// (e^{i pi z} - e^{-i pi z}) factor, plus the epsilon-circle term (kept
// exactly; it vanishes only in the Re z > 1 limit).
EvaluationResult hankel_I(const Kernel& kernel, Complex z, double x,
                          const ContourSpec& spec);

// Analytic continuation of L(f,z,x): Mellin for Re z past the gate, else
// Gamma(1-z) * I with x raised into a well-conditioned region through the
// kernel's shift reduction; falls back to the Euler-Maclaurin oracle when
// the integral conditioning cannot meet oracle_fallback_rel.
EvaluationResult continued_L(const Kernel& kernel, Complex z, double x,
                             const EngineConfig& cfg);
EvaluationResult continued_L(const Kernel& kernel, Complex z, double x);
// L(f,z) = L(f,z,1), bit for bit.
EvaluationResult continued_L(const Kernel& kernel, Complex z);

// Hurwitz zeta by Euler-Maclaurin: sum_{k<N} (x+k)^{-z} + tail + Bernoulli
// corrections.  Relative error under 1e-12 for |Im z| <= 60 at the default
// terms = 40, correction_order = 12.
Complex hurwitz_em(Complex z, double x, int terms = 40, int correction_order = 12);
std::complex<long double> hurwitz_em_l(std::complex<long double> z, long double x,
                                       int terms = 40, int correction_order = 12);

// Closed-form reduction of L(f,z,x) to Hurwitz zeta values for kernels
// carrying a periodic coefficient pattern.  Throws for the Hecke kernel.
Complex oracle_L(const Kernel& kernel, Complex z, double x = 1.0);
std::complex<long double> oracle_L_l(const Kernel& kernel, std::complex<long double> z,
                                     long double x = 1.0L);
bool oracle_available(const Kernel& kernel);

// |zeta(z) - 2 (2 pi)^{1-z} Gamma(1-z) sin(pi z / 2) zeta(1-z)| / |zeta(z)|,
// both sides through hurwitz_em.  Re z < 1, away from the trivial zeros.
double functional_equation_residual(Complex z);

} // namespace zhl

#endif
