#ifndef ZHL_ERRORS_HPP
#define ZHL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zhl {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument / precondition violation (bad grid, zero base, ...).
struct domain_error : error {
    using error::error;
};

// Evaluation exactly at a pole of the requested function.
struct pole_error : error {
    using error::error;
};

// A numerical process failed to reach its tolerance. Carries the error
// actually achieved so callers can decide whether to keep the value.
struct convergence_error : error {
    double achieved;
    explicit convergence_error(const std::string& what, double achieved_err = 0.0)
        : error(what), achieved(achieved_err) {}
};

// Evaluation point outside a kernel's contour-convergence window.
struct window_error : error {
    using error::error;
};

// Kernel data problems: invalid character table, insufficient Hecke
// coefficients, Taylor radius exceeded, closed form failed validation.
struct kernel_error : error {
    using error::error;
};

} // namespace zhl

#endif
