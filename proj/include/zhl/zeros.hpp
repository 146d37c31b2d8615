#ifndef ZHL_ZEROS_HPP
#define ZHL_ZEROS_HPP

#include "zhl/hamiltonian.hpp"
#include "zhl/kernels.hpp"
#include "zhl/zeta_engine.hpp"

#include <string>
#include <vector>

namespace zhl {

struct ScanWindow {
    double t_min = 10.0;
    double t_max = 30.0;
    double step = 0.05;
    double sigma = 0.5; // real part of the scan line

    void validate() const;
};

struct ZeroRecord {
    std::string kernel;
    Complex z{};             // located zero
    double residual = 0.0;   // |L(f, z)|
    Complex eigenvalue{};    // E = i (2z - 1)
    std::string method;      // "scan+newton" | "bisection-oracle"
    int verified_count = 0;  // argument-principle count in the surrounding box
};

// Seeds at local minima of |L(f, sigma + i t)| that undercut the
// neighborhood median by a factor of at least 10.
std::vector<Complex> scan_critical_line(const Kernel& kernel, const ScanWindow& window);

// Complex Newton from a seed; stops at |L| < 1e-9 (at most 50 iterations),
// then certifies with an argument-principle count on a box of half-width
// 0.05.  Throws convergence_error (with the last iterate in the message)
// when the residual target is not met.
ZeroRecord refine_newton(const Kernel& kernel, Complex seed);

// Winding number of L around the rectangle |Re w - Re c| <= hw,
// |Im w - Im c| <= hw by adaptive phase continuation along the boundary.
int argument_principle_count(const Kernel& kernel, Complex center, double half_width);

// E_n = i (2 z_n - 1) for each record, in input order.
std::vector<Complex> spectrum(const std::vector<ZeroRecord>& records);

// |Psi(f, z_n, 0)| = |C(z_n) L(f, z_n, 1)| for the given branch convention.
double boundary_check(const Kernel& kernel, const ZeroRecord& record, Branch branch);

// Full pipeline: scan (in parallel partitions; ZHL_THREADS caps the worker
// count), refine, deduplicate within 1e-7 and sort by Im z.
std::vector<ZeroRecord> find_zeros(const Kernel& kernel, const ScanWindow& window);

// Append-only CSV cache with header
//   kernel,re,im,residual,E_re,E_im,method,verified_count
// Re-runs deduplicate against existing rows (1e-7 in z).
void append_zero_cache(const std::string& path, const std::vector<ZeroRecord>& records);
std::vector<ZeroRecord> read_zero_cache(const std::string& path);

} // namespace zhl

#endif
