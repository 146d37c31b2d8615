#include "zhl/zeros.hpp"
#include "zhl/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace zhl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroTol = 1e-9;

double eval_abs_L(const Kernel& k, Complex z) { return std::abs(continued_L(k, z).value); }

int thread_budget() {
    if (const char* env = std::getenv("ZHL_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return std::min(n, 64);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hc == 0 ? 2u : hc, 8u));
}

// Dip value of |L| inside [lo, hi] by golden-section refinement; the grid
// sample can sit up to step/2 off a zero, which blunts the median test.
double refine_dip(const Kernel& kernel, double sigma, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval_abs_L(kernel, Complex(sigma, c));
    double fd = eval_abs_L(kernel, Complex(sigma, d));
    for (int it = 0; it < 24; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval_abs_L(kernel, Complex(sigma, c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval_abs_L(kernel, Complex(sigma, d));
        }
    }
    return std::min(fc, fd);
}

std::vector<Complex> scan_segment(const Kernel& kernel, const ScanWindow& w) {
    const int n = static_cast<int>(std::floor((w.t_max - w.t_min) / w.step)) + 1;
    std::vector<double> mag(n);
    for (int i = 0; i < n; ++i)
        mag[i] = eval_abs_L(kernel, Complex(w.sigma, w.t_min + i * w.step));

    std::vector<Complex> seeds;
    const int half_window = 8;
    for (int i = 1; i + 1 < n; ++i) {
        if (!(mag[i] < mag[i - 1] && mag[i] <= mag[i + 1])) continue;
        const int lo = std::max(0, i - half_window);
        const int hi = std::min(n - 1, i + half_window);
        std::vector<double> nb(mag.begin() + lo, mag.begin() + hi + 1);
        std::nth_element(nb.begin(), nb.begin() + nb.size() / 2, nb.end());
        const double med = nb[nb.size() / 2];
        double dip = mag[i];
        if (dip * 10.0 > med && dip * 40.0 <= med * 10.0) {
            // borderline: measure the true dip, not the grid sample
            const double t = w.t_min + i * w.step;
            dip = std::min(dip, refine_dip(kernel, w.sigma, t - w.step, t + w.step));
        }
        if (dip * 10.0 <= med) seeds.emplace_back(w.sigma, w.t_min + i * w.step);
    }
    return seeds;
}

} // namespace

void ScanWindow::validate() const {
    if (!(t_min < t_max)) throw domain_error("ScanWindow: need t_min < t_max");
    if (!(step > 0.0)) throw domain_error("ScanWindow: step must be > 0");
}

std::vector<Complex> scan_critical_line(const Kernel& kernel, const ScanWindow& window) {
    window.validate();
    return scan_segment(kernel, window);
}

ZeroRecord refine_newton(const Kernel& kernel, Complex seed) {
    detail::require_finite(seed, "refine_newton");
    Complex z = seed;
    Complex L = continued_L(kernel, z).value;
    for (int it = 0; it < 50 && std::abs(L) >= kZeroTol; ++it) {
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        const Complex Lp =
            (continued_L(kernel, z + Complex(h, 0.0)).value -
             continued_L(kernel, z - Complex(h, 0.0)).value) /
            (2.0 * h);
        if (std::abs(Lp) < 1e-300)
            throw convergence_error("refine_newton: vanishing derivative near " +
                                        std::to_string(z.real()) + "+" +
                                        std::to_string(z.imag()) + "i",
                                    std::abs(L));
        Complex step = L / Lp;
        if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step); // keep near the seed
        z -= step;
        L = continued_L(kernel, z).value;
    }
    if (!(std::abs(L) < kZeroTol)) {
        std::ostringstream msg;
        msg << "refine_newton: no convergence; last iterate " << z.real() << "+" << z.imag()
            << "i with |L| = " << std::abs(L);
        throw convergence_error(msg.str(), std::abs(L));
    }
    ZeroRecord rec;
    rec.kernel = kernel.name;
    rec.z = z;
    rec.residual = std::abs(L);
    rec.eigenvalue = Complex(0.0, 1.0) * (2.0 * z - 1.0);
    rec.method = "scan+newton";
    rec.verified_count = argument_principle_count(kernel, z, 0.05);
    return rec;
}

int argument_principle_count(const Kernel& kernel, Complex center, double half_width) {
    detail::require_finite(center, "argument_principle_count");
    if (!(half_width > 0.0)) throw domain_error("argument_principle_count: half_width > 0");

    const Complex corners[5] = {
        center + Complex(-half_width, -half_width), center + Complex(half_width, -half_width),
        center + Complex(half_width, half_width), center + Complex(-half_width, half_width),
        center + Complex(-half_width, -half_width)};

    auto val = [&](Complex w) {
        const Complex L = continued_L(kernel, w).value;
        if (std::abs(L) < 1e-8)
            throw convergence_error("argument_principle_count: boundary too close to a zero",
                                    std::abs(L));
        return L;
    };

    double total = 0.0;
    for (int side = 0; side < 4; ++side) {
        const Complex a = corners[side], b = corners[side + 1];
        // Adaptive phase walk: refine until consecutive arguments differ by
        // less than pi/2.
        struct Node {
            double s;
            Complex v;
        };
        std::vector<Node> nodes;
        const int init = 16;
        for (int i = 0; i <= init; ++i) {
            const double s = static_cast<double>(i) / init;
            nodes.push_back({s, val(a + s * (b - a))});
        }
        for (std::size_t i = 0; i + 1 < nodes.size();) {
            const double dphi =
                std::arg(nodes[i + 1].v / nodes[i].v); // principal difference
            if (std::abs(dphi) > 0.5 * kPi) {
                if (nodes[i + 1].s - nodes[i].s < 1e-9)
                    throw convergence_error(
                        "argument_principle_count: phase jump unresolved on boundary", 0.0);
                const double sm = 0.5 * (nodes[i].s + nodes[i + 1].s);
                nodes.insert(nodes.begin() + i + 1, {sm, val(a + sm * (b - a))});
            } else {
                total += dphi;
                ++i;
            }
        }
    }
    const double winding = total / (2.0 * kPi);
    const int count = static_cast<int>(std::lround(winding));
    if (std::abs(winding - count) > 0.05)
        throw convergence_error("argument_principle_count: non-integer winding", winding);
    return count;
}

std::vector<Complex> spectrum(const std::vector<ZeroRecord>& records) {
    std::vector<Complex> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(Complex(0.0, 1.0) * (2.0 * r.z - 1.0));
    return out;
}

double boundary_check(const Kernel& kernel, const ZeroRecord& record, Branch branch) {
    const Complex c = branch_constant(branch, record.z);
    return std::abs(c * continued_L(kernel, record.z, 1.0).value);
}

std::vector<ZeroRecord> find_zeros(const Kernel& kernel, const ScanWindow& window) {
    window.validate();
    // Fixed-width partitions so the result does not depend on the worker
    // count; overlap by one step to keep boundary minima visible.
    const double part_width = 2.5;
    std::vector<ScanWindow> parts;
    for (double t0 = window.t_min; t0 < window.t_max; t0 += part_width) {
        ScanWindow p = window;
        p.t_min = std::max(window.t_min, t0 - window.step);
        p.t_max = std::min(window.t_max, t0 + part_width + window.step);
        parts.push_back(p);
    }

    const int workers = std::min<int>(thread_budget(), static_cast<int>(parts.size()));
    std::vector<std::vector<Complex>> seed_lists(parts.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mtx;
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < parts.size(); i = next.fetch_add(1)) {
            try {
                seed_lists[i] = scan_segment(kernel, parts[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<Complex> seeds;
    for (const auto& list : seed_lists) seeds.insert(seeds.end(), list.begin(), list.end());
    std::sort(seeds.begin(), seeds.end(),
              [](Complex a, Complex b) { return a.imag() < b.imag(); });

    std::vector<ZeroRecord> zeros;
    for (const Complex& s : seeds) {
        ZeroRecord rec = refine_newton(kernel, s);
        bool dup = false;
        for (const auto& z : zeros)
            if (std::abs(z.z - rec.z) < 1e-7) dup = true;
        if (!dup && rec.z.imag() >= window.t_min - window.step &&
            rec.z.imag() <= window.t_max + window.step)
            zeros.push_back(rec);
    }
    std::sort(zeros.begin(), zeros.end(),
              [](const ZeroRecord& a, const ZeroRecord& b) { return a.z.imag() < b.z.imag(); });
    return zeros;
}

// ---------------------------------------------------------------------------
// CSV cache

namespace {
const char* kCacheHeader = "kernel,re,im,residual,E_re,E_im,method,verified_count";
}

std::vector<ZeroRecord> read_zero_cache(const std::string& path) {
    std::ifstream in(path);
    std::vector<ZeroRecord> out;
    if (!in) return out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (line == kCacheHeader) continue;
        }
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) continue;
        ZeroRecord r;
        r.kernel = fields[0];
        r.z = Complex(std::stod(fields[1]), std::stod(fields[2]));
        r.residual = std::stod(fields[3]);
        r.eigenvalue = Complex(std::stod(fields[4]), std::stod(fields[5]));
        r.method = fields[6];
        r.verified_count = std::stoi(fields[7]);
        out.push_back(r);
    }
    return out;
}

void append_zero_cache(const std::string& path, const std::vector<ZeroRecord>& records) {
    const std::vector<ZeroRecord> existing = read_zero_cache(path);
    std::ofstream out;
    const bool fresh = existing.empty() && !std::ifstream(path).good();
    out.open(path, std::ios::app);
    if (!out) throw domain_error("append_zero_cache: cannot open " + path);
    if (fresh) out << kCacheHeader << "\n";
    out.precision(15);
    for (const auto& r : records) {
        bool dup = false;
        for (const auto& e : existing)
            if (e.kernel == r.kernel && std::abs(e.z - r.z) < 1e-7) dup = true;
        if (dup) continue;
        out << r.kernel << ',' << r.z.real() << ',' << r.z.imag() << ',' << r.residual << ','
            << r.eigenvalue.real() << ',' << r.eigenvalue.imag() << ',' << r.method << ','
            << r.verified_count << "\n";
    }
}

} // namespace zhl
