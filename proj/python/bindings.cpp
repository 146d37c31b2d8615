// Python bindings for the main operations: kernel construction, L
// evaluation and continuation, the operator identity checks, and the zero
// pipeline.
#include "zhl/errors.hpp"
#include "zhl/hamiltonian.hpp"
#include "zhl/kernels.hpp"
#include "zhl/zeros.hpp"
#include "zhl/zeta_engine.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace zhl;

namespace {

Branch branch_from_name(const std::string& name) {
    if (name == "principal") return Branch::principal;
    if (name == "conjugate") return Branch::conjugate;
    if (name == "bbm") return Branch::bbm;
    if (name == "unit") return Branch::unit;
    throw domain_error("unknown branch '" + name + "'");
}

py::tuple eval_to_tuple(const EvaluationResult& r) {
    return py::make_tuple(r.value, r.est_error, std::string(method_name(r.method)));
}

py::dict report_to_dict(const OperatorReport& rep) {
    py::dict d;
    d["kernel"] = rep.kernel;
    d["z"] = rep.z;
    d["branch"] = rep.branch;
    d["grid"] = py::make_tuple(rep.grid.x_min, rep.grid.x_max, rep.grid.count);
    d["residual_sup"] = rep.residual_sup;
    d["prop_const"] = rep.proportionality_constant;
    d["prop_spread"] = rep.proportionality_spread;
    d["N"] = rep.truncation;
    d["phi_sup"] = rep.phi_sup;
    return d;
}

py::dict zero_to_dict(const ZeroRecord& r) {
    py::dict d;
    d["kernel"] = r.kernel;
    d["z"] = r.z;
    d["residual"] = r.residual;
    d["eigenvalue"] = r.eigenvalue;
    d["method"] = r.method;
    d["verified_count"] = r.verified_count;
    return d;
}

} // namespace

PYBIND11_MODULE(_zhl, m) {
    m.doc() = "Mellin-transform zeta families, Hankel continuation, Hamiltonian identity "
              "checks, and critical-line zeros";

    py::register_exception<pole_error>(m, "PoleError");
    py::register_exception<convergence_error>(m, "ConvergenceError");
    py::register_exception<window_error>(m, "WindowError");
    py::register_exception<kernel_error>(m, "KernelError");
    py::register_exception<domain_error>(m, "DomainError");

    py::class_<DirichletCharacter>(m, "DirichletCharacter")
        .def_readonly("modulus", &DirichletCharacter::modulus)
        .def_readonly("values", &DirichletCharacter::values)
        .def("__call__", &DirichletCharacter::operator())
        .def_static("principal", &DirichletCharacter::principal, py::arg("modulus"))
        .def_static("chi3", &DirichletCharacter::mod3_nonprincipal)
        .def_static("chi4", &DirichletCharacter::mod4_nonprincipal)
        .def_static("from_json", &DirichletCharacter::from_json_text, py::arg("text"));

    py::class_<Kernel>(m, "Kernel")
        .def_readonly("name", &Kernel::name)
        .def_readonly("radius", &Kernel::radius)
        .def_readonly("decay_alpha", &Kernel::decay_alpha)
        .def_readonly("abscissa", &Kernel::abscissa)
        .def_readonly("taylor", &Kernel::taylor)
        .def("f_neg", [](const Kernel& k, double t) { return k.eval_f_neg(t); }, py::arg("t"))
        .def("__repr__", [](const Kernel& k) { return "<zhl.Kernel " + k.name + ">"; });

    m.def("riemann_kernel", &make_riemann_kernel);
    m.def("lambda_kernel", &make_lambda_kernel);
    m.def("dirichlet_kernel", &make_dirichlet_kernel, py::arg("character"));
    m.def(
        "hecke_kernel",
        [](int tau_terms) { return make_hecke_kernel(compute_tau_coefficients(tau_terms)); },
        py::arg("tau_terms") = 64);
    m.def(
        "tau_coefficients",
        [](int n_max) { return compute_tau_coefficients(n_max).lambda; }, py::arg("n_max"));
    m.def("kernel_taylor", &kernel_taylor, py::arg("kernel"), py::arg("n"));

    m.def(
        "continued_L",
        [](const Kernel& k, Complex z, double x) { return eval_to_tuple(continued_L(k, z, x)); },
        py::arg("kernel"), py::arg("z"), py::arg("x") = 1.0,
        "Analytic continuation of L(f,z,x); returns (value, est_error, method).");
    m.def(
        "mellin_L",
        [](const Kernel& k, Complex z, double x) {
            return eval_to_tuple(mellin_L(k, z, x, QuadratureSpec{}));
        },
        py::arg("kernel"), py::arg("z"), py::arg("x") = 1.0);
    m.def(
        "hankel_I",
        [](const Kernel& k, Complex z, double x) {
            return eval_to_tuple(hankel_I(k, z, x, ContourSpec{}));
        },
        py::arg("kernel"), py::arg("z"), py::arg("x") = 1.0);
    m.def("hurwitz_em", &hurwitz_em, py::arg("z"), py::arg("x"), py::arg("terms") = 40,
          py::arg("correction_order") = 12);
    m.def("oracle_L", &oracle_L, py::arg("kernel"), py::arg("z"), py::arg("x") = 1.0);
    m.def("functional_equation_residual", &functional_equation_residual, py::arg("z"));

    m.def(
        "eigenstate",
        [](const Kernel& k, Complex z, const std::string& branch) {
            const Eigenstate st = make_eigenstate(k, z, branch_from_name(branch));
            return py::cpp_function([st](double x) { return st(x); });
        },
        py::arg("kernel"), py::arg("z"), py::arg("branch") = "principal",
        py::keep_alive<0, 1>(),
        "Psi(f,z,.) as a callable; note the kernel must outlive the callable.");
    m.def(
        "delta_apply",
        [](const Kernel& k, const std::function<Complex(double)>& psi, double x) {
            return delta_apply(k, psi, x);
        },
        py::arg("kernel"), py::arg("psi"), py::arg("x"));
    m.def(
        "proportionality_check",
        [](const Kernel& k, Complex z, const std::string& branch, double x_min, double x_max,
           int count) {
            const Eigenstate st = make_eigenstate(k, z, branch_from_name(branch));
            return report_to_dict(proportionality_check(k, st, GridSpec{x_min, x_max, count}));
        },
        py::arg("kernel"), py::arg("z"), py::arg("branch") = "unit", py::arg("x_min") = 2.0,
        py::arg("x_max") = 8.0, py::arg("count") = 13);
    m.def(
        "eigen_residual",
        [](const Kernel& k, Complex z, const std::string& branch, double x_min, double x_max,
           int count) {
            const Eigenstate st = make_eigenstate(k, z, branch_from_name(branch));
            return report_to_dict(eigen_residual(k, st, GridSpec{x_min, x_max, count}));
        },
        py::arg("kernel"), py::arg("z"), py::arg("branch") = "principal", py::arg("x_min") = 2.0,
        py::arg("x_max") = 8.0, py::arg("count") = 13);
    m.def("delta_inv_asymptotic", &delta_inv_asymptotic, py::arg("kernel"), py::arg("z"),
          py::arg("x"), py::arg("terms"));
    m.def("truncation_check", &truncation_check, py::arg("kernel"), py::arg("z"), py::arg("x"),
          py::arg("terms"));

    m.def(
        "find_zeros",
        [](const Kernel& k, double t_min, double t_max, double step, double sigma) {
            py::list out;
            for (const auto& r : find_zeros(k, ScanWindow{t_min, t_max, step, sigma}))
                out.append(zero_to_dict(r));
            return out;
        },
        py::arg("kernel"), py::arg("t_min"), py::arg("t_max"), py::arg("step") = 0.05,
        py::arg("sigma") = 0.5);
    m.def(
        "boundary_check",
        [](const Kernel& k, Complex z, const std::string& branch) {
            ZeroRecord rec;
            rec.z = z;
            return boundary_check(k, rec, branch_from_name(branch));
        },
        py::arg("kernel"), py::arg("z"), py::arg("branch") = "principal");
    m.def(
        "spectrum",
        [](const std::vector<Complex>& zs) {
            std::vector<ZeroRecord> recs(zs.size());
            for (std::size_t i = 0; i < zs.size(); ++i) recs[i].z = zs[i];
            return spectrum(recs);
        },
        py::arg("zeros"), "E_n = i (2 z_n - 1) for each zero.");
}
