#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eqrf/acceptance.hpp"
#include "eqrf/study.hpp"

namespace py = pybind11;
using Complex = std::complex<double>;

namespace {

py::dict report_to_dict(const eqrf::EvalReport& r) {
    py::dict d;
    d["value"] = r.value;
    d["method"] = eqrf::to_string(r.method_used);
    d["est_rel_error"] = r.est_rel_error;
    return d;
}

eqrf::NodeSet nodes_from_args(const std::string& family, int nu) {
    if (family == "trapezoid") return eqrf::node_set(eqrf::NodeFamily::trapezoid, nu);
    if (family == "gauss") return eqrf::node_set(eqrf::NodeFamily::gauss, nu);
    if (family == "gauss_radau") return eqrf::node_set(eqrf::NodeFamily::gauss_radau, nu);
    if (family == "gauss_lobatto") return eqrf::node_set(eqrf::NodeFamily::gauss_lobatto, nu);
    throw std::invalid_argument("unknown node family " + family);
}

}  // namespace

PYBIND11_MODULE(eqrf, m) {
    m.doc() = "Exponential quadrature rules for stiff problems with fractional sources";

    m.def(
        "phi", [](double lam, Complex z) { return eqrf::phi_frac(eqrf::PhiOrder(lam), z); },
        py::arg("lam"), py::arg("z"), "fractional phi function E_{1,1+lam}(z)");
    m.def(
        "phi_report",
        [](double lam, Complex z) {
            return report_to_dict(eqrf::phi_frac_report(eqrf::PhiOrder(lam), z));
        },
        py::arg("lam"), py::arg("z"));
    m.def("phi_classical", &eqrf::phi_classical, py::arg("ell"), py::arg("z"));
    m.def(
        "phi_oracle",
        [](double lam, Complex z, double tol) {
            return report_to_dict(eqrf::phi_frac_oracle(eqrf::PhiOrder(lam), z, tol));
        },
        py::arg("lam"), py::arg("z"), py::arg("tol") = 1e-13,
        "quadrature reference evaluation (|z| <= 1e4)");
    m.def("gamma", &eqrf::gamma_real, py::arg("x"));

    m.def(
        "gauss_legendre",
        [](int n) {
            eqrf::QuadRule q = eqrf::gauss_legendre(n);
            return py::make_tuple(q.nodes, q.weights);
        },
        py::arg("n"), "nodes and weights on [0,1]");
    m.def(
        "gauss_jacobi",
        [](int n, double r) {
            eqrf::QuadRule q = eqrf::gauss_jacobi(n, r);
            return py::make_tuple(q.nodes, q.weights);
        },
        py::arg("n"), py::arg("r"), "rule for the weight s^r on [0,1]");
    m.def(
        "collocation_nodes",
        [](const std::string& family, int nu) { return nodes_from_args(family, nu).c; },
        py::arg("family"), py::arg("nu"));
    m.def("node_relation_residual", &eqrf::node_relation_residual, py::arg("c"));

    m.def(
        "kernel_weight",
        [](double lam, double t_n, double tau, Complex z) {
            return eqrf::kernel_weight(eqrf::PhiOrder(lam), t_n, tau, z);
        },
        py::arg("lam"), py::arg("t_n"), py::arg("tau"), py::arg("z"),
        "int_0^tau e^{(tau-s) z} (t_n+s)^{lam-1} ds");

    m.def(
        "fit_order",
        [](const std::vector<std::pair<double, double>>& pts) {
            eqrf::FitResult f = eqrf::fit_order(pts);
            return py::make_tuple(f.order, f.residual);
        },
        py::arg("n_error_pairs"), "least-squares observed order from (N, error) pairs");

    m.def(
        "run_study",
        [](const std::string& spec_json) {
            eqrf::StudySpec spec = eqrf::study_from_json(spec_json);
            eqrf::ConvergenceReport rep = eqrf::run_study(spec);
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict d;
                d["method"] = r.method;
                d["formulation"] = r.formulation;
                d["nodes"] = r.nodes;
                d["N"] = r.N;
                d["error"] = r.error;
                d["seconds"] = r.seconds;
                rows.append(d);
            }
            py::dict fits;
            for (const auto& [label, fit] : rep.fits)
                fits[py::str(label)] = py::make_tuple(fit.order, fit.residual);
            py::dict out;
            out["rows"] = rows;
            out["fits"] = fits;
            return out;
        },
        py::arg("spec_json"), "run a convergence study from a JSON spec");

    m.def(
        "acceptance_suite",
        [](const std::string& name) {
            eqrf::SuiteResult res = eqrf::run_acceptance_suite(name);
            py::list out;
            for (const auto& c : res.criteria) out.append(py::make_tuple(c.name, c.pass, c.detail));
            return out;
        },
        py::arg("name"), "run one acceptance suite; returns (criterion, pass, detail) tuples");
}
