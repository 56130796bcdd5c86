#include <doctest.h>

#include <cmath>

#include "eqrf/integrators.hpp"
#include "eqrf/problems.hpp"

using namespace eqrf;
using Complex = std::complex<double>;

namespace {

// frozen from the brute-force quadrature oracle (recomputed below)
const Complex kKernel74(0.02819295127559670, 0.0);

Complex h_one(double) { return 1.0; }
Complex h_id(double u) { return u; }

FractionalSource scalar_source(double r, std::function<Complex(double)> h) {
    return FractionalSource(r, std::move(h), Eigen::VectorXcd::Ones(1));
}

}  // namespace

TEST_CASE("kernel_weight closed forms") {
    // z = 0: ((t+tau)^lam - t^lam)/lam
    for (double lam : {0.8, 1.75, 3.25}) {
        for (double tn : {0.0, 0.4, 2.0}) {
            double tau = 0.125;
            Complex k = kernel_weight(PhiOrder(lam), tn, tau, 0.0);
            double expected = (std::pow(tn + tau, lam) - std::pow(tn, lam)) / lam;
            CHECK(std::abs(k - expected) <= 1e-13 * expected);
        }
    }
    // lambda = 1: tau phi_1(tau z), independent of t_n
    for (Complex z : {Complex(-7, 0), Complex(0, 300), Complex(-2, 45)}) {
        double tau = 0.25;
        Complex expected = tau * phi_classical(1, tau * z);
        for (double tn : {0.0, 0.9, 3.7}) {
            Complex k = kernel_weight(PhiOrder(1.0), tn, tau, z);
            CHECK(std::abs(k - expected) <= 1e-12 * std::abs(expected));
        }
    }
}

TEST_CASE("kernel_weight fixture and quadrature oracle") {
    Complex k = kernel_weight(PhiOrder(1.75), 0.5, 0.1, -20.0);
    CHECK(std::abs(k - kKernel74) <= 1e-11 * std::abs(kKernel74));
    Complex o = detail::kernel_weight_oracle(1.75, 0.5, 0.1, -20.0);
    CHECK(std::abs(o - kKernel74) <= 1e-12 * std::abs(kKernel74));

    // sweep incl. imaginary axis and stiff t_n |z|
    for (double lam : {1.25, 1.75, 2.5}) {
        for (double tn : {0.0, 0.5, 2.0}) {
            for (Complex z : {Complex(-5, 0), Complex(0, 900), Complex(-30, 300),
                              Complex(0, -2e4), Complex(-1.5e4, 0)}) {
                double tau = 0.05;
                if (std::abs(z) * tau > 2.5e3) continue;
                Complex kv = kernel_weight(PhiOrder(lam), tn, tau, z);
                Complex ov = detail::kernel_weight_oracle(lam, tn, tau, z, 1e-14);
                CHECK(std::abs(kv - ov) <= 1e-10 * std::max(std::abs(ov), 1e-20));
            }
        }
    }
}

TEST_CASE("interpolation coefficients") {
    NodeSet trap = node_set(NodeFamily::trapezoid, 2);

    // h == 1: alpha_0 = 1, alpha_1 = 0
    auto a = detail::interp_scalar_coefficients(trap, h_one, 0.5, 0.3, 0.1);
    CHECK(std::abs(a[0] - 1.0) < 1e-14);
    CHECK(std::abs(a[1]) < 1e-14);

    // h(x) = x: the basis contains (t_n + s)^r itself
    a = detail::interp_scalar_coefficients(trap, h_id, 0.5, 0.3, 0.1);
    CHECK(std::abs(a[0]) < 1e-14);
    CHECK(std::abs(a[1] - 1.0) < 1e-14);

    // h = exp, t_n = 0, tau = 1, r = 1/2: alpha_1 = e - 1, alpha_0 = 1
    a = detail::interp_scalar_coefficients(
        trap, [](double u) { return Complex(std::exp(u)); }, 0.5, 0.0, 1.0);
    CHECK(std::abs(a[0] - 1.0) < 1e-14);
    CHECK(std::abs(a[1] - std::expm1(1.0)) < 1e-14);

    // nu = 3 solve reproduces data at the nodes
    NodeSet gl3 = node_set(NodeFamily::gauss_lobatto, 3);
    auto h = [](double u) { return Complex(std::cos(u), 0.25 * u); };
    double r = 0.75, tn = 0.7, tau = 0.2;
    auto a3 = detail::interp_scalar_coefficients(gl3, h, r, tn, tau);
    for (double c : gl3.c) {
        double w = std::pow(tn + c * tau, r);
        Complex val = a3[0] + a3[1] * w + a3[2] * w * w;
        CHECK(std::abs(val - h(w)) < 1e-13);
    }

    // vector version scales the profile
    Eigen::VectorXcd prof(2);
    prof << Complex(2, 0), Complex(0, -1);
    FractionalSource src(0.5, h_id, prof);
    auto alphas = interp_coefficients(trap, src, 0.3, 0.1);
    REQUIRE(alphas.size() == 2);
    CHECK(std::abs(alphas[1][0] - Complex(2, 0)) < 1e-14);
    CHECK(std::abs(alphas[1][1] - Complex(0, -1)) < 1e-14);
}

TEST_CASE("steps collapse correctly for A = 0") {
    auto op = DiagonalizableOperator::diagonal(Eigen::VectorXcd::Zero(1));
    double r = 0.5, tau = 0.8;
    State y0{Eigen::VectorXcd::Ones(1), 0.0};

    // EQRF1: y1 = y0 + tau g(c1 tau)
    FractionalSource src(r, [](double u) { return Complex(std::sin(u) + 2.0); },
                         Eigen::VectorXcd::Ones(1));
    double c1 = 0.3;
    State y1 = eqrf1_step(y0, op, src, c1, tau);
    Complex expected = 1.0 + tau * src.h(std::pow(c1 * tau, r));
    CHECK(std::abs(y1.values[0] - expected) < 1e-14);

    // EQRF2: y1 = y0 + tau alpha_0 + tau^{1+r}/(1+r) alpha_1  (t_n = 0)
    NodeSet trap = node_set(NodeFamily::trapezoid, 2);
    auto h2 = [](double u) { return Complex(u * u); };
    FractionalSource src2(r, h2, Eigen::VectorXcd::Ones(1));
    auto a = detail::interp_scalar_coefficients(trap, h2, r, 0.0, tau);
    State y2 = eqrf2_step_phi(y0, op, src2, trap, tau);
    Complex expected2 = 1.0 + tau * a[0] + std::pow(tau, 1.0 + r) / (1.0 + r) * a[1];
    CHECK(std::abs(y2.values[0] - expected2) < 1e-14);

    // integral formulation gives the same moment at z = 0
    State y2i = eqrf2_step_integral(y0, op, src2, trap, tau);
    CHECK(std::abs(y2i.values[0] - expected2) < 1e-13);
}

TEST_CASE("CEQR2 is exact for sources linear in t") {
    auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
        12, [](double) { return 0.2; });
    Eigen::VectorXcd v = op.sample([](double x) { return x * (1.0 - x); });
    // g(t) = (2 + 3 t) v realized as h(t^r) with r = 1/2, h(u) = 2 + 3 u^2
    double r = 0.5, tau = 0.21;
    FractionalSource src(r, [](double u) { return Complex(2.0 + 3.0 * u * u); }, v);
    State y0{op.sample([](double x) { return std::sin(M_PI * x); }), 0.0};
    State y1 = ceqr2_step(y0, op, src, node_set(NodeFamily::gauss, 2), tau);

    // exact: e^{tau A} y0 + tau phi_1(tau A)(2 + 3 t_n) v + 3 tau^2 phi_2(tau A) v
    Eigen::VectorXcd yhat = op.to_modal(y0.values);
    Eigen::VectorXcd vhat = op.to_modal(v);
    for (int m = 0; m < 12; ++m) {
        Complex z = tau * op.eigenvalues()[m];
        yhat[m] = std::exp(z) * yhat[m] + tau * phi_classical(1, z) * (2.0 * vhat[m]) +
                  3.0 * tau * tau * phi_classical(2, z) * vhat[m];
    }
    Eigen::VectorXcd exact = op.from_modal(yhat);
    CHECK((y1.values - exact).cwiseAbs().maxCoeff() <=
          1e-13 * exact.cwiseAbs().maxCoeff());
}

TEST_CASE("EQRFnu specializations") {
    auto op = DiagonalizableOperator::periodic_spectral_second_derivative(16, Complex(0, 1));
    Eigen::VectorXcd v = op.sample([](double x) { return 1.0 / (2.0 + std::cos(2 * M_PI * x)); });
    FractionalSource src(0.75, [](double u) { return Complex(std::exp(u)); }, v);
    State y0{op.sample([](double x) { return std::sin(2 * M_PI * x); }), 0.25};
    double tau = 0.125;

    // nu = 1 equals eqrf1_step bitwise
    State a = eqrf1_step(y0, op, src, 0.5, tau);
    State b = eqrfnu_step(y0, op, src, NodeSet::single(0.5), tau);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);

    // nu = 2 equals eqrf2_step_phi
    NodeSet gr = node_set(NodeFamily::gauss_radau, 2);
    State c = eqrf2_step_phi(y0, op, src, gr, tau);
    State d = eqrfnu_step(y0, op, src, gr, tau);
    CHECK((c.values - d.values).cwiseAbs().maxCoeff() <=
          1e-14 * c.values.cwiseAbs().maxCoeff());
}

TEST_CASE("EQRF2 formulations agree away from the oscillatory limit") {
    auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
        64, [](double x) { return (1.0 + x * x) / 10.0; });
    Eigen::VectorXcd v = op.sample([](double x) { return x * (1.0 - x); });
    FractionalSource src(0.75, [](double u) { return Complex(std::exp(u)); }, v);
    State y0{op.sample([](double x) { return 4.0 * x * (1.0 - x); }), 0.0};
    TimeGrid grid(2.0, 100);
    Method phi_form = Method::eqrf(node_set(NodeFamily::gauss, 2));
    Method int_form = Method::eqrf(node_set(NodeFamily::gauss, 2),
                                   Formulation::integral_quadrature);
    State yf = march(y0, op, src, grid, phi_form);
    State yi = march(y0, op, src, grid, int_form);
    CHECK((yf.values - yi.values).cwiseAbs().maxCoeff() <=
          1e-10 * yf.values.cwiseAbs().maxCoeff());
}

TEST_CASE("t_n = 0 quadrature weight matches the kernel") {
    // int_0^tau e^{(tau-s) z} s^r ds = kernel_weight(1+r, 0, tau, z)
    double r = 0.6, tau = 0.3;
    QuadRule gj = gauss_jacobi(16, r);
    for (Complex z : {Complex(0, 0), Complex(-12, 0), Complex(0, 35), Complex(-4, 18)}) {
        Complex acc = 0.0;
        for (int i = 0; i < 16; ++i)
            acc += gj.weights[i] * std::exp((1.0 - gj.nodes[i]) * tau * z);
        acc *= std::pow(tau, 1.0 + r);
        Complex k = kernel_weight(PhiOrder(1.0 + r), 0.0, tau, z);
        CHECK(std::abs(acc - k) <= 1e-12 * std::abs(k));
        if (z == Complex(0, 0))
            CHECK(std::abs(acc - std::pow(tau, 1.0 + r) / (1.0 + r)) < 1e-15);
    }
}

TEST_CASE("march basics") {
    BenchmarkProblem p = preset("scalar_intro");
    TimeGrid grid(p.T, 1);
    State y0{p.y0, 0.0};
    Method m = Method::eqrf1(0.5);
    State one = march(y0, p.op, p.source, grid, m);
    State step = eqrf1_step(y0, p.op, p.source, 0.5, grid.tau());
    CHECK(one.values[0] == step.values[0]);
    CHECK(one.time == doctest::Approx(p.T));

    // zero source: y_N = e^{TA} y0
    auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
        24, [](double) { return 0.15; });
    Eigen::VectorXcd y0v = op.sample([](double x) { return std::sin(M_PI * x); });
    FractionalSource zero(0.5, [](double) { return Complex(0.0); },
                          Eigen::VectorXcd::Zero(24));
    State yN = march({y0v, 0.0}, op, zero, TimeGrid(1.0, 37),
                     Method::eqrf(node_set(NodeFamily::gauss, 2)));
    State exact = apply_expm(op, 1.0, {y0v, 0.0});
    CHECK((yN.values - exact.values).cwiseAbs().maxCoeff() <=
          1e-11 * exact.values.cwiseAbs().maxCoeff() + 1e-16);

    // non-finite states abort
    FractionalSource bad(0.5, [](double) { return Complex(std::nan(""), 0.0); },
                         Eigen::VectorXcd::Ones(24));
    CHECK_THROWS_AS(march({y0v, 0.0}, op, bad, TimeGrid(1.0, 4),
                          Method::eqrf(node_set(NodeFamily::gauss, 2))),
                    std::runtime_error);

    CHECK_THROWS_AS(FractionalSource(1.0, h_one, Eigen::VectorXcd::Ones(1)), std::out_of_range);
    CHECK_THROWS_AS(FractionalSource(0.0, h_one, Eigen::VectorXcd::Ones(1)), std::out_of_range);
}

TEST_CASE("paper spot values for the scalar problem") {
    // EQRF1 terminal errors at the two pinned (r, c1, N) cells
    {
        ProblemSpec spec{"scalar_intro"};
        spec.r = 0.75;
        BenchmarkProblem p = preset(spec);
        ReferenceSolution ref = reference_solution(p);
        State yN = march({p.y0, 0.0}, p.op, p.source, TimeGrid(p.T, 1024), Method::eqrf1(0.5));
        double err = terminal_error(yN, ref);
        CHECK(err == doctest::Approx(4.106270656834e-09).epsilon(0.01));
    }
    {
        ProblemSpec spec{"scalar_intro"};
        spec.r = 0.25;
        BenchmarkProblem p = preset(spec);
        ReferenceSolution ref = reference_solution(p);
        State yN = march({p.y0, 0.0}, p.op, p.source, TimeGrid(p.T, 4), Method::eqrf1(0.0));
        double err = terminal_error(yN, ref);
        CHECK(err == doctest::Approx(9.40141495069434e-03).epsilon(0.01));
    }
}

TEST_CASE("march with kernel debug checks enabled") {
    setenv("EQRF_DEBUG_KERNEL_CHECK", "1", 1);
    auto op = DiagonalizableOperator::periodic_spectral_second_derivative(32, Complex(0, 1));
    Eigen::VectorXcd v = op.sample([](double x) { return 1.0 / (2.0 + std::cos(2 * M_PI * x)); });
    FractionalSource src(0.5, [](double u) { return Complex(std::exp(u)); }, v);
    State y0{op.sample([](double x) { return std::sin(2 * M_PI * x); }), 0.0};
    CHECK_NOTHROW(march(y0, op, src, TimeGrid(1.0, 16),
                        Method::eqrf(node_set(NodeFamily::gauss_radau, 2))));
    CHECK_NOTHROW(march(y0, op, src, TimeGrid(1.0, 16),
                        Method::eqrf(node_set(NodeFamily::gauss, 2),
                                     Formulation::integral_quadrature)));
    unsetenv("EQRF_DEBUG_KERNEL_CHECK");
}
