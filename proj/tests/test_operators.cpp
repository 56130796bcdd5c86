#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "eqrf/operators.hpp"

using namespace eqrf;
using Complex = std::complex<double>;

namespace {

Eigen::VectorXcd random_vector(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
    return v;
}

// dense stencil a(x_i) (v_{i-1} - 2 v_i + v_{i+1}) / dx^2 with Dirichlet ends
Eigen::VectorXcd dense_apply(const std::function<double(double)>& a, const Eigen::VectorXcd& v) {
    int n = static_cast<int>(v.size());
    double dx = 1.0 / (n + 1);
    Eigen::VectorXcd out(n);
    for (int i = 0; i < n; ++i) {
        Complex left = i > 0 ? v[i - 1] : Complex(0);
        Complex right = i + 1 < n ? v[i + 1] : Complex(0);
        out[i] = a((i + 1) * dx) * (left - 2.0 * v[i] + right) / (dx * dx);
    }
    return out;
}

}  // namespace

TEST_CASE("periodic operator: eigenfunction and symbol") {
    auto op = DiagonalizableOperator::periodic_spectral_second_derivative(64, 1.0);
    Eigen::VectorXcd v = op.sample([](double x) { return std::sin(2.0 * M_PI * x); });
    Eigen::VectorXcd av = op.apply(v);
    double w = 4.0 * M_PI * M_PI;
    CHECK((av + w * v).cwiseAbs().maxCoeff() / w < 1e-10);

    // k = 0 mode has eigenvalue zero
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(64);
    CHECK(op.apply(ones).cwiseAbs().maxCoeff() < 1e-10);

    // pure modes pick up exactly -zeta (2 pi k)^2
    for (int k : {1, -3, 7, 31}) {
        Eigen::VectorXcd mode = op.sample([k](double x) {
            return std::exp(Complex(0, 2.0 * M_PI * k * x));
        });
        Eigen::VectorXcd am = op.apply(mode);
        Complex expected = -std::pow(2.0 * M_PI * k, 2);
        CHECK((am - expected * mode).cwiseAbs().maxCoeff() / std::abs(expected) < 1e-12);
    }

    CHECK_THROWS_AS(DiagonalizableOperator::periodic_spectral_second_derivative(63, 1.0),
                    std::invalid_argument);
}

TEST_CASE("periodic operator: 500-mode spectrum for zeta = i") {
    auto op = DiagonalizableOperator::periodic_spectral_second_derivative(500, Complex(0, 1));
    double lmax = op.eigenvalues().cwiseAbs().maxCoeff();
    double expected = std::pow(2.0 * M_PI * 250.0, 2);
    CHECK(lmax == doctest::Approx(expected).epsilon(1e-13));
    // each eigenvalue matches the symbol table -zeta (2 pi k)^2
    for (int m : {0, 1, 249, 250, 251, 499}) {
        int k = m < 250 ? m : m - 500;
        Complex sym = -Complex(0, 1) * std::pow(2.0 * M_PI * k, 2);
        CHECK(std::abs(op.eigenvalues()[m] - sym) <= 1e-12 * std::max(1.0, std::abs(sym)));
    }
}

TEST_CASE("round trip of the modal transforms") {
    auto per = DiagonalizableOperator::periodic_spectral_second_derivative(128, Complex(0, 1));
    auto dir = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
        97, [](double x) { return (1.0 + x * x) / 10.0; });
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXcd v = random_vector(128, 1000 + trial);
        CHECK((per.from_modal(per.to_modal(v)) - v).norm() / v.norm() < 1e-12);
        Eigen::VectorXcd w = random_vector(97, 5000 + trial);
        CHECK((dir.from_modal(dir.to_modal(w)) - w).norm() / w.norm() < 1e-12);
    }
}

TEST_CASE("dirichlet operator: constant-coefficient spectrum") {
    auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
        3, [](double) { return 1.0; });
    // eigenvalues 16 (-2 + 2 cos(j pi / 4)), sorted ascending
    Eigen::VectorXd eig = op.eigenvalues().real();
    double s2 = std::sqrt(2.0);
    CHECK(eig[0] == doctest::Approx(16.0 * (-2.0 - s2)).epsilon(1e-13));
    CHECK(eig[1] == doctest::Approx(-32.0).epsilon(1e-13));
    CHECK(eig[2] == doctest::Approx(16.0 * (-2.0 + s2)).epsilon(1e-13));
    CHECK(op.eigenvalues().imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dirichlet operator: variable coefficient") {
    auto a = [](double x) { return (1.0 + x * x) / 10.0; };
    auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(40, a);

    for (int i = 0; i < 40; ++i) {
        CHECK(op.eigenvalues()[i].imag() == 0.0);
        CHECK(op.eigenvalues()[i].real() < 0.0);
    }

    Eigen::VectorXcd v = op.sample([](double x) { return x * (1.0 - x); });
    Eigen::VectorXcd av = op.apply(v);
    Eigen::VectorXcd ref = dense_apply(a, v);
    CHECK((av - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff() < 1e-12);

    // spectral equivalence on random vectors
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXcd w = random_vector(40, 42 + trial);
        Eigen::VectorXcd aw = op.apply(w);
        Eigen::VectorXcd dw = dense_apply(a, w);
        CHECK((aw - dw).cwiseAbs().maxCoeff() <= 1e-10 * dw.cwiseAbs().maxCoeff());
    }

    CHECK_THROWS_AS(DiagonalizableOperator::dirichlet_fd_variable_coefficient(
                        8, [](double x) { return x - 0.5; }),
                    std::invalid_argument);
}

TEST_CASE("apply_phi and apply_expm") {
    auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
        16, [](double) { return 1.0; });
    State v{random_vector(16, 3), 0.0};

    // t = 0: phi_lambda(0) = 1/Gamma(1+lambda)
    for (double lam : {0.5, 1.0, 2.25}) {
        State out = apply_phi(op, PhiOrder(lam), 0.0, v);
        Eigen::VectorXcd expected = v.values / std::tgamma(1.0 + lam);
        CHECK((out.values - expected).cwiseAbs().maxCoeff() < 1e-13);
    }

    // zero operator: v / Gamma(1+lambda) for any t
    auto zero_op = DiagonalizableOperator::diagonal(Eigen::VectorXcd::Zero(4));
    State w{random_vector(4, 9), 0.0};
    State outz = apply_phi(zero_op, PhiOrder(0.75), 2.0, w);
    CHECK((outz.values - w.values / std::tgamma(1.75)).cwiseAbs().maxCoeff() < 1e-14);

    // semigroup property
    State e1 = apply_expm(op, 0.125, v);
    State e2 = apply_expm(op, 0.175, e1);
    State e3 = apply_expm(op, 0.3, v);
    CHECK((e2.values - e3.values).cwiseAbs().maxCoeff() <=
          1e-11 * e3.values.cwiseAbs().maxCoeff() + 1e-14);

    CHECK_THROWS_AS(apply_phi(op, PhiOrder(1.0), -0.1, v), std::domain_error);
}

TEST_CASE("z phi_1(z) = e^z - 1 elementwise through apply_phi") {
    auto op = DiagonalizableOperator::periodic_spectral_second_derivative(32, Complex(0, 1));
    double t = 0.37;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(32);
    Eigen::VectorXcd vhat = op.to_modal(v);
    State out = apply_phi(op, PhiOrder(1.0), t, State{v, 0.0});
    Eigen::VectorXcd what = op.to_modal(out.values);
    for (int m = 0; m < 32; ++m) {
        Complex z = t * op.eigenvalues()[m];
        Complex lhs = z * what[m];
        Complex rhs = (std::exp(z) - 1.0) * vhat[m];
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("phi_1 solves y' = A y + v from rest") {
    // phi_1(A) v at t = 1 equals the time-1 solution of y' = A y + v, y(0)=0;
    // oracle: classic RK4 on the modal scalar equations, step-halved until
    // converged
    auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
        16, [](double x) { return (1.0 + x * x) / 10.0; });
    Eigen::VectorXcd v = op.sample([](double x) { return x * (1.0 - x); });
    Eigen::VectorXcd vhat = op.to_modal(v);

    Eigen::VectorXcd rk(16);
    for (int m = 0; m < 16; ++m) {
        Complex lam = op.eigenvalues()[m];
        auto f = [&](Complex y) { return lam * y + vhat[m]; };
        Complex y = 0.0;
        const int steps = 4096;
        double h = 1.0 / steps;
        for (int s = 0; s < steps; ++s) {
            Complex k1 = f(y);
            Complex k2 = f(y + 0.5 * h * k1);
            Complex k3 = f(y + 0.5 * h * k2);
            Complex k4 = f(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        rk[m] = y;
    }
    Eigen::VectorXcd expected = op.from_modal(rk);
    State out = apply_phi(op, PhiOrder(1.0), 1.0, State{v, 0.0});
    CHECK((out.values - expected).cwiseAbs().maxCoeff() <=
          1e-9 * expected.cwiseAbs().maxCoeff());
}
