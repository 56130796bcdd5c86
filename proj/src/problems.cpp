#include "eqrf/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "eqrf/detail/adaptive.hpp"

namespace eqrf {

namespace {

using Complex = std::complex<double>;

Complex h_identity(double u) { return Complex(u, 0.0); }
Complex h_exp(double u) { return Complex(std::exp(u), 0.0); }

Eigen::VectorXcd ones(Eigen::Index n) { return Eigen::VectorXcd::Ones(n); }

}  // namespace

BenchmarkProblem preset(const std::string& name) { return preset(ProblemSpec{name}); }

BenchmarkProblem preset(const ProblemSpec& spec) {
    const std::string& name = spec.name;
    if (name == "scalar_intro") {
        double r = spec.r.value_or(0.75);
        auto op = DiagonalizableOperator::diagonal((Eigen::VectorXcd(1) << Complex(-1.0)).finished());
        FractionalSource src(r, h_identity, ones(1));
        return {name, op, std::move(src), ones(1), 0.1, SourceTimeForm::power, spec};
    }
    if (name == "perbc") {
        double r = spec.r.value_or(0.75);
        int n = spec.size.value_or(500);
        Complex zeta = spec.zeta.value_or(Complex(0.0, 1.0));
        std::string profile = spec.profile.value_or("smooth");
        auto op = DiagonalizableOperator::periodic_spectral_second_derivative(n, zeta);
        Eigen::VectorXcd v;
        if (profile == "smooth")
            v = op.sample([](double x) { return 1.0 / (2.0 + std::cos(2.0 * M_PI * x)); });
        else if (profile == "linear")
            v = op.sample([](double x) { return x; });
        else
            throw std::invalid_argument("perbc: profile must be \"smooth\" or \"linear\"");
        Eigen::VectorXcd y0 = op.sample([](double x) { return std::sin(2.0 * M_PI * x); });
        FractionalSource src(r, h_identity, std::move(v));
        return {name, op, std::move(src), std::move(y0), 3.0, SourceTimeForm::power, spec};
    }
    if (name == "per" || name == "perrad") {
        double r = spec.r.value_or(name == "per" ? 0.5 : 0.75);
        int n = spec.size.value_or(500);
        auto op = DiagonalizableOperator::periodic_spectral_second_derivative(n, Complex(0.0, 1.0));
        Eigen::VectorXcd v =
            op.sample([](double x) { return 1.0 / (2.0 + std::cos(2.0 * M_PI * x)); });
        Eigen::VectorXcd y0 = op.sample([](double x) { return std::sin(2.0 * M_PI * x); });
        bool exp_form = (name == "perrad");
        FractionalSource src(r, exp_form ? h_exp : h_identity, std::move(v));
        return {name,
                op,
                std::move(src),
                std::move(y0),
                exp_form ? 2.0 : 1.0,
                exp_form ? SourceTimeForm::exp_power : SourceTimeForm::power,
                spec};
    }
    if (name == "heat") {
        double r = spec.r.value_or(0.75);
        int n = spec.size.value_or(1000);
        auto op = DiagonalizableOperator::dirichlet_fd_variable_coefficient(
            n, [](double x) { return (1.0 + x * x) / 10.0; });
        Eigen::VectorXcd v = op.sample([](double x) { return x * (1.0 - x); });
        Eigen::VectorXcd y0 = op.sample([](double x) { return 4.0 * x * (1.0 - x); });
        FractionalSource src(r, h_exp, std::move(v));
        return {name, op, std::move(src), std::move(y0), 2.0, SourceTimeForm::exp_power, spec};
    }
    throw std::invalid_argument("preset: unknown problem \"" + name + "\"");
}

ReferenceSolution reference_solution(const BenchmarkProblem& problem, double tol) {
    const auto& lambda = problem.op.eigenvalues();
    const Eigen::Index n = lambda.size();
    Eigen::VectorXcd yhat0 = problem.op.to_modal(problem.y0);
    Eigen::VectorXcd vhat = problem.op.to_modal(problem.source.profile);
    const double T = problem.T;
    const double r = problem.source.r;

    Eigen::VectorXcd yhatT(n);
    ReferenceSolution ref;
    double err_acc = 0.0;

    if (problem.form == SourceTimeForm::power) {
        // f(t) = t^r: y_k(T) = e^{lambda T} y0_k + Gamma(1+r) T^{1+r}
        //                       phi_{1+r}(lambda T) v_k
        ref.tag = ReferenceSolution::Tag::closed_form;
        PhiOrder order(1.0 + r);
        for (Eigen::Index k = 0; k < n; ++k) {
            Complex w = kernel_weight(order, 0.0, T, lambda[k]);
            yhatT[k] = std::exp(T * lambda[k]) * yhat0[k] + w * vhat[k];
        }
        err_acc = 1e-13;
    } else {
        // general f(t) = h(t^r): per-mode adaptive quadrature of
        // int_0^T e^{lambda (T-s)} f(s) ds, graded toward s = 0 (unbounded
        // derivatives of f) and s = T (boundary layer / oscillation)
        ref.tag = ReferenceSolution::Tag::per_mode_quadrature;
        const auto& h = problem.source.h;
        double fmax = 0.0;
        for (int i = 0; i <= 64; ++i)
            fmax = std::max(fmax, std::abs(h(std::pow(T * i / 64.0, r))));
        const double vmax = vhat.cwiseAbs().maxCoeff();

        // Modes whose total possible contribution |v_k| fmax T is collectively
        // below a sliver of the tolerance are skipped; this discards in
        // particular the transform-roundoff modes of rapidly decaying
        // profiles without touching anything that matters.
        std::vector<Eigen::Index> order(n);
        for (Eigen::Index k = 0; k < n; ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::abs(vhat[a]) < std::abs(vhat[b]);
        });
        std::vector<bool> skip(n, false);
        double tail_budget = 0.05 * tol * std::max(1.0, vmax * fmax * T);
        double tail = 0.0;
        for (Eigen::Index idx : order) {
            tail += std::abs(vhat[idx]) * fmax * T;
            if (tail > tail_budget) break;
            skip[idx] = true;
        }

        for (Eigen::Index k = 0; k < n; ++k) {
            Complex lam = lambda[k];
            Complex inhom = 0.0;
            if (!skip[k]) {
                auto f = [&](double s) {
                    return std::exp(lam * (T - s)) * h(std::pow(s, r));
                };
                auto seeds = detail::seed_geometric(0.0, T, true, true);
                double rate = std::abs(lam.imag()) + 1.0;
                seeds = detail::seed_max_width(std::move(seeds), 10.0 / rate);
                double atol = tol * fmax * T * 0.1;
                // e^{lam (T-s)} carries phase-rounding noise ~ eps |lam| T
                double noise_rate = 3e-16 * std::max(std::abs(lam) * T, 1.0) * fmax;
                auto res = detail::adaptive_integral(f, seeds, atol, noise_rate);
                inhom = res.value;
                err_acc += res.est_abs_error * std::abs(vhat[k]);
            }
            yhatT[k] = std::exp(T * lam) * yhat0[k] + inhom * vhat[k];
        }
    }
    ref.values = problem.op.from_modal(yhatT);
    ref.accuracy_estimate = err_acc;
    return ref;
}

ReferenceSolution reference_solution_fine_march(const BenchmarkProblem& problem, int N,
                                                const Method& method) {
    State y0{problem.y0, 0.0};
    State yT = march(y0, problem.op, problem.source, TimeGrid(problem.T, N), method);
    ReferenceSolution ref;
    ref.values = yT.values;
    ref.tag = ReferenceSolution::Tag::fine_march;
    ref.accuracy_estimate = 0.0;  // order-based; callers compare routes
    return ref;
}

double terminal_error(const State& y_N, const ReferenceSolution& ref) {
    if (y_N.values.size() != ref.values.size())
        throw std::invalid_argument("terminal_error: dimension mismatch");
    return (y_N.values - ref.values).cwiseAbs().maxCoeff();
}

}  // namespace eqrf
