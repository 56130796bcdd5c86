#pragma once

#include <optional>
#include <string>

#include "eqrf/integrators.hpp"

// The benchmark problems, their semidiscretizations, and high-accuracy
// reference solutions for terminal-error measurement.
//
//   scalar_intro  y' = -y + t^r,  y(0) = 1,  T = 0.1
//   perbc         y_t = zeta y_xx + t^{3/4} v(x), periodic, 500 modes, T = 3
//   per           y_t = i y_xx + t^r/(2+cos 2 pi x), periodic, 500 modes, T = 1
//   perrad        y_t = i y_xx + e^{t^r}/(2+cos 2 pi x), periodic, 500 modes, T = 2
//   heat          y_t = (1+x^2)/10 y_xx + e^{t^{3/4}} x(1-x), Dirichlet,
//                 1000 inner points, T = 2

namespace eqrf {

enum class SourceTimeForm { power, exp_power };  // f(t) = t^r  vs  f(t) = e^{t^r}

struct ProblemSpec {
    std::string name;                       // preset name
    std::optional<double> r;                // source exponent override
    std::optional<int> size;                // modes / inner points override
    std::optional<std::complex<double>> zeta;  // perbc only
    std::optional<std::string> profile;     // perbc only: "smooth" | "linear"
};

struct BenchmarkProblem {
    std::string name;
    DiagonalizableOperator op;
    FractionalSource source;
    Eigen::VectorXcd y0;
    double T;
    SourceTimeForm form;
    ProblemSpec spec;  // parameters this problem was built from
};

/// Build a preset with optional overrides. Unknown names throw.
BenchmarkProblem preset(const ProblemSpec& spec);
BenchmarkProblem preset(const std::string& name);

struct ReferenceSolution {
    enum class Tag { closed_form, per_mode_quadrature, fine_march };
    Eigen::VectorXcd values;  // terminal state at T, physical space
    Tag tag;
    double accuracy_estimate = 0.0;
};

/// Terminal state y(T), per modal component, through the variation-of-constants
/// integral: closed form when f(t) = t^r, adaptive panel quadrature (geometric
/// grading toward both endpoints) otherwise.
ReferenceSolution reference_solution(const BenchmarkProblem& problem, double tol = 1e-12);

/// Cross-validation route: march the problem with a fine grid.
ReferenceSolution reference_solution_fine_march(const BenchmarkProblem& problem, int N,
                                                const Method& method);

/// Discrete max norm of y_N - y(T) on the physical grid.
double terminal_error(const State& y_N, const ReferenceSolution& ref);

}  // namespace eqrf
