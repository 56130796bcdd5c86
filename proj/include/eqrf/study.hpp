#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eqrf/problems.hpp"

// Batch experiment driver: run a (problem, methods, N list) study, measure
// terminal errors and wall-clock times, fit observed convergence orders, and
// emit machine-readable CSV/JSON reports.

namespace eqrf {

struct MethodSpec {
    std::string scheme = "eqrf";  // "eqrf" | "ceqr2"
    std::string nodes = "gauss";  // family name, or "custom"
    int nu = 2;
    std::vector<double> custom_nodes;         // when nodes == "custom"
    std::optional<double> c1;                 // nu == 1
    std::string formulation = "phi";          // "phi" | "integral"
    std::optional<double> expected_order;     // acceptance hint
    double order_tol = 0.15;

    Method build() const;
};

struct StudySpec {
    ProblemSpec problem;
    std::vector<MethodSpec> methods;
    std::vector<int> Ns;      // strictly increasing
    int repetitions = 1;      // timing repetitions (median reported)
    double reference_tol = 1e-12;
};

struct StudyRow {
    std::string method;
    std::string formulation;
    std::string nodes;
    int N = 0;
    double error = 0.0;
    double seconds = 0.0;
};

struct FitResult {
    double order = 0.0;     // positive p in error ~ N^-p
    double residual = 0.0;  // rms deviation of the log-log fit
    int points_used = 0;
};

struct ConvergenceReport {
    std::vector<StudyRow> rows;
    std::map<std::string, FitResult> fits;  // per method label
};

/// Least-squares slope of log(error) vs log(N), reported as a positive order.
/// Needs at least 3 points; when 5 or more points are given the smallest-N
/// row is excluded from the fit, since the leading cell of a dyadic/arithmetic
/// N sweep routinely sits outside the asymptotic regime and biases the slope.
FitResult fit_order(const std::vector<std::pair<double, double>>& n_error_pairs);

/// Run every (method, N) cell; the reference solution is computed once and
/// reused. Timings cover the march only (median over `repetitions` runs).
ConvergenceReport run_study(const StudySpec& spec);

// CSV with header method,formulation,nodes,N,error,seconds
void write_csv(const ConvergenceReport& report, std::ostream& os);
std::vector<StudyRow> read_csv(std::istream& is);

// JSON round-trip for study specs and a {method -> slope/residual/pass}
// summary document.
StudySpec study_from_json(const std::string& text);
std::string study_to_json(const StudySpec& spec);
std::string summary_to_json(const StudySpec& spec, const ConvergenceReport& report);

}  // namespace eqrf
