#pragma once

#include <string>
#include <vector>

// Benchmark acceptance suites. Each suite reruns one benchmark family end to
// end and checks observed convergence orders, pinned reference error values,
// and cross-route agreements; one pass/fail line per criterion.

namespace eqrf {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CriterionResult> criteria;
    double seconds = 0.0;

    bool pass() const {
        for (const auto& c : criteria)
            if (!c.pass) return false;
        return true;
    }
};

/// Known suites: fig1, fig2, fig3, fig4, fig5, fig6, props.
std::vector<std::string> acceptance_suites();

SuiteResult run_acceptance_suite(const std::string& name);

/// Formatted pass/fail lines for a suite result.
std::string format_suite_result(const SuiteResult& result);

}  // namespace eqrf
