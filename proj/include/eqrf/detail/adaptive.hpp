#pragma once

#include <complex>
#include <functional>
#include <vector>

// Panel-adaptive Gauss-Legendre integration of complex-valued integrands.
// Panels are seeded by the caller (geometric grading toward endpoints,
// phase-budget splitting for oscillatory exponents) and then bisected until
// the embedded 16/24-point estimates agree within the panel's share of the
// absolute tolerance.

namespace eqrf::detail {

using ComplexFn = std::function<std::complex<double>(double)>;

struct AdaptiveResult {
    std::complex<double> value;
    double est_abs_error = 0.0;
    long evaluations = 0;
};

// Integrate f over [a,b]. `breakpoints` must contain a and b; extra interior
// points seed the initial panels. `noise_rate` is the caller's estimate of the
// irreducible absolute rounding noise of f per unit length (e.g. eps |z| T
// |f|max for integrands e^{z (T-s)}); panels whose 16/24-point discrepancy is
// below it are accepted rather than bisected further.
AdaptiveResult adaptive_integral(const ComplexFn& f, std::vector<double> breakpoints,
                                 double abs_tol, double noise_rate = 0.0, int max_depth = 60);

// Breakpoint helpers. All return sorted, de-duplicated lists including a, b.
std::vector<double> seed_geometric(double a, double b, bool toward_a, bool toward_b,
                                   int levels = 45);
// Subdivide so that no panel is wider than max_width.
std::vector<double> seed_max_width(std::vector<double> breakpoints, double max_width);

}  // namespace eqrf::detail
