#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "eqrf/operators.hpp"
#include "eqrf/quadrature.hpp"

// Time-marching schemes for y' = A y + h(t^r) v on a constant grid t_n = n tau:
//
//   EQRF1      y_{n+1} = e^{tau A} y_n + tau phi_1(tau A) h((t_n+c_1 tau)^r) v
//   EQRFnu     the source is interpolated in the non-polynomial basis
//              {(t_n+s)^{jr}} at nu collocation points; each basis integral
//              reduces to the fractional-phi kernel below.
//   CEQR2      the classical two-node polynomial rule, for comparison.
//
// EQRF2 exists in two algebraically equivalent formulations: fractional-phi
// (kernel weights recomputed every step, since they depend on t_n) and
// integral quadrature (a fixed 16-node rule whose propagator samples
// e^{(tau - sigma_i) Lambda} are precomputed once per run).

namespace eqrf {

struct TimeGrid {
    double T;
    int N;
    TimeGrid(double T_, int N_) : T(T_), N(N_) {
        if (!(T > 0.0) || N < 1) throw std::invalid_argument("TimeGrid: need T > 0, N >= 1");
    }
    double tau() const { return T / N; }
};

struct FractionalSource {
    double r;  // exponent in (0,1)
    std::function<std::complex<double>(double)> h;  // applied to t^r
    Eigen::VectorXcd profile;

    FractionalSource(double r_, std::function<std::complex<double>(double)> h_,
                     Eigen::VectorXcd profile_)
        : r(r_), h(std::move(h_)), profile(std::move(profile_)) {
        if (!(r > 0.0 && r < 1.0))
            throw std::out_of_range("FractionalSource: r must lie in the open interval (0,1)");
    }

    /// g(t) = h(t^r) * profile
    Eigen::VectorXcd evaluate(double t) const { return h(std::pow(t, r)) * profile; }
};

/// Scalar kernel  int_0^tau e^{(tau-s) z} (t_n+s)^{lambda-1} ds
///   = Gamma(lambda) ((t_n+tau)^lambda phi_lambda((t_n+tau) z)
///                    - t_n^lambda e^{tau z} phi_lambda(t_n z)).
/// When both phi arguments fall on the asymptotic branch the e^z parts cancel
/// analytically and the difference is formed from the algebraic tails only.
std::complex<double> kernel_weight(PhiOrder lambda, double t_n, double tau,
                                   std::complex<double> z);

/// Coefficient vectors alpha_j of sum_j alpha_j (t_n+s)^{jr} interpolating
/// h((t_n+c_i tau)^r) * profile at the nu collocation points.
std::vector<Eigen::VectorXcd> interp_coefficients(const NodeSet& nodes,
                                                  const FractionalSource& source, double t_n,
                                                  double tau);

enum class Formulation { fractional_phi, integral_quadrature };

struct Method {
    enum class Scheme { eqrf, ceqr2 };
    Scheme scheme = Scheme::eqrf;
    NodeSet nodes;
    Formulation formulation = Formulation::fractional_phi;
    int n_quad = 16;

    static Method eqrf1(double c1);
    static Method eqrf(NodeSet nodes, Formulation f = Formulation::fractional_phi,
                       int n_quad = 16);
    static Method ceqr2(NodeSet nodes);

    std::string label() const;             // e.g. "EQRF2 GR", "CEQR2 T", "EQRF2 G (I)"
    std::string formulation_label() const; // "phi" | "integral" | "-"
};

// Single steps (state.time supplies t_n; the returned state is advanced by tau).
State eqrf1_step(const State& state, const DiagonalizableOperator& op,
                 const FractionalSource& source, double c1, double tau);
State eqrf2_step_phi(const State& state, const DiagonalizableOperator& op,
                     const FractionalSource& source, const NodeSet& nodes, double tau);
State eqrf2_step_integral(const State& state, const DiagonalizableOperator& op,
                          const FractionalSource& source, const NodeSet& nodes, double tau,
                          int n_quad = 16);
State eqrfnu_step(const State& state, const DiagonalizableOperator& op,
                  const FractionalSource& source, const NodeSet& nodes, double tau);
State ceqr2_step(const State& state, const DiagonalizableOperator& op,
                 const FractionalSource& source, const NodeSet& nodes, double tau);

/// Apply N steps of the method over the grid; the whole march runs in modal
/// coordinates (one transform at t=0 and one at t=T). Aborts on non-finite
/// states. Set environment variable EQRF_DEBUG_KERNEL_CHECK=1 to cross-check
/// a random 1% of the fractional kernel weights against the quadrature
/// oracle while marching.
State march(const State& initial, const DiagonalizableOperator& op,
            const FractionalSource& source, const TimeGrid& grid, const Method& method);

namespace detail {
// Scalar interpolation coefficients shared across spatial components.
std::vector<std::complex<double>> interp_scalar_coefficients(
    const NodeSet& nodes, const std::function<std::complex<double>(double)>& h, double r,
    double t_n, double tau);
// Brute-force quadrature of the kernel integral (test/debug oracle).
std::complex<double> kernel_weight_oracle(double lambda, double t_n, double tau,
                                          std::complex<double> z, double abs_tol = 1e-13);
}  // namespace detail

}  // namespace eqrf
