#pragma once

#include <complex>
#include <stdexcept>

// Fractional phi functions phi_lambda(z) = E_{1,1+lambda}(z), the lambda > 0
// generalisation of the classical phi_l kernels of exponential integrators,
// evaluated for complex scalar arguments across the stiff range produced by
// semidiscretised PDEs (|z| up to ~1e8, arguments on the negative real axis
// and on the imaginary axis).
//
// Evaluation is a two-branch hybrid:
//   |z| <= 40  Taylor series  sum_k z^k / Gamma(1+lambda+k), accumulated in
//              double-double arithmetic so that the cancellation on
//              Re z <= 0 (partial sums up to ~e^{|z|}) cannot surface.
//   |z| >  40  z^{-lambda} e^z  -  sum_{k=1}^{K} z^{-k} / Gamma(1+lambda-k),
//              truncated at the smallest term or K = 30. For integer lambda
//              the reciprocal gamma factors vanish past k = lambda and the
//              expression is exact.
// The two branches agree to >= 12 digits on an overlap annulus around the
// crossover (see tests).

namespace eqrf {

// Thrown when an evaluation cannot meet its accuracy contract.
class AccuracyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PhiOrder {
    double lambda;
    explicit PhiOrder(double lam) : lambda(lam) {
        if (!(lam > 0.0) || !std::isfinite(lam))
            throw std::domain_error("PhiOrder: lambda must be positive and finite");
    }
};

enum class EvalMethod { taylor_series, asymptotic_plus_exponential, integral_oracle };

const char* to_string(EvalMethod m);

struct EvalReport {
    std::complex<double> value;
    EvalMethod method_used;
    double est_rel_error;
};

/// Gamma(x) for x > 0.
double gamma_real(double x);

/// 1/Gamma(x) for any real x; returns 0 at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

/// phi_lambda(z) = E_{1,1+lambda}(z). Throws AccuracyError if the internal
/// error estimate exceeds 1e-10 relative.
std::complex<double> phi_frac(PhiOrder order, std::complex<double> z);

/// Same evaluation, with the branch taken and the error estimate attached.
EvalReport phi_frac_report(PhiOrder order, std::complex<double> z);

/// Classical phi_l: phi_0(z) = e^z, phi_l = E_{1,1+l} for integer l >= 1.
std::complex<double> phi_classical(int ell, std::complex<double> z);

/// Reference evaluation of phi_lambda(z) by panel-adaptive quadrature of
/// (1/Gamma(lambda)) int_0^1 e^{(1-theta) z} theta^{lambda-1} dtheta, with a
/// Gauss-Jacobi rule (weight theta^{lambda-1}) on the panel touching 0.
/// Supported for |z| <= 1e4 (oscillation budget); abs_tol is an absolute
/// tolerance on the returned value.
EvalReport phi_frac_oracle(PhiOrder order, std::complex<double> z, double abs_tol);

// Split evaluation phi = exp_coeff * e^z + algebraic, so that time steppers
// can cancel the exponential factors between two phi evaluations analytically
// instead of numerically. On the series branch exp_coeff = 0 and algebraic
// carries the full value.
struct PhiParts {
    std::complex<double> exp_coeff;
    std::complex<double> algebraic;
    EvalMethod method;
    double est_rel_error;
};

PhiParts phi_frac_parts(PhiOrder order, std::complex<double> z);

namespace detail {
// Branches exposed for the overlap tests.
std::complex<double> phi_series(double lambda, std::complex<double> z, double* est = nullptr);
PhiParts phi_asymptotic(double lambda, std::complex<double> z);
}  // namespace detail

}  // namespace eqrf
