#include "eqrf/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "eqrf/detail/adaptive.hpp"
#include "eqrf/detail/double_double.hpp"
#include "eqrf/quadrature.hpp"

namespace eqrf {

namespace {

constexpr double kBranchCrossover = 40.0;
constexpr double kAccuracyThreshold = 1e-10;

void require_finite(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("phi: non-finite argument");
}

// sin(pi x) with exact integer-part reduction.
double sin_pi(double x) {
    double n = std::nearbyint(x);
    double f = x - n;
    double s = std::sin(M_PI * f);
    bool odd = std::fmod(std::fabs(n), 2.0) == 1.0;
    return odd ? -s : s;
}

}  // namespace

const char* to_string(EvalMethod m) {
    switch (m) {
        case EvalMethod::taylor_series: return "taylor_series";
        case EvalMethod::asymptotic_plus_exponential: return "asymptotic_plus_exponential";
        case EvalMethod::integral_oracle: return "integral_oracle";
    }
    return "?";
}

double gamma_real(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("gamma_real: argument must be positive and finite");
    return std::tgamma(x);
}

double reciprocal_gamma(double x) {
    if (x > 0.5) return 1.0 / std::tgamma(x);
    if (x <= 0.0 && x == std::nearbyint(x)) return 0.0;  // poles
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    return std::tgamma(1.0 - x) * sin_pi(x) / M_PI;
}

namespace detail {

std::complex<double> phi_series(double lambda, std::complex<double> z, double* est) {
    // sum_k z^k / Gamma(1+lambda+k) in double-double; the ratio between
    // consecutive terms is z/(1+lambda+k), kept to ~eps^2 so that the
    // cancellation for Re z <= 0 does not amplify term errors.
    ddc term = {{1.0 / std::tgamma(1.0 + lambda), 0.0}, {0.0, 0.0}};
    ddc sum = {{0.0, 0.0}, {0.0, 0.0}};
    const double az = std::abs(z);
    double max_partial = 0.0;
    for (int k = 0; k < 800; ++k) {
        sum = ddc_add(sum, term);
        max_partial = std::max(max_partial, ddc_abs_hi(sum));
        dd denom = two_sum(lambda, 1.0 + k);  // exact: 1+k is an exact double here
        term = ddc_div_dd(ddc_mul_z(term, z), denom);
        if (ddc_abs_hi(term) < 1e-34 * std::max(max_partial, 1e-300) && k >= az) break;
    }
    std::complex<double> value = ddc_round(sum);
    if (est) {
        double mag = std::abs(value);
        *est = mag > 0.0 ? 4e-32 * max_partial / mag + 5e-16
                         : std::numeric_limits<double>::infinity();
    }
    return value;
}

namespace {

// The asymptotic tail coefficients 1/Gamma(1+lambda-k) depend on lambda only;
// a march evaluates the same one or two lambdas millions of times.
struct TailCoefficients {
    double lambda = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 31> rg;
};

const std::array<double, 31>& tail_coefficients(double lambda) {
    thread_local std::array<TailCoefficients, 4> cache;
    thread_local int next = 0;
    for (const auto& entry : cache)
        if (entry.lambda == lambda) return entry.rg;
    TailCoefficients& slot = cache[next];
    next = (next + 1) % static_cast<int>(cache.size());
    slot.lambda = lambda;
    for (int k = 1; k <= 30; ++k) slot.rg[k] = reciprocal_gamma(1.0 + lambda - k);
    return slot.rg;
}

}  // namespace

PhiParts phi_asymptotic(double lambda, std::complex<double> z) {
    // phi = z^-lambda e^z - sum_{k>=1} z^-k / Gamma(1+lambda-k); the series is
    // asymptotic, so stop at the smallest term (or K = 30). For integer
    // lambda every factor past k = lambda vanishes and the sum is exact.
    const std::array<double, 31>& rg = tail_coefficients(lambda);
    const std::complex<double> w = 1.0 / z;
    std::complex<double> pw = 1.0;
    std::complex<double> s = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    double trunc = 0.0;
    for (int k = 1; k <= 30; ++k) {
        pw *= w;
        std::complex<double> term = pw * rg[k];
        double mag = std::abs(term);
        if (mag > prev_mag) {  // past the smallest term
            trunc = mag;
            break;
        }
        s += term;
        if (mag != 0.0) {
            prev_mag = mag;
            trunc = mag * std::abs(w) * (k + 1 - lambda > 0 ? k + 1 - lambda : 1.0);
        } else {
            trunc = 0.0;  // terminated exactly (integer lambda)
            break;
        }
    }
    PhiParts parts;
    parts.exp_coeff = std::exp(-lambda * std::log(z));
    parts.algebraic = -s;
    parts.method = EvalMethod::asymptotic_plus_exponential;
    double scale = std::max(std::abs(s), std::abs(parts.exp_coeff) *
                                             std::exp(std::min(z.real(), 0.0)));
    parts.est_rel_error = scale > 0.0 ? trunc / scale + 1e-15 : 1e-15;
    return parts;
}

}  // namespace detail

PhiParts phi_frac_parts(PhiOrder order, std::complex<double> z) {
    require_finite(z);
    if (std::abs(z) <= kBranchCrossover) {
        PhiParts parts;
        parts.exp_coeff = 0.0;
        parts.algebraic = detail::phi_series(order.lambda, z, &parts.est_rel_error);
        parts.method = EvalMethod::taylor_series;
        return parts;
    }
    return detail::phi_asymptotic(order.lambda, z);
}

EvalReport phi_frac_report(PhiOrder order, std::complex<double> z) {
    PhiParts p = phi_frac_parts(order, z);
    std::complex<double> value = p.algebraic;
    if (p.exp_coeff != std::complex<double>(0.0)) value += p.exp_coeff * std::exp(z);
    return {value, p.method, p.est_rel_error};
}

std::complex<double> phi_frac(PhiOrder order, std::complex<double> z) {
    EvalReport rep = phi_frac_report(order, z);
    if (rep.est_rel_error > kAccuracyThreshold)
        throw AccuracyError("phi_frac: error estimate " + std::to_string(rep.est_rel_error) +
                            " exceeds 1e-10");
    return rep.value;
}

std::complex<double> phi_classical(int ell, std::complex<double> z) {
    if (ell < 0) throw std::domain_error("phi_classical: ell must be >= 0");
    require_finite(z);
    if (ell == 0) return std::exp(z);
    if (std::abs(z) <= kBranchCrossover) return detail::phi_series(ell, z, nullptr);
    // exact closed form z^-l (e^z - sum_{j<l} z^j/j!), arranged as descending
    // powers of 1/z so nothing cancels
    std::complex<double> w = 1.0 / z;
    std::complex<double> pw = 1.0;
    std::complex<double> s = 0.0;
    for (int k = 1; k <= ell; ++k) {
        pw *= w;
        s += pw / std::tgamma(static_cast<double>(1 + ell - k));
    }
    return std::pow(w, static_cast<double>(ell)) * std::exp(z) - s;
}

EvalReport phi_frac_oracle(PhiOrder order, std::complex<double> z, double abs_tol) {
    require_finite(z);
    if (!(abs_tol > 0.0)) throw std::domain_error("phi_frac_oracle: abs_tol must be > 0");
    if (std::abs(z) > 1e4)
        throw std::domain_error("phi_frac_oracle: |z| > 1e4 exceeds the oscillation budget");
    const double lambda = order.lambda;
    const double gl = std::tgamma(lambda);
    // I = int_0^1 e^{(1-theta) z} theta^{lambda-1} dtheta, split as a weighted
    // Gauss-Jacobi panel [0,p] plus adaptive Gauss-Legendre on [p,1].
    auto smooth = [z](double theta) { return std::exp((1.0 - theta) * z); };

    const double rate = std::abs(z) + 1.0;
    const double p0 = std::min(1.0, 12.0 / rate);
    double p = p0;
    std::complex<double> total = 0.0;
    double err = 0.0;

    // [0, p]: int_0^p theta^(lambda-1) g(theta) dtheta = p^lambda * GJ rule
    {
        QuadRule r16 = detail::gauss_jacobi01(16, lambda - 1.0);
        QuadRule r24 = detail::gauss_jacobi01(24, lambda - 1.0);
        auto eval = [&](const QuadRule& r) {
            std::complex<double> acc = 0.0;
            for (size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * smooth(p * r.nodes[i]);
            return std::pow(p, lambda) * acc;
        };
        for (int round = 0;; ++round) {
            std::complex<double> q16 = eval(r16), q24 = eval(r24);
            double panel_err = std::abs(q24 - q16);
            double accept = std::max(0.25 * abs_tol * gl, 5e-15 * std::abs(q24));
            if (panel_err <= accept || round >= 40) {
                total += q24;
                err += panel_err;
                break;
            }
            // shrink the singular panel; the stripped-off part is smooth
            double p_new = 0.5 * p;
            auto strip = detail::adaptive_integral(
                [&](double th) { return std::pow(th, lambda - 1.0) * smooth(th); },
                {p_new, p}, 0.05 * abs_tol * gl);
            total += strip.value;
            err += strip.est_abs_error;
            p = p_new;
        }
    }

    if (p0 < 1.0) {
        auto f = [&](double th) { return std::pow(th, lambda - 1.0) * smooth(th); };
        std::vector<double> seeds = detail::seed_max_width({p0, 1.0}, 12.0 / rate);
        auto res = detail::adaptive_integral(f, seeds, 0.5 * abs_tol * gl);
        total += res.value;
        err += res.est_abs_error;
    }

    std::complex<double> value = total / gl;
    double mag = std::abs(value);
    EvalReport rep;
    rep.value = value;
    rep.method_used = EvalMethod::integral_oracle;
    rep.est_rel_error = mag > 0.0 ? err / gl / mag : std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace eqrf
