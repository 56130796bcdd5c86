#include "eqrf/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "eqrf/detail/adaptive.hpp"

namespace eqrf {

using Complex = std::complex<double>;

std::complex<double> kernel_weight(PhiOrder lambda, double t_n, double tau, Complex z) {
    const double lam = lambda.lambda;
    const double gl = std::tgamma(lam);
    if (t_n < 0.0 || !(tau > 0.0)) throw std::domain_error("kernel_weight: t_n >= 0, tau > 0");
    if (t_n == 0.0) {
        PhiParts p = phi_frac_parts(lambda, tau * z);
        Complex phi = p.algebraic;
        if (p.exp_coeff != Complex(0.0)) phi += p.exp_coeff * std::exp(tau * z);
        return gl * std::pow(tau, lam) * phi;
    }
    const Complex w1 = (t_n + tau) * z;
    const Complex w2 = t_n * z;
    PhiParts p1 = phi_frac_parts(lambda, w1);
    PhiParts p2 = phi_frac_parts(lambda, w2);
    const double a1 = std::pow(t_n + tau, lam);
    const double a2 = std::pow(t_n, lam);
    const Complex etz = std::exp(tau * z);
    if (p1.method == EvalMethod::asymptotic_plus_exponential &&
        p2.method == EvalMethod::asymptotic_plus_exponential) {
        // t^lam (tz)^-lam = z^-lam for t > 0, so the exponential parts cancel
        // identically; only the algebraic tails remain.
        return gl * (a1 * p1.algebraic - etz * a2 * p2.algebraic);
    }
    Complex phi1 = p1.algebraic;
    if (p1.exp_coeff != Complex(0.0)) phi1 += p1.exp_coeff * std::exp(w1);
    Complex phi2 = p2.algebraic;
    if (p2.exp_coeff != Complex(0.0)) phi2 += p2.exp_coeff * std::exp(w2);
    return gl * (a1 * phi1 - etz * a2 * phi2);
}

namespace detail {

std::complex<double> kernel_weight_oracle(double lambda, double t_n, double tau, Complex z,
                                          double abs_tol) {
    auto f = [&](double s) {
        return std::exp((tau - s) * z) * std::pow(t_n + s, lambda - 1.0);
    };
    std::vector<double> seeds = seed_geometric(0.0, tau, t_n == 0.0, std::real(z) < -1.0 / tau);
    double rate = std::abs(z) + 1.0;
    seeds = seed_max_width(std::move(seeds), 10.0 / rate);
    double fmax = std::pow(t_n + tau, lambda - 1.0) * std::exp(std::max(0.0, z.real() * tau));
    double noise_rate = 3e-16 * std::max(std::abs(z) * tau, 1.0) * fmax;
    auto res = adaptive_integral(f, seeds, abs_tol, noise_rate);
    return res.value;
}

std::vector<Complex> interp_scalar_coefficients(
    const NodeSet& nodes, const std::function<Complex(double)>& h, double r, double t_n,
    double tau) {
    const int nu = nodes.nu();
    std::vector<double> w(nu);
    std::vector<Complex> hv(nu);
    double hmax = 0.0;
    for (int i = 0; i < nu; ++i) {
        double t = t_n + nodes.c[i] * tau;
        if (t < 0.0) throw std::domain_error("interp: negative sample time");
        w[i] = std::pow(t, r);
        hv[i] = h(w[i]);
        hmax = std::max(hmax, std::abs(hv[i]));
    }

    std::vector<Complex> a(nu);
    if (nu == 1) {
        a[0] = hv[0];
        return a;
    }
    if (nu == 2) {
        // closed form of the two-point interpolation in the basis {1, u}
        Complex a1 = (hv[1] - hv[0]) / (w[1] - w[0]);
        a[0] = hv[0] - w[0] * a1;
        a[1] = a1;
    } else {
        // generalized Vandermonde system in u_i = (t_n + c_i tau)^r, solved
        // with scaled partial pivoting; one solve shared by all components
        std::vector<std::vector<double>> M(nu, std::vector<double>(nu));
        for (int i = 0; i < nu; ++i) {
            double p = 1.0;
            for (int j = 0; j < nu; ++j) {
                M[i][j] = p;
                p *= w[i];
            }
        }
        std::vector<Complex> rhs = hv;
        std::vector<int> perm(nu);
        std::vector<double> scale(nu);
        for (int i = 0; i < nu; ++i) {
            perm[i] = i;
            scale[i] = 0.0;
            for (int j = 0; j < nu; ++j) scale[i] = std::max(scale[i], std::fabs(M[i][j]));
        }
        for (int k = 0; k < nu - 1; ++k) {
            int piv = k;
            double best = 0.0;
            for (int i = k; i < nu; ++i) {
                double v = std::fabs(M[perm[i]][k]) / scale[perm[i]];
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best == 0.0) throw std::runtime_error("interp: singular collocation system");
            std::swap(perm[k], perm[piv]);
            for (int i = k + 1; i < nu; ++i) {
                double f = M[perm[i]][k] / M[perm[k]][k];
                M[perm[i]][k] = 0.0;
                for (int j = k + 1; j < nu; ++j) M[perm[i]][j] -= f * M[perm[k]][j];
                rhs[perm[i]] -= f * rhs[perm[k]];
            }
        }
        for (int i = nu - 1; i >= 0; --i) {
            Complex acc = rhs[perm[i]];
            for (int j = i + 1; j < nu; ++j) acc -= M[perm[i]][j] * a[j];
            if (M[perm[i]][i] == 0.0) throw std::runtime_error("interp: singular collocation system");
            a[i] = acc / M[perm[i]][i];
        }
    }
    // interpolation residual guard
    for (int i = 0; i < nu; ++i) {
        Complex acc = 0.0;
        double p = 1.0;
        for (int j = 0; j < nu; ++j) {
            acc += a[j] * p;
            p *= w[i];
        }
        if (std::abs(acc - hv[i]) > 1e-12 * std::max(hmax, 1e-300))
            throw std::runtime_error("interp: residual check failed (pathological nodes?)");
    }
    return a;
}

}  // namespace detail

std::vector<Eigen::VectorXcd> interp_coefficients(const NodeSet& nodes,
                                                  const FractionalSource& source, double t_n,
                                                  double tau) {
    auto a = detail::interp_scalar_coefficients(nodes, source.h, source.r, t_n, tau);
    std::vector<Eigen::VectorXcd> out;
    out.reserve(a.size());
    for (const Complex& aj : a) out.push_back(aj * source.profile);
    return out;
}

Method Method::eqrf1(double c1) {
    Method m;
    m.scheme = Scheme::eqrf;
    m.nodes = NodeSet::single(c1);
    return m;
}

Method Method::eqrf(NodeSet nodes, Formulation f, int n_quad) {
    if (f == Formulation::integral_quadrature && nodes.nu() != 2)
        throw std::invalid_argument("Method: the integral formulation is implemented for nu = 2");
    Method m;
    m.scheme = Scheme::eqrf;
    m.nodes = std::move(nodes);
    m.formulation = f;
    m.n_quad = n_quad;
    return m;
}

Method Method::ceqr2(NodeSet nodes) {
    if (nodes.nu() != 2) throw std::invalid_argument("Method: CEQR2 requires two nodes");
    Method m;
    m.scheme = Scheme::ceqr2;
    m.nodes = std::move(nodes);
    return m;
}

std::string Method::formulation_label() const {
    if (scheme == Scheme::ceqr2) return "-";
    return formulation == Formulation::fractional_phi ? "phi" : "integral";
}

std::string Method::label() const {
    std::ostringstream os;
    if (scheme == Scheme::ceqr2)
        os << "CEQR2";
    else
        os << "EQRF" << nodes.nu();
    switch (nodes.family) {
        case NodeFamily::trapezoid: os << " T"; break;
        case NodeFamily::gauss: os << " G"; break;
        case NodeFamily::gauss_radau: os << " GR"; break;
        case NodeFamily::gauss_lobatto: os << " GL"; break;
        case NodeFamily::custom: os << " NC"; break;
        case NodeFamily::single: os << " (c1=" << nodes.c[0] << ")"; break;
    }
    if (scheme == Scheme::eqrf && nodes.nu() == 2 &&
        formulation == Formulation::integral_quadrature)
        os << " (I)";
    return os.str();
}

namespace {

bool debug_kernel_check_enabled() {
    const char* v = std::getenv("EQRF_DEBUG_KERNEL_CHECK");
    return v != nullptr && v[0] == '1';
}

// Everything a step needs in modal coordinates, precomputed once per run;
// the fractional kernel weights are the exception and are rebuilt each step
// because they depend on t_n.
class ModalStepper {
  public:
    ModalStepper(const DiagonalizableOperator& op, const FractionalSource& source,
                 const Method& method, double tau)
        : lambda_(op.eigenvalues()), method_(method), r_(source.r), h_(source.h), tau_(tau) {
        vhat_ = op.to_modal(source.profile);
        const Eigen::Index n = lambda_.size();
        prop_.resize(n);
        phi1_.resize(n);
        for (Eigen::Index m = 0; m < n; ++m) {
            prop_[m] = std::exp(tau * lambda_[m]);
            phi1_[m] = tau * phi_classical(1, tau * lambda_[m]);
        }
        if (method.scheme == Method::Scheme::ceqr2) {
            const double c1 = method.nodes.c[0], c2 = method.nodes.c[1];
            const double den = c2 - c1;
            b1_.resize(n);
            b2_.resize(n);
            for (Eigen::Index m = 0; m < n; ++m) {
                Complex p1 = phi_classical(1, tau * lambda_[m]);
                Complex p2 = phi_classical(2, tau * lambda_[m]);
                b1_[m] = tau * (c2 * p1 - p2) / den;
                b2_[m] = tau * (-c1 * p1 + p2) / den;
            }
        } else if (method.formulation == Formulation::integral_quadrature) {
            gj_ = gauss_jacobi(method.n_quad, r_);
            glr_ = gauss_legendre(method.n_quad);
            // propagator samples e^{(tau - sigma_i) Lambda}, fixed because tau is
            egj_.resize(method.n_quad, n);
            egl_.resize(method.n_quad, n);
            for (int i = 0; i < method.n_quad; ++i)
                for (Eigen::Index m = 0; m < n; ++m) {
                    egj_(i, m) = std::exp((1.0 - gj_.nodes[i]) * tau * lambda_[m]);
                    egl_(i, m) = std::exp((1.0 - glr_.nodes[i]) * tau * lambda_[m]);
                }
        }
        debug_ = debug_kernel_check_enabled();  // latched once per run
        if (debug_) rng_.seed(0x5eed);
    }

    void step(Eigen::VectorXcd& yhat, double t_n) {
        const Eigen::Index n = lambda_.size();
        if (method_.scheme == Method::Scheme::ceqr2) {
            Complex h1 = h_(std::pow(t_n + method_.nodes.c[0] * tau_, r_));
            Complex h2 = h_(std::pow(t_n + method_.nodes.c[1] * tau_, r_));
            for (Eigen::Index m = 0; m < n; ++m)
                yhat[m] = prop_[m] * yhat[m] + (b1_[m] * h1 + b2_[m] * h2) * vhat_[m];
            return;
        }
        auto a = detail::interp_scalar_coefficients(method_.nodes, h_, r_, t_n, tau_);
        const int nu = method_.nodes.nu();
        if (method_.formulation == Formulation::integral_quadrature && nu == 2) {
            // weight_m = int_0^tau e^{(tau-s) lambda_m} (t_n+s)^r ds by the
            // 16-node rule; Gauss-Jacobi absorbs the s^r factor at t_n = 0
            Eigen::VectorXcd weight = Eigen::VectorXcd::Zero(n);
            if (t_n == 0.0) {
                const double f = std::pow(tau_, 1.0 + r_);
                for (int i = 0; i < method_.n_quad; ++i) {
                    Complex ci = f * gj_.weights[i];
                    for (Eigen::Index m = 0; m < n; ++m) weight[m] += ci * egj_(i, m);
                }
            } else {
                for (int i = 0; i < method_.n_quad; ++i) {
                    Complex ci = tau_ * glr_.weights[i] * std::pow(t_n + glr_.nodes[i] * tau_, r_);
                    for (Eigen::Index m = 0; m < n; ++m) weight[m] += ci * egl_(i, m);
                }
            }
            for (Eigen::Index m = 0; m < n; ++m) {
                yhat[m] = prop_[m] * yhat[m] + (phi1_[m] * a[0] + weight[m] * a[1]) * vhat_[m];
                maybe_debug_check_quadrature(t_n, lambda_[m], weight[m]);
            }
            return;
        }
        // fractional-phi formulation (any nu)
        for (Eigen::Index m = 0; m < n; ++m) {
            Complex acc = prop_[m] * yhat[m] + phi1_[m] * a[0] * vhat_[m];
            for (int j = 1; j < nu; ++j) {
                Complex K = kernel_weight(PhiOrder(1.0 + j * r_), t_n, tau_, lambda_[m]);
                acc += K * a[j] * vhat_[m];
                maybe_debug_check(1.0 + j * r_, t_n, lambda_[m], K);
            }
            yhat[m] = acc;
        }
    }

  private:
    void maybe_debug_check(double lam, double t_n, Complex z, Complex K) {
        if (!debug_) return;
        if (uniform_(rng_) > 0.01) return;
        if (std::abs(z) * tau_ > 2e3) return;  // oracle oscillation budget
        Complex ref = detail::kernel_weight_oracle(lam, t_n, tau_, z);
        double scale = std::max(std::abs(ref), 1e-30);
        if (std::abs(K - ref) / scale > 1e-9)
            throw AccuracyError("kernel_weight debug check failed");
    }

    // cross-check the quadrature weight against the fractional-phi kernel,
    // within the range the fixed rule can resolve
    void maybe_debug_check_quadrature(double t_n, Complex z, Complex w) {
        if (!debug_) return;
        if (uniform_(rng_) > 0.01) return;
        if (std::abs(z) * tau_ > 30.0) return;
        Complex ref = kernel_weight(PhiOrder(1.0 + r_), t_n, tau_, z);
        double scale = std::max(std::abs(ref), 1e-30);
        if (std::abs(w - ref) / scale > 1e-9)
            throw AccuracyError("integral-formulation weight diverged from the phi kernel");
    }

    Eigen::VectorXcd lambda_;
    Method method_;
    double r_;
    std::function<Complex(double)> h_;
    double tau_;
    Eigen::VectorXcd vhat_;
    Eigen::VectorXcd prop_, phi1_, b1_, b2_;
    QuadRule gj_, glr_;
    Eigen::MatrixXcd egj_, egl_;
    bool debug_ = false;
    std::mt19937 rng_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

State run_steps(const State& initial, const DiagonalizableOperator& op,
                const FractionalSource& source, double tau, int steps, const Method& method) {
    ModalStepper stepper(op, source, method, tau);
    Eigen::VectorXcd yhat = op.to_modal(initial.values);
    double t0 = initial.time;
    for (int n = 0; n < steps; ++n) {
        stepper.step(yhat, t0 + n * tau);
        if (!yhat.allFinite()) {
            std::ostringstream os;
            os << "march: non-finite state after step " << n + 1 << " (t = " << t0 + (n + 1) * tau
               << ")";
            throw std::runtime_error(os.str());
        }
    }
    return {op.from_modal(yhat), t0 + steps * tau};
}

}  // namespace

State eqrf1_step(const State& state, const DiagonalizableOperator& op,
                 const FractionalSource& source, double c1, double tau) {
    return run_steps(state, op, source, tau, 1, Method::eqrf1(c1));
}

State eqrfnu_step(const State& state, const DiagonalizableOperator& op,
                  const FractionalSource& source, const NodeSet& nodes, double tau) {
    return run_steps(state, op, source, tau, 1, Method::eqrf(nodes));
}

State eqrf2_step_phi(const State& state, const DiagonalizableOperator& op,
                     const FractionalSource& source, const NodeSet& nodes, double tau) {
    if (nodes.nu() != 2) throw std::invalid_argument("eqrf2_step_phi: need two nodes");
    return run_steps(state, op, source, tau, 1, Method::eqrf(nodes));
}

State eqrf2_step_integral(const State& state, const DiagonalizableOperator& op,
                          const FractionalSource& source, const NodeSet& nodes, double tau,
                          int n_quad) {
    if (nodes.nu() != 2) throw std::invalid_argument("eqrf2_step_integral: need two nodes");
    return run_steps(state, op, source, tau, 1,
                     Method::eqrf(nodes, Formulation::integral_quadrature, n_quad));
}

State ceqr2_step(const State& state, const DiagonalizableOperator& op,
                 const FractionalSource& source, const NodeSet& nodes, double tau) {
    return run_steps(state, op, source, tau, 1, Method::ceqr2(nodes));
}

State march(const State& initial, const DiagonalizableOperator& op,
            const FractionalSource& source, const TimeGrid& grid, const Method& method) {
    return run_steps(initial, op, source, grid.tau(), grid.N, method);
}

}  // namespace eqrf
