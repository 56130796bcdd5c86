#include "eqrf/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "eqrf/detail/adaptive.hpp"

namespace eqrf {

namespace detail {

// Recurrence coefficients of the monic orthogonal polynomials for the weight
// (1-x)^alpha (1+x)^beta on [-1,1], assembled into the symmetric tridiagonal
// Jacobi matrix; nodes are its eigenvalues and weights mu0 * q0^2
// (Golub-Welsch).
QuadRule gauss_jacobi_general(int n, double alpha, double beta) {
    if (n < 1 || n > 64) throw std::out_of_range("gauss rule: n must be in [1,64]");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::out_of_range("gauss rule: weight exponents must be > -1");

    Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
    const double ab = alpha + beta;
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        double t = 2.0 * k + ab;
        diag[k] = (beta * beta - alpha * alpha) / (t * (t + 2.0));
        double bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                    (t * t * (t + 1.0) * (t - 1.0));
        sub[k - 1] = std::sqrt(bk);
    }
    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                       std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);

    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss rule: tridiagonal eigensolver failed");
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()[i];
        double q0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * q0 * q0;
    }
    return rule;
}

QuadRule gauss_jacobi01(int n, double beta) {
    QuadRule r = gauss_jacobi_general(n, 0.0, beta);
    const double scale = std::pow(2.0, -(beta + 1.0));
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
        r.weights[i] *= scale;
    }
    r.weight_exponent = beta;
    return r;
}

namespace {

const QuadRule& cached_gl(int n) {
    static std::map<int, QuadRule> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_jacobi01(n, 0.0)).first;
    return it->second;
}

std::complex<double> panel_gl(const ComplexFn& f, double a, double b, const QuadRule& r) {
    std::complex<double> acc = 0.0;
    double w = b - a;
    for (size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * f(a + w * r.nodes[i]);
    return w * acc;
}

}  // namespace

AdaptiveResult adaptive_integral(const ComplexFn& f, std::vector<double> breakpoints,
                                 double abs_tol, double noise_rate, int max_depth) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    if (breakpoints.size() < 2) throw std::invalid_argument("adaptive_integral: empty interval");
    const double total_width = breakpoints.back() - breakpoints.front();
    const QuadRule& r16 = cached_gl(16);
    const QuadRule& r24 = cached_gl(24);

    struct Panel {
        double a, b;
        int depth;
    };
    std::vector<Panel> stack;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        stack.push_back({breakpoints[i], breakpoints[i + 1], 0});

    AdaptiveResult res;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        std::complex<double> q16 = panel_gl(f, p.a, p.b, r16);
        std::complex<double> q24 = panel_gl(f, p.a, p.b, r24);
        res.evaluations += 40;
        double est = std::abs(q24 - q16);
        double budget = abs_tol * std::max((p.b - p.a) / total_width, 1e-6);
        // rounding floors: a panel cannot be resolved below ~eps of its own
        // value, nor below the sample noise of the integrand itself
        budget = std::max({budget, 5e-15 * std::abs(q24), noise_rate * (p.b - p.a)});
        if (est <= budget || p.depth >= max_depth || (p.b - p.a) < 1e-300) {
            res.value += q24;
            res.est_abs_error += est;
        } else {
            double mid = 0.5 * (p.a + p.b);
            stack.push_back({p.a, mid, p.depth + 1});
            stack.push_back({mid, p.b, p.depth + 1});
        }
    }
    return res;
}

std::vector<double> seed_geometric(double a, double b, bool toward_a, bool toward_b, int levels) {
    std::vector<double> pts = {a, b};
    double w = b - a;
    for (int j = 1; j <= levels; ++j) {
        double frac = std::ldexp(0.5, -j + 1);  // 2^-j
        if (toward_a) pts.push_back(a + w * frac);
        if (toward_b) pts.push_back(b - w * 0.5 * frac);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<double> seed_max_width(std::vector<double> breakpoints, double max_width) {
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> out;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double a = breakpoints[i], b = breakpoints[i + 1];
        out.push_back(a);
        double w = b - a;
        if (w > max_width) {
            int parts = std::min<long>(static_cast<long>(std::ceil(w / max_width)), 2'000'000L);
            for (int k = 1; k < parts; ++k) out.push_back(a + w * k / parts);
        }
    }
    out.push_back(breakpoints.back());
    return out;
}

}  // namespace detail

QuadRule gauss_legendre(int n) { return detail::gauss_jacobi01(n, 0.0); }

QuadRule gauss_jacobi(int n, double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::out_of_range("gauss_jacobi: r must be in (0,1)");
    return detail::gauss_jacobi01(n, r);
}

const char* to_string(NodeFamily f) {
    switch (f) {
        case NodeFamily::single: return "single";
        case NodeFamily::trapezoid: return "trapezoid";
        case NodeFamily::gauss: return "gauss";
        case NodeFamily::gauss_radau: return "gauss_radau";
        case NodeFamily::gauss_lobatto: return "gauss_lobatto";
        case NodeFamily::custom: return "custom";
    }
    return "?";
}

double node_relation_residual(const std::vector<double>& c) {
    const int nu = static_cast<int>(c.size());
    if (nu == 0) throw std::invalid_argument("node_relation_residual: empty node set");
    for (int i = 0; i < nu; ++i)
        for (int j = i + 1; j < nu; ++j)
            if (c[i] == c[j]) throw std::invalid_argument("node_relation_residual: confluent nodes");
    // elementary symmetric polynomials e_0..e_nu
    std::vector<double> e(nu + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < nu; ++i)
        for (int j = i + 1; j >= 1; --j) e[j] += c[i] * e[j - 1];
    double res = 0.0;
    double sign = 1.0;
    for (int j = 0; j <= nu; ++j) {
        res += sign * e[j] / (nu + 1 - j);
        sign = -sign;
    }
    return res;
}

NodeSet NodeSet::single(double c1) {
    if (!(c1 >= 0.0 && c1 <= 1.0)) throw std::out_of_range("NodeSet::single: c1 must be in [0,1]");
    NodeSet s;
    s.c = {c1};
    s.family = NodeFamily::single;
    s.relation_residual = node_relation_residual(s.c);
    return s;
}

NodeSet NodeSet::custom(std::vector<double> c) {
    NodeSet s;
    s.c = std::move(c);
    s.family = NodeFamily::custom;
    s.relation_residual = node_relation_residual(s.c);  // also rejects confluent sets
    return s;
}

NodeSet node_set(NodeFamily family, int nu) {
    NodeSet s;
    s.family = family;
    switch (family) {
        case NodeFamily::single:
            throw std::invalid_argument("node_set: use NodeSet::single(c1)");
        case NodeFamily::custom:
            throw std::invalid_argument("node_set: use NodeSet::custom(points)");
        case NodeFamily::trapezoid:
            if (nu != 2) throw std::invalid_argument("node_set: trapezoid requires nu = 2");
            s.c = {0.0, 1.0};
            break;
        case NodeFamily::gauss: {
            if (nu < 1) throw std::invalid_argument("node_set: gauss requires nu >= 1");
            s.c = gauss_legendre(nu).nodes;
            break;
        }
        case NodeFamily::gauss_radau: {
            // left endpoint fixed at 0; interior nodes are the Gauss points of
            // the weight s
            if (nu < 2) throw std::invalid_argument("node_set: gauss_radau requires nu >= 2");
            s.c = {0.0};
            QuadRule inner = detail::gauss_jacobi01(nu - 1, 1.0);
            s.c.insert(s.c.end(), inner.nodes.begin(), inner.nodes.end());
            break;
        }
        case NodeFamily::gauss_lobatto: {
            // both endpoints fixed; interior nodes from the (1,1) Jacobi weight
            if (nu < 3) throw std::invalid_argument("node_set: gauss_lobatto requires nu >= 3");
            s.c = {0.0};
            QuadRule inner = detail::gauss_jacobi_general(nu - 2, 1.0, 1.0);
            for (double x : inner.nodes) s.c.push_back(0.5 * (x + 1.0));
            s.c.push_back(1.0);
            break;
        }
    }
    std::sort(s.c.begin(), s.c.end());
    s.relation_residual = node_relation_residual(s.c);
    return s;
}

}  // namespace eqrf
