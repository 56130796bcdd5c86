#pragma once

#include <string>
#include <vector>

// Gauss-Legendre and Gauss-Jacobi rules on [0,1], the named collocation node
// families, and the node relation
//
//   1/(nu+1) - sum c_i / nu + sum_{i<j} c_i c_j/(nu-1) - ... + (-1)^nu c_1...c_nu
//     = int_0^1 (s - c_1)...(s - c_nu) ds,
//
// whose vanishing separates the order-(1+nu r) node sets from the generic
// order-min(1+nu r, nu) ones.

namespace eqrf {

struct QuadRule {
    std::vector<double> nodes;    // strictly increasing, inside (0,1)
    std::vector<double> weights;  // positive, sum to 1/(1+weight_exponent)
    double weight_exponent = 0.0; // exponent r of the weight s^r (0 = Legendre)
};

/// n-point Gauss-Legendre rule on [0,1], 1 <= n <= 64.
QuadRule gauss_legendre(int n);

/// n-point Gauss rule for the weight s^r on [0,1], r in (0,1), 1 <= n <= 64.
/// Nodes and weights come from the symmetric tridiagonal (Golub-Welsch)
/// eigenvalue problem built on the Jacobi-weight recurrence coefficients.
QuadRule gauss_jacobi(int n, double r);

enum class NodeFamily { single, trapezoid, gauss, gauss_radau, gauss_lobatto, custom };

const char* to_string(NodeFamily f);

struct NodeSet {
    std::vector<double> c;  // nu distinct points in [0,1]
    NodeFamily family = NodeFamily::custom;
    double relation_residual = 0.0;

    int nu() const { return static_cast<int>(c.size()); }

    static NodeSet single(double c1);
    static NodeSet custom(std::vector<double> c);
};

/// Named collocation families: trapezoid nu=2 -> {0,1}; gauss any nu;
/// gauss_radau (left endpoint 0 fixed) nu >= 2; gauss_lobatto nu >= 3.
NodeSet node_set(NodeFamily family, int nu);

/// Value of the node relation, computed through the elementary symmetric
/// polynomials of c. Zero (to roundoff) for any nu-node rule with degree of
/// exactness at least nu.
double node_relation_residual(const std::vector<double>& c);

namespace detail {
// General Gauss rule for the weight (1-x)^alpha (1+x)^beta on [-1,1],
// alpha, beta > -1. Used by the node families and the quadrature oracles.
QuadRule gauss_jacobi_general(int n, double alpha, double beta);
// Same rule mapped to weight s^beta on [0,1] (alpha = 0).
QuadRule gauss_jacobi01(int n, double beta);
}  // namespace detail

}  // namespace eqrf
