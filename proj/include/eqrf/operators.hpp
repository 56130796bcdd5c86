#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <memory>

#include "eqrf/special_functions.hpp"

// Stiff operators represented through a diagonalizing similarity, so that
// every operator function the integrators need reduces to scalar evaluations
// on the eigenvalues:  f(A) v = from_modal( f(Lambda) .* to_modal(v) ).

namespace eqrf {

struct State {
    Eigen::VectorXcd values;
    double time = 0.0;
};

class DiagonalizableOperator {
  public:
    enum class Kind { fourier_diagonal, symmetric_eig };

    Eigen::Index dim() const;
    Kind kind() const;
    const Eigen::VectorXcd& eigenvalues() const;

    Eigen::VectorXcd to_modal(const Eigen::VectorXcd& v) const;
    Eigen::VectorXcd from_modal(const Eigen::VectorXcd& w) const;

    /// from_modal(Lambda .* to_modal(v))
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

    /// Grid the operator acts on (uniform periodic or inner Dirichlet grid).
    const Eigen::VectorXd& grid() const;

    /// Sample a profile function on the operator's grid.
    Eigen::VectorXcd sample(const std::function<std::complex<double>(double)>& f) const;

    /// zeta * d_xx on (0,1) with periodic boundary conditions, Fourier
    /// pseudospectral with n_modes modes (even); wavenumbers k in
    /// {-n/2, ..., n/2-1}, eigenvalue -zeta (2 pi k)^2, grid x_j = j/n.
    static DiagonalizableOperator periodic_spectral_second_derivative(
        int n_modes, std::complex<double> zeta);

    /// a(x) * d_xx with homogeneous Dirichlet conditions, second-order finite
    /// differences on x_i = i/(n+1), i = 1..n. The similarity is the diagonal
    /// scaling D = diag(sqrt(a(x_i))) under which the operator becomes a
    /// symmetric tridiagonal matrix with real negative spectrum.
    static DiagonalizableOperator dirichlet_fd_variable_coefficient(
        int n_inner, const std::function<double(double)>& a);

    /// Operator already in modal form (identity transforms); used for scalar
    /// and explicitly diagonal problems.
    static DiagonalizableOperator diagonal(Eigen::VectorXcd eigenvalues);

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit DiagonalizableOperator(std::shared_ptr<const Impl> impl);
};

/// from_modal( phi_lambda(t * Lambda) .* to_modal(v) ); for t = 0 this is
/// v / Gamma(1 + lambda).
State apply_phi(const DiagonalizableOperator& op, PhiOrder order, double t, const State& v);

/// e^{tA} v.
State apply_expm(const DiagonalizableOperator& op, double t, const State& v);

}  // namespace eqrf
