#include "eqrf/operators.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace eqrf {

namespace {

// FFTW plan pair working on internal buffers; inputs are copied in and out,
// which is negligible next to the transform itself at the sizes used here.
class FourierBackend {
  public:
    explicit FourierBackend(int n) : n_(n) {
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        fwd_ = fftw_plan_dft_1d(n, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FourierBackend() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
    }
    FourierBackend(const FourierBackend&) = delete;
    FourierBackend& operator=(const FourierBackend&) = delete;

    // coefficients normalized as Fourier-series coefficients (forward / n)
    Eigen::VectorXcd forward(const Eigen::VectorXcd& v) const {
        std::lock_guard<std::mutex> lock(mutex_);
        copy_in(v);
        fftw_execute(fwd_);
        Eigen::VectorXcd w = copy_out();
        w /= static_cast<double>(n_);
        return w;
    }
    Eigen::VectorXcd backward(const Eigen::VectorXcd& w) const {
        std::lock_guard<std::mutex> lock(mutex_);
        copy_in(w);
        fftw_execute(bwd_);
        return copy_out();
    }

  private:
    void copy_in(const Eigen::VectorXcd& v) const {
        for (int j = 0; j < n_; ++j) {
            in_[j][0] = v[j].real();
            in_[j][1] = v[j].imag();
        }
    }
    Eigen::VectorXcd copy_out() const {
        Eigen::VectorXcd w(n_);
        for (int j = 0; j < n_; ++j) w[j] = {out_[j][0], out_[j][1]};
        return w;
    }
    int n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan fwd_, bwd_;
    mutable std::mutex mutex_;
};

}  // namespace

struct DiagonalizableOperator::Impl {
    Kind kind = Kind::symmetric_eig;
    Eigen::VectorXcd eigenvalues;
    Eigen::VectorXd grid;

    // fourier_diagonal backend
    std::unique_ptr<FourierBackend> fft;

    // symmetric_eig backend: to_modal = V^T D^-1 v, from_modal = D V w
    Eigen::MatrixXd V;
    Eigen::VectorXd dscale;      // D
    Eigen::VectorXd dscale_inv;  // D^-1

    bool identity = false;  // diagonal(): transforms are the identity
};

DiagonalizableOperator::DiagonalizableOperator(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

Eigen::Index DiagonalizableOperator::dim() const { return impl_->eigenvalues.size(); }
DiagonalizableOperator::Kind DiagonalizableOperator::kind() const { return impl_->kind; }
const Eigen::VectorXcd& DiagonalizableOperator::eigenvalues() const { return impl_->eigenvalues; }
const Eigen::VectorXd& DiagonalizableOperator::grid() const { return impl_->grid; }

Eigen::VectorXcd DiagonalizableOperator::sample(
    const std::function<std::complex<double>(double)>& f) const {
    Eigen::VectorXcd v(impl_->grid.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f(impl_->grid[i]);
    return v;
}

Eigen::VectorXcd DiagonalizableOperator::to_modal(const Eigen::VectorXcd& v) const {
    if (v.size() != dim()) throw std::invalid_argument("to_modal: dimension mismatch");
    const Impl& s = *impl_;
    if (s.identity) return v;
    if (s.kind == Kind::fourier_diagonal) return s.fft->forward(v);
    Eigen::VectorXcd scaled = s.dscale_inv.cast<std::complex<double>>().asDiagonal() * v;
    Eigen::VectorXcd w(dim());
    w.real() = s.V.transpose() * scaled.real();
    w.imag() = s.V.transpose() * scaled.imag();
    return w;
}

Eigen::VectorXcd DiagonalizableOperator::from_modal(const Eigen::VectorXcd& w) const {
    if (w.size() != dim()) throw std::invalid_argument("from_modal: dimension mismatch");
    const Impl& s = *impl_;
    if (s.identity) return w;
    if (s.kind == Kind::fourier_diagonal) return s.fft->backward(w);
    Eigen::VectorXcd v(dim());
    v.real() = s.V * w.real();
    v.imag() = s.V * w.imag();
    return s.dscale.cast<std::complex<double>>().asDiagonal() * v;
}

Eigen::VectorXcd DiagonalizableOperator::apply(const Eigen::VectorXcd& v) const {
    return from_modal(impl_->eigenvalues.cwiseProduct(to_modal(v)));
}

DiagonalizableOperator DiagonalizableOperator::periodic_spectral_second_derivative(
    int n_modes, std::complex<double> zeta) {
    if (n_modes < 2 || n_modes % 2 != 0)
        throw std::invalid_argument("periodic operator: n_modes must be even and >= 2");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::fourier_diagonal;
    impl->fft = std::make_unique<FourierBackend>(n_modes);
    impl->eigenvalues.resize(n_modes);
    for (int m = 0; m < n_modes; ++m) {
        int k = m < n_modes / 2 ? m : m - n_modes;  // FFT bin -> wavenumber
        double om = 2.0 * M_PI * k;
        impl->eigenvalues[m] = -zeta * (om * om);
    }
    impl->grid.resize(n_modes);
    for (int j = 0; j < n_modes; ++j) impl->grid[j] = static_cast<double>(j) / n_modes;
    return DiagonalizableOperator(std::move(impl));
}

DiagonalizableOperator DiagonalizableOperator::dirichlet_fd_variable_coefficient(
    int n_inner, const std::function<double(double)>& a) {
    if (n_inner < 1) throw std::invalid_argument("dirichlet operator: n_inner must be >= 1");
    const int n = n_inner;
    const double dx = 1.0 / (n + 1);
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::symmetric_eig;
    impl->grid.resize(n);
    Eigen::VectorXd coeff(n);
    for (int i = 0; i < n; ++i) {
        double x = (i + 1) * dx;
        impl->grid[i] = x;
        coeff[i] = a(x);
        if (!(coeff[i] > 0.0))
            throw std::invalid_argument("dirichlet operator: coefficient must be positive");
    }
    // A = diag(a_i/dx^2) L with L = tridiag(1,-2,1); D = diag(sqrt(a_i)) makes
    // S = D^-1 A D symmetric: S_ii = -2 a_i/dx^2, S_{i,i+1} = sqrt(a_i a_{i+1})/dx^2
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
    const double idx2 = 1.0 / (dx * dx);
    for (int i = 0; i < n; ++i) diag[i] = -2.0 * coeff[i] * idx2;
    for (int i = 0; i + 1 < n; ++i) sub[i] = std::sqrt(coeff[i] * coeff[i + 1]) * idx2;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 0)));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dirichlet operator: eigensolver failed");

    impl->eigenvalues = es.eigenvalues().cast<std::complex<double>>();
    impl->V = es.eigenvectors();
    impl->dscale = coeff.cwiseSqrt();
    impl->dscale_inv = impl->dscale.cwiseInverse();
    return DiagonalizableOperator(std::move(impl));
}

DiagonalizableOperator DiagonalizableOperator::diagonal(Eigen::VectorXcd eigenvalues) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::symmetric_eig;
    impl->identity = true;
    impl->eigenvalues = std::move(eigenvalues);
    impl->grid = Eigen::VectorXd::Zero(impl->eigenvalues.size());
    return DiagonalizableOperator(std::move(impl));
}

State apply_phi(const DiagonalizableOperator& op, PhiOrder order, double t, const State& v) {
    if (t < 0.0) throw std::domain_error("apply_phi: t must be >= 0");
    Eigen::VectorXcd w = op.to_modal(v.values);
    for (Eigen::Index m = 0; m < w.size(); ++m)
        w[m] *= phi_frac(order, t * op.eigenvalues()[m]);
    return {op.from_modal(w), v.time};
}

State apply_expm(const DiagonalizableOperator& op, double t, const State& v) {
    if (t < 0.0) throw std::domain_error("apply_expm: t must be >= 0");
    Eigen::VectorXcd w = op.to_modal(v.values);
    for (Eigen::Index m = 0; m < w.size(); ++m)
        w[m] *= std::exp(t * op.eigenvalues()[m]);
    return {op.from_modal(w), v.time};
}

}  // namespace eqrf
