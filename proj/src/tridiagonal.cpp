#include "pulsewave/tridiagonal.hpp"

#include <cmath>

#include "pulsewave/errors.hpp"

namespace pulsewave {

Tridiagonal::Tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper, bool cyclic)
    : lower_(std::move(lower)), upper_(std::move(upper)), diag_(std::move(diag)), cyclic_(cyclic) {
    const std::size_t n = diag_.size();
    if (lower_.size() != n || upper_.size() != n) fail(ErrorKind::invalid_argument, "tridiagonal bands differ in length");
    if (n < (cyclic ? 3u : 1u)) fail(ErrorKind::invalid_argument, "tridiagonal system too small");

    std::vector<double> b = diag_;
    double corner_upper = 0.0;
    if (cyclic_) {
        // A = T + u vᵀ with u = (γ, 0, …, 0, c_{n-1}), v = (1, 0, …, 0, a_0/γ).
        corner_lower_ = lower_[0];
        corner_upper = upper_[n - 1];
        gamma_ = -b[0];
        b[0] -= gamma_;
        b[n - 1] -= corner_lower_ * corner_upper / gamma_;
    }
    inv_pivot_.resize(n);
    c_prime_.resize(n);
    double pivot = b[0];
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) pivot = b[k] - lower_[k] * c_prime_[k - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) fail(ErrorKind::solver_failure, "zero pivot in tridiagonal solve");
        inv_pivot_[k] = 1.0 / pivot;
        c_prime_[k] = k + 1 < n ? upper_[k] * inv_pivot_[k] : 0.0;
    }
    if (cyclic_) {
        z_.assign(n, 0.0);
        z_[0] = gamma_;
        z_[n - 1] = corner_upper;
        thomas(z_);
        z_denominator_ = 1.0 + z_[0] + corner_lower_ * z_[n - 1] / gamma_;
        if (z_denominator_ == 0.0) fail(ErrorKind::solver_failure, "singular cyclic tridiagonal system");
    }
}

void Tridiagonal::thomas(std::span<double> x) const {
    const std::size_t n = diag_.size();
    x[0] *= inv_pivot_[0];
    for (std::size_t k = 1; k < n; ++k) x[k] = (x[k] - lower_[k] * x[k - 1]) * inv_pivot_[k];
    for (std::size_t k = n - 1; k-- > 0;) x[k] -= c_prime_[k] * x[k + 1];
}

void Tridiagonal::solve(std::span<double> rhs) const {
    if (rhs.size() != diag_.size()) fail(ErrorKind::invalid_argument, "right-hand side length mismatch");
    thomas(rhs);
    if (!cyclic_) return;
    const std::size_t n = rhs.size();
    const double factor = (rhs[0] + corner_lower_ * rhs[n - 1] / gamma_) / z_denominator_;
    for (std::size_t k = 0; k < n; ++k) rhs[k] -= factor * z_[k];
}

}  // namespace pulsewave
