#pragma once

#include <span>
#include <vector>

namespace pulsewave {

/// Factored tridiagonal system. Row k reads lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1].
/// For a cyclic system lower[0] couples to x[n-1] and upper[n-1] to x[0]
/// (handled by Sherman–Morrison); otherwise those two entries are ignored.
/// No pivoting: intended for diagonally dominant M-matrices.
class Tridiagonal {
public:
    Tridiagonal() = default;
    Tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper, bool cyclic);

    std::size_t size() const { return diag_.size(); }
    /// Overwrites rhs with the solution.
    void solve(std::span<double> rhs) const;

private:
    void thomas(std::span<double> x) const;

    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> diag_;
    std::vector<double> inv_pivot_;
    std::vector<double> c_prime_;
    bool cyclic_ = false;
    double gamma_ = 0.0;
    double corner_lower_ = 0.0;  // entry (0, n-1)
    std::vector<double> z_;      // T^{-1} u for the rank-one correction
    double z_denominator_ = 1.0;
};

}  // namespace pulsewave
