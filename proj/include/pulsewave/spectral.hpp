#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "pulsewave/discretization.hpp"

namespace pulsewave {

struct EigenSettings {
    double tolerance = 1e-10;      // width of the Collatz–Wielandt bracket
    double residual_gate = 1e-9;   // ‖Op v − μ v‖∞ / ‖v‖∞
    std::size_t max_iterations = 100000;
};

struct EigenResult {
    double eigenvalue = 0.0;
    std::vector<double> eigenfunction;  // positive, max 1
    double residual = 0.0;
    std::size_t iterations = 0;
};

/// Principal eigenpair of a stencil operator with a sign-definite off-diagonal
/// part. Off-diagonals >= 0 (e.g. ∇·(A∇) + f_u): the eigenvalue of maximal real
/// part. Off-diagonals <= 0 (e.g. the twisted operator −L_{c,λ}): the eigenvalue
/// of minimal real part. Either way it is the one with a positive eigenvector.
///
/// Inverse iteration with a shift taken from the Collatz–Wielandt bracket
/// min_i (Bv)_i/v_i <= μ <= max_i (Bv)_i/v_i, stopped when the bracket is
/// narrower than the tolerance. Starts from the all-ones vector.
EigenResult principal_eig(const DiscreteOperator& op, const EigenSettings& settings = {});

struct FloquetResult {
    /// Principal eigenvalue of the time-periodic problem for −L_{c,λ}, same sign
    /// convention as principal_eig(assemble_twisted(...)).
    double eigenvalue = 0.0;
    /// (1/T) ln ρ(P) for the period map of v_t = L_{c,λ}(t) v: the growth rate,
    /// i.e. the principal eigenvalue in the convention of ∇·(A∇) + f_u.
    double growth_exponent = 0.0;
    double spectral_radius = 0.0;
    std::vector<double> eigenfunction;  // profile at t = 0, max 1
    std::size_t iterations = 0;
};

/// Perron eigenpair of the period map of v_t = L_{c,λ}(t) v over one time
/// period, with L = −assemble_twisted. Steps are split as
///   v <- exp(Δt m(t*)) ⊙ (I − Δt K(t*))^{-1} v,  t* the step midpoint,
/// where m = L·1 and K = L − diag(m) has zero row sums.
/// Throws InvalidArgument if the medium has no time period or Δt does not
/// divide it, NonPositiveIterate if positivity is lost.
FloquetResult principal_eig_floquet(const Medium& medium, const Grid& grid, double lambda, double c,
                                    double dt, const EigenSettings& settings = {});

/// Eigenfunction as CSV "x,value" (1D) or "x1,x2,value" (2D), 17 significant digits.
void write_eigenfunction_csv(std::ostream& out, const Grid& grid, std::span<const double> values);

}  // namespace pulsewave
