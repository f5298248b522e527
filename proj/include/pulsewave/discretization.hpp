#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pulsewave/grid.hpp"
#include "pulsewave/medium.hpp"

namespace pulsewave {

struct OperatorInfo {
    std::string kind;  // "divergence" or "twisted"
    double lambda = 0.0;
    double speed = 0.0;
    std::optional<double> time;
};

/// Sparse realization of a stencil operator on a Grid. Immutable after
/// assembly; matrix-vector products are safe to run concurrently.
class DiscreteOperator {
public:
    using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    DiscreteOperator(Matrix matrix, Grid grid, OperatorInfo info);

    const Matrix& matrix() const { return matrix_; }
    const Grid& grid() const { return grid_; }
    const OperatorInfo& info() const { return info_; }
    std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }

    std::vector<double> apply(std::span<const double> v) const;

    /// op + diag(d)
    DiscreteOperator plus_diagonal(std::span<const double> d) const;
    /// op + s I
    DiscreteOperator shifted(double s) const;
    DiscreteOperator negated() const;

private:
    Matrix matrix_;
    Grid grid_;
    OperatorInfo info_;
};

/// Flux-form ∂_k(a_kk ∂_k ·) along one axis with a_kk evaluated analytically at
/// the half-nodes. Periodic wrap on periodic axes. On window axes, nodes held
/// by a boundary rule (clamp or decay tail) get zero rows; zero-flux ends keep
/// only the interior flux.
DiscreteOperator assemble_divergence_axis(const Grid& grid, const Medium& medium, int axis,
                                          std::optional<double> t = std::nullopt);

/// ∇·(A∇·): sum of the axis parts.
DiscreteOperator assemble_divergence(const Grid& grid, const Medium& medium,
                                     std::optional<double> t = std::nullopt);

/// Matrix of −L_{c,λ}: the negative of
///   ∇·(A∇ψ) + 2λ a11 ∂1ψ + [λ ∂1 a11 + λ² a11 − λc + f_u(x, 0)] ψ
/// on a periodic grid, with centered first differences. Throws
/// IncompatibleGrid on a window grid and PecletViolation when the centered
/// advection would produce a positive off-diagonal entry (λ h > a_{i±1/2}/a_i).
DiscreteOperator assemble_twisted(const Grid& grid, const Medium& medium, double lambda, double c,
                                  std::optional<double> t = std::nullopt);

/// Dense copy for brute-force oracles. Throws TooLarge above `cap` rows.
Eigen::MatrixXd export_dense(const DiscreteOperator& op, std::size_t cap = 4096);

/// Coordinate triplets "row,col,value" with 17 significant digits, header first.
void write_triplets(std::ostream& out, const DiscreteOperator& op);

}  // namespace pulsewave
