#include "pulsewave/discretization.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace {

using Triplet = Eigen::Triplet<double>;

// a_kk sampled at x + h/2 e_axis for every phase of the periodicity cell.
std::vector<double> half_node_coefficients(const Grid& cell, const Medium& medium, int axis, double t) {
    const double h = cell.axis(axis).spacing();
    std::vector<double> a(cell.size());
    for (std::size_t node = 0; node < cell.size(); ++node) {
        Point x = cell.coordinate(node);
        x[static_cast<std::size_t>(axis)] += 0.5 * h;
        a[node] = medium.diffusion(axis, x, t);
    }
    return a;
}

std::vector<double> node_coefficients(const Grid& cell, const Medium& medium, int axis, double t) {
    std::vector<double> a(cell.size());
    for (std::size_t node = 0; node < cell.size(); ++node)
        a[node] = medium.diffusion(axis, cell.coordinate(node), t);
    return a;
}

void require_medium_matches(const Grid& grid, const Medium& medium) {
    if (grid.dimension() != medium.dimension())
        fail(ErrorKind::incompatible_grid, "grid and medium dimensions differ");
    for (int k = 0; k < grid.dimension(); ++k) {
        if (std::abs(grid.axis(k).period - medium.period(k)) > 1e-12 * medium.period(k)) {
            std::ostringstream msg;
            msg << "grid spacing on axis " << k << " does not divide the medium period";
            fail(ErrorKind::incompatible_grid, msg.str());
        }
    }
}

// Is node (i0, i1) held by a boundary rule (and therefore has no dynamics)?
bool constrained(const Grid& grid, long i0) {
    const Axis& a = grid.axis(0);
    if (a.periodic || a.rule == BoundaryRule::zero_flux) return false;
    return i0 == 0 || i0 == a.count - 1;
}

struct Neighbours {
    long lo;
    long hi;
    bool has_lo;
    bool has_hi;
};

Neighbours neighbours(const Axis& a, long i) {
    if (a.periodic) {
        return {(i - 1 + a.count) % a.count, (i + 1) % a.count, true, true};
    }
    return {i - 1, i + 1, i > 0, i < a.count - 1};
}

}  // namespace

DiscreteOperator::DiscreteOperator(Matrix matrix, Grid grid, OperatorInfo info)
    : matrix_(std::move(matrix)), grid_(std::move(grid)), info_(std::move(info)) {
    matrix_.makeCompressed();
}

std::vector<double> DiscreteOperator::apply(std::span<const double> v) const {
    if (v.size() != rows()) fail(ErrorKind::invalid_argument, "vector length does not match operator");
    std::vector<double> out(rows(), 0.0);
    for (int r = 0; r < matrix_.outerSize(); ++r) {
        double s = 0.0;
        for (Matrix::InnerIterator it(matrix_, r); it; ++it) s += it.value() * v[static_cast<std::size_t>(it.col())];
        out[static_cast<std::size_t>(r)] = s;
    }
    return out;
}

DiscreteOperator DiscreteOperator::plus_diagonal(std::span<const double> d) const {
    if (d.size() != rows()) fail(ErrorKind::invalid_argument, "diagonal length does not match operator");
    Matrix diag(matrix_.rows(), matrix_.cols());
    std::vector<Triplet> trips;
    trips.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), d[i]);
    diag.setFromTriplets(trips.begin(), trips.end());
    return DiscreteOperator(Matrix(matrix_ + diag), grid_, info_);
}

DiscreteOperator DiscreteOperator::shifted(double s) const {
    return plus_diagonal(std::vector<double>(rows(), s));
}

DiscreteOperator DiscreteOperator::negated() const {
    return DiscreteOperator(Matrix(-matrix_), grid_, info_);
}

DiscreteOperator assemble_divergence_axis(const Grid& grid, const Medium& medium, int axis,
                                          std::optional<double> t) {
    require_medium_matches(grid, medium);
    if (axis < 0 || axis >= grid.dimension()) fail(ErrorKind::invalid_argument, "axis out of range");
    const double time = t.value_or(0.0);
    const Grid cell = grid.cell();
    const std::vector<double> a_half = half_node_coefficients(cell, medium, axis, time);
    const Axis& ax = grid.axis(axis);
    const double inv_h2 = 1.0 / (ax.spacing() * ax.spacing());

    const long n0 = grid.count(0);
    const long n1 = grid.dimension() == 2 ? grid.count(1) : 1;
    std::vector<Triplet> trips;
    trips.reserve(grid.size() * 3);

    // Phase index of the half node below node (i0, i1) along `axis`.
    auto lower_half = [&](long i0, long i1) {
        long p0 = grid.axis(0).phase(i0);
        long p1 = grid.dimension() == 2 ? grid.axis(1).phase(i1) : 0;
        if (axis == 0) p0 = (p0 - 1 + grid.axis(0).cells) % grid.axis(0).cells;
        else p1 = (p1 - 1 + grid.axis(1).cells) % grid.axis(1).cells;
        return static_cast<std::size_t>(p0 + static_cast<long>(grid.axis(0).cells) * p1);
    };

    for (long i1 = 0; i1 < n1; ++i1) {
        for (long i0 = 0; i0 < n0; ++i0) {
            const auto row = static_cast<int>(grid.index(i0, i1));
            if (constrained(grid, i0)) continue;
            const long i = axis == 0 ? i0 : i1;
            const Neighbours nb = neighbours(ax, i);
            const double a_lo = a_half[lower_half(i0, i1)];
            const double a_hi = a_half[grid.phase_index(static_cast<std::size_t>(row))];
            double diag = 0.0;
            if (nb.has_lo) {
                const auto col = static_cast<int>(axis == 0 ? grid.index(nb.lo, i1) : grid.index(i0, nb.lo));
                trips.emplace_back(row, col, a_lo * inv_h2);
                diag -= a_lo * inv_h2;
            }
            if (nb.has_hi) {
                const auto col = static_cast<int>(axis == 0 ? grid.index(nb.hi, i1) : grid.index(i0, nb.hi));
                trips.emplace_back(row, col, a_hi * inv_h2);
                diag -= a_hi * inv_h2;
            }
            trips.emplace_back(row, row, diag);
        }
    }
    DiscreteOperator::Matrix m(static_cast<int>(grid.size()), static_cast<int>(grid.size()));
    m.setFromTriplets(trips.begin(), trips.end());
    return DiscreteOperator(std::move(m), grid, OperatorInfo{"divergence", 0.0, 0.0, t});
}

DiscreteOperator assemble_divergence(const Grid& grid, const Medium& medium, std::optional<double> t) {
    DiscreteOperator op = assemble_divergence_axis(grid, medium, 0, t);
    if (grid.dimension() == 1) return op;
    DiscreteOperator op1 = assemble_divergence_axis(grid, medium, 1, t);
    return DiscreteOperator(DiscreteOperator::Matrix(op.matrix() + op1.matrix()), grid, op.info());
}

DiscreteOperator assemble_twisted(const Grid& grid, const Medium& medium, double lambda, double c,
                                  std::optional<double> t) {
    if (!grid.is_periodic()) fail(ErrorKind::incompatible_grid, "the twisted operator lives on a periodic grid");
    if (lambda < 0.0) fail(ErrorKind::invalid_argument, "decay rate must be non-negative");
    require_medium_matches(grid, medium);
    const double time = t.value_or(0.0);
    const Axis& ax = grid.axis(0);
    const double h = ax.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const std::vector<double> a_half = half_node_coefficients(grid, medium, 0, time);
    const std::vector<double> a_node = node_coefficients(grid, medium, 0, time);

    std::vector<Triplet> trips;
    trips.reserve(grid.size() * 5);
    const long n0 = grid.count(0);
    const long n1 = grid.dimension() == 2 ? grid.count(1) : 1;
    for (long i1 = 0; i1 < n1; ++i1) {
        for (long i0 = 0; i0 < n0; ++i0) {
            const std::size_t node = grid.index(i0, i1);
            const auto row = static_cast<int>(node);
            const long lo = (i0 - 1 + n0) % n0;
            const long hi = (i0 + 1) % n0;
            const double a_lo = a_half[grid.index(lo, i1)];
            const double a_hi = a_half[node];
            const double a = a_node[node];
            const double left = a_lo * inv_h2 - lambda * a / h;
            const double right = a_hi * inv_h2 + lambda * a / h;
            if (left < 0.0) {
                std::ostringstream msg;
                msg << "centered advection loses monotonicity: lambda * h = " << lambda * h
                    << " exceeds a_{i-1/2}/a_i; refine the grid";
                fail(ErrorKind::peclet_violation, msg.str());
            }
            const Point x = grid.coordinate(node);
            const double f_u0 = medium.f_u(x, 0.0, time);
            const double potential = lambda * (a_hi - a_lo) / h + lambda * lambda * a + f_u0;
            const double base = (a_lo + a_hi) * inv_h2 - potential;
            trips.emplace_back(row, static_cast<int>(grid.index(lo, i1)), -left);
            trips.emplace_back(row, static_cast<int>(grid.index(hi, i1)), -right);
            trips.emplace_back(row, row, base + lambda * c);
        }
    }
    DiscreteOperator::Matrix m(static_cast<int>(grid.size()), static_cast<int>(grid.size()));
    m.setFromTriplets(trips.begin(), trips.end());
    if (grid.dimension() == 2) {
        const DiscreteOperator transverse = assemble_divergence_axis(grid, medium, 1, t);
        m = DiscreteOperator::Matrix(m - transverse.matrix());
    }
    return DiscreteOperator(std::move(m), grid, OperatorInfo{"twisted", lambda, c, t});
}

Eigen::MatrixXd export_dense(const DiscreteOperator& op, std::size_t cap) {
    if (op.rows() > cap) {
        std::ostringstream msg;
        msg << "operator has " << op.rows() << " rows, above the dense cap " << cap;
        fail(ErrorKind::too_large, msg.str());
    }
    return Eigen::MatrixXd(op.matrix());
}

void write_triplets(std::ostream& out, const DiscreteOperator& op) {
    out << "row,col,value\n";
    char buf[64];
    const auto& m = op.matrix();
    for (int r = 0; r < m.outerSize(); ++r) {
        for (DiscreteOperator::Matrix::InnerIterator it(m, r); it; ++it) {
            std::snprintf(buf, sizeof buf, "%.17g", it.value());
            out << r << ',' << it.col() << ',' << buf << '\n';
        }
    }
}

}  // namespace pulsewave
