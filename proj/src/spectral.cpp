#include "pulsewave/spectral.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>

#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Vec = Eigen::VectorXd;

// +1 when every off-diagonal entry is >= 0, -1 when every one is <= 0.
int orientation(const DiscreteOperator::Matrix& m) {
    bool has_pos = false;
    bool has_neg = false;
    for (int r = 0; r < m.outerSize(); ++r) {
        for (DiscreteOperator::Matrix::InnerIterator it(m, r); it; ++it) {
            if (it.col() == r) continue;
            if (it.value() > 0.0) has_pos = true;
            if (it.value() < 0.0) has_neg = true;
        }
    }
    if (has_pos && has_neg)
        fail(ErrorKind::peclet_violation,
             "off-diagonal entries of mixed sign; the principal eigenpair is not certified");
    return has_neg ? -1 : 1;
}

struct Bracket {
    double lo;
    double hi;
};

Bracket collatz_wielandt(const Vec& bv, const Vec& v) {
    Bracket b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double q = bv[i] / v[i];
        b.lo = std::min(b.lo, q);
        b.hi = std::max(b.hi, q);
    }
    return b;
}

void require_positive(const Vec& v, const char* where) {
    if (!(v.minCoeff() > 0.0) || !v.allFinite()) {
        std::ostringstream msg;
        msg << where << ": iterate lost positivity (min " << v.minCoeff() << ")";
        fail(ErrorKind::non_positive_iterate, msg.str());
    }
}

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

EigenResult principal_eig(const DiscreteOperator& op, const EigenSettings& settings) {
    if (!op.grid().is_periodic())
        fail(ErrorKind::incompatible_grid, "principal eigenpairs are computed on periodic grids");
    const int s = orientation(op.matrix());
    const ColMatrix b = ColMatrix(op.matrix()) * static_cast<double>(s);
    const auto n = b.rows();
    ColMatrix identity(n, n);
    identity.setIdentity();

    Vec v = Vec::Ones(n);
    Eigen::SparseLU<ColMatrix> lu;
    bool analysed = false;
    double best_width = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;

    for (std::size_t iter = 0; iter < settings.max_iterations; ++iter) {
        const Vec bv = b * v;
        const Bracket br = collatz_wielandt(bv, v);
        const double width = br.hi - br.lo;
        if (width <= settings.tolerance) {
            const double mu = 0.5 * (br.lo + br.hi);
            EigenResult out;
            out.eigenvalue = s * mu;
            out.residual = (bv - mu * v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff();
            out.iterations = iter;
            out.eigenfunction = to_std(v);
            if (out.residual > settings.residual_gate) {
                std::ostringstream msg;
                msg << "eigen residual " << out.residual << " above gate " << settings.residual_gate;
                fail(ErrorKind::no_convergence, msg.str());
            }
            return out;
        }
        // Rounding in B v puts a floor under the bracket; give up if it stops shrinking.
        if (width < 0.5 * best_width) {
            best_width = width;
            stalled = 0;
        } else if (++stalled > 50) {
            std::ostringstream msg;
            msg << "eigen bracket stalled at width " << width << " (tolerance " << settings.tolerance << ")";
            fail(ErrorKind::no_convergence, msg.str());
        }

        const double scale = std::max(1.0, std::abs(br.hi));
        const double gap = std::max(width, 1e-9 * scale);
        const double sigma = br.hi + gap;
        const ColMatrix shifted = sigma * identity - b;
        if (!analysed) {
            lu.analyzePattern(shifted);
            analysed = true;
        }
        lu.factorize(shifted);
        if (lu.info() != Eigen::Success) fail(ErrorKind::solver_failure, "shifted eigen system is singular");
        v = lu.solve(v);
        v /= v.maxCoeff();
        require_positive(v, "principal_eig");
    }
    fail(ErrorKind::no_convergence, "principal_eig hit the iteration cap");
}

FloquetResult principal_eig_floquet(const Medium& medium, const Grid& grid, double lambda, double c,
                                    double dt, const EigenSettings& settings) {
    if (!medium.time_period()) fail(ErrorKind::invalid_argument, "Floquet solve needs a time-periodic medium");
    if (!grid.is_periodic()) fail(ErrorKind::incompatible_grid, "Floquet solve runs on a periodic grid");
    const double period = *medium.time_period();
    if (!(dt > 0.0)) fail(ErrorKind::invalid_argument, "time step must be positive");
    const double steps_real = period / dt;
    const auto steps = static_cast<std::size_t>(std::llround(steps_real));
    if (steps == 0 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
        fail(ErrorKind::invalid_argument, "time step must divide the time period");
    const double h = period / static_cast<double>(steps);

    const auto n = static_cast<Eigen::Index>(grid.size());
    ColMatrix identity(n, n);
    identity.setIdentity();

    struct Stage {
        Vec growth;  // exp(h m)
        std::unique_ptr<Eigen::SparseLU<ColMatrix>> lu;
    };
    auto build_stage = [&](double t_mid) {
        const DiscreteOperator twisted = assemble_twisted(grid, medium, lambda, c, t_mid);
        const ColMatrix l = -ColMatrix(twisted.matrix());
        const Vec m = l * Vec::Ones(n);
        ColMatrix k = l;
        for (Eigen::Index i = 0; i < n; ++i) k.coeffRef(i, i) -= m[i];
        Stage st;
        st.growth = (h * m).array().exp().matrix();
        st.lu = std::make_unique<Eigen::SparseLU<ColMatrix>>();
        st.lu->compute(identity - h * k);
        if (st.lu->info() != Eigen::Success) fail(ErrorKind::solver_failure, "Floquet step system is singular");
        return st;
    };

    // Factorizations are reused across power iterations when they fit in memory.
    const bool constant = !medium.time_dependent();
    const bool cache_all = !constant && grid.size() * steps <= (std::size_t{1} << 22);
    std::vector<Stage> stages;
    if (constant) stages.push_back(build_stage(0.0));
    if (cache_all) {
        stages.reserve(steps);
        for (std::size_t j = 0; j < steps; ++j) stages.push_back(build_stage((static_cast<double>(j) + 0.5) * h));
    }

    auto period_map = [&](Vec v) {
        for (std::size_t j = 0; j < steps; ++j) {
            if (constant || cache_all) {
                const Stage& st = stages[constant ? 0 : j];
                v = st.growth.cwiseProduct(st.lu->solve(v));
            } else {
                const Stage st = build_stage((static_cast<double>(j) + 0.5) * h);
                v = st.growth.cwiseProduct(st.lu->solve(v));
            }
        }
        return v;
    };

    Vec v = Vec::Ones(n);
    for (std::size_t iter = 0; iter < settings.max_iterations; ++iter) {
        const Vec pv = period_map(v);
        require_positive(pv, "principal_eig_floquet");
        const Bracket br = collatz_wielandt(pv, v);
        const double width = std::log(br.hi / br.lo) / period;
        if (width <= settings.tolerance || iter + 1 == settings.max_iterations) {
            if (width > settings.tolerance) break;
            FloquetResult out;
            out.spectral_radius = std::sqrt(br.lo * br.hi);
            out.growth_exponent = std::log(out.spectral_radius) / period;
            out.eigenvalue = -out.growth_exponent;
            out.eigenfunction = to_std(v);
            out.iterations = iter + 1;
            return out;
        }
        v = pv / pv.maxCoeff();
    }
    fail(ErrorKind::no_convergence, "Floquet power iteration hit the iteration cap");
}

void write_eigenfunction_csv(std::ostream& out, const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) fail(ErrorKind::invalid_argument, "field length does not match grid");
    const bool two_d = grid.dimension() == 2;
    out << (two_d ? "x1,x2,value\n" : "x,value\n");
    char buf[128];
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Point x = grid.coordinate(i);
        if (two_d) std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], x[1], values[i]);
        else std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[0], values[i]);
        out << buf;
    }
}

}  // namespace pulsewave
