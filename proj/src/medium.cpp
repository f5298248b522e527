#include "pulsewave/medium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace detail {

struct ReactionTable {
    double period = 1.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> f;
    std::vector<double> f_u;

    // Linear in u inside a row, extrapolated from the end cells.
    double row_value(const std::vector<double>& table, std::size_t row, double s) const {
        const std::size_t nu = u.size();
        const double* r = table.data() + row * nu;
        if (nu == 1) return r[0];
        std::size_t j = 0;
        if (s >= u.back()) {
            j = nu - 2;
        } else if (s > u.front()) {
            j = static_cast<std::size_t>(std::upper_bound(u.begin(), u.end(), s) - u.begin()) - 1;
            j = std::min(j, nu - 2);
        }
        const double w = (s - u[j]) / (u[j + 1] - u[j]);
        return r[j] + w * (r[j + 1] - r[j]);
    }
};

}  // namespace detail

namespace {

double wrap_unit(double v) { return v - std::floor(v); }

}  // namespace

PeriodicFunction::PeriodicFunction(double constant, std::vector<FourierTerm> terms)
    : constant_(constant), terms_(std::move(terms)) {}

double PeriodicFunction::operator()(const Point& x, double t, const Periods& periods) const {
    double value = constant_;
    for (const auto& term : terms_) {
        if (term.amplitude == 0.0) continue;
        double cycles = 0.0;
        if (term.k1 != 0) cycles += term.k1 * x[0] / periods.length[0];
        if (term.k2 != 0) cycles += term.k2 * x[1] / periods.length[1];
        if (term.m != 0 && periods.time) cycles += term.m * t / *periods.time;
        const double angle = 2.0 * std::numbers::pi * wrap_unit(cycles);
        value += term.amplitude * (term.phase == Phase::cos ? std::cos(angle) : std::sin(angle));
    }
    return value;
}

bool PeriodicFunction::depends_on_time() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const FourierTerm& t) { return t.amplitude != 0.0 && t.m != 0; });
}

bool PeriodicFunction::depends_on_space() const {
    return depends_on_axis(0) || depends_on_axis(1);
}

bool PeriodicFunction::depends_on_axis(int axis) const {
    return std::any_of(terms_.begin(), terms_.end(), [axis](const FourierTerm& t) {
        return t.amplitude != 0.0 && (axis == 0 ? t.k1 != 0 : t.k2 != 0);
    });
}

bool PeriodicFunction::is_zero() const {
    return constant_ == 0.0 &&
           std::all_of(terms_.begin(), terms_.end(),
                       [](const FourierTerm& t) { return t.amplitude == 0.0; });
}

double LocalReaction::f(double u) const {
    if (!table_) return u * (mu_ - u);
    return (1.0 - weight_) * table_->row_value(table_->f, row0_, u) +
           weight_ * table_->row_value(table_->f, row1_, u);
}

double LocalReaction::f_u(double u) const {
    if (!table_) return mu_ - 2.0 * u;
    return (1.0 - weight_) * table_->row_value(table_->f_u, row0_, u) +
           weight_ * table_->row_value(table_->f_u, row1_, u);
}

Nonlinearity Nonlinearity::kpp_logistic(PeriodicFunction mu) {
    Nonlinearity n;
    n.kind_ = Kind::kpp_logistic;
    n.mu_ = std::move(mu);
    return n;
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> x, std::vector<double> u,
                                     std::vector<double> f, std::vector<double> f_u) {
    if (x.empty() || u.size() < 2) fail(ErrorKind::invalid_argument, "tabulated reaction needs x samples and >= 2 u samples");
    if (f.size() != x.size() * u.size() || f_u.size() != f.size())
        fail(ErrorKind::invalid_argument, "tabulated reaction table size mismatch");
    if (!std::is_sorted(x.begin(), x.end()) || std::adjacent_find(x.begin(), x.end()) != x.end())
        fail(ErrorKind::invalid_argument, "tabulated x samples must be strictly increasing");
    for (std::size_t j = 1; j < u.size(); ++j)
        if (!(u[j] > u[j - 1])) fail(ErrorKind::invalid_argument, "tabulated u samples must be strictly increasing");
    auto zero = std::find(u.begin(), u.end(), 0.0);
    if (zero == u.end()) fail(ErrorKind::invalid_argument, "tabulated u samples must contain 0");
    const auto j0 = static_cast<std::size_t>(zero - u.begin());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(f[i * u.size() + j0]) > 1e-15)
            fail(ErrorKind::invalid_argument, "tabulated reaction violates f(x, 0) = 0");

    auto table = std::make_shared<detail::ReactionTable>();
    table->x = std::move(x);
    table->u = std::move(u);
    table->f = std::move(f);
    table->f_u = std::move(f_u);
    Nonlinearity n;
    n.kind_ = Kind::tabulated;
    n.table_ = std::move(table);
    return n;
}

LocalReaction Nonlinearity::at(const Point& x, double t, const Periods& periods) const {
    LocalReaction local;
    if (kind_ == Kind::kpp_logistic) {
        local.mu_ = mu_(x, t, periods);
        return local;
    }
    const auto& tab = *table_;
    local.table_ = &tab;
    const std::size_t nx = tab.x.size();
    if (nx == 1) return local;
    const double period = periods.length[0];
    const double xr = period * wrap_unit(x[0] / period);
    // Periodic interval search; the last interval wraps to x[0] + L.
    auto it = std::upper_bound(tab.x.begin(), tab.x.end(), xr);
    std::size_t i1 = static_cast<std::size_t>(it - tab.x.begin());
    std::size_t i0 = 0;
    double left = 0.0;
    double right = 0.0;
    if (i1 == 0) {
        i0 = nx - 1;
        left = tab.x[nx - 1] - period;
        right = tab.x[0];
    } else if (i1 == nx) {
        i0 = nx - 1;
        i1 = 0;
        left = tab.x[nx - 1];
        right = tab.x[0] + period;
    } else {
        i0 = i1 - 1;
        left = tab.x[i0];
        right = tab.x[i1];
    }
    local.row0_ = i0;
    local.row1_ = i1;
    local.weight_ = (xr - left) / (right - left);
    return local;
}

bool Nonlinearity::depends_on_time() const {
    return kind_ == Kind::kpp_logistic && mu_.depends_on_time();
}

bool Nonlinearity::depends_on_space() const {
    if (kind_ == Kind::kpp_logistic) return mu_.depends_on_space();
    const auto& tab = *table_;
    const std::size_t nu = tab.u.size();
    for (std::size_t i = 1; i < tab.x.size(); ++i)
        for (std::size_t j = 0; j < nu; ++j)
            if (tab.f[i * nu + j] != tab.f[j] || tab.f_u[i * nu + j] != tab.f_u[j]) return true;
    return false;
}

DiffusionField DiffusionField::scalar(PeriodicFunction a) {
    DiffusionField d;
    d.dimension_ = 1;
    d.diagonal_[0] = std::move(a);
    return d;
}

DiffusionField DiffusionField::diagonal(PeriodicFunction a11, PeriodicFunction a22) {
    DiffusionField d;
    d.dimension_ = 2;
    d.diagonal_[0] = std::move(a11);
    d.diagonal_[1] = std::move(a22);
    return d;
}

DiffusionField DiffusionField::matrix(PeriodicFunction a11, PeriodicFunction a12,
                                      PeriodicFunction a22) {
    if (!a12.is_zero())
        fail(ErrorKind::unsupported, "off-diagonal diffusion entries are not supported; use a diagonal A");
    return diagonal(std::move(a11), std::move(a22));
}

double DiffusionField::coefficient(int axis, const Point& x, double t, const Periods& periods) const {
    return diagonal_[static_cast<std::size_t>(axis)](x, t, periods);
}

bool DiffusionField::depends_on_time() const {
    for (int a = 0; a < dimension_; ++a)
        if (diagonal_[static_cast<std::size_t>(a)].depends_on_time()) return true;
    return false;
}

bool DiffusionField::depends_on_space() const {
    for (int a = 0; a < dimension_; ++a)
        if (diagonal_[static_cast<std::size_t>(a)].depends_on_space()) return true;
    return false;
}

Medium::Medium(DiffusionField diffusion, Nonlinearity reaction, std::vector<double> periods,
               std::optional<double> time_period)
    : diffusion_(std::move(diffusion)), reaction_(std::move(reaction)) {
    const int n = diffusion_.dimension();
    if (static_cast<int>(periods.size()) != n)
        fail(ErrorKind::invalid_argument, "number of periods must equal the diffusion dimension");
    periods_.dimension = n;
    for (int i = 0; i < n; ++i) {
        if (!(periods[static_cast<std::size_t>(i)] > 0.0))
            fail(ErrorKind::invalid_argument, "periods must be positive");
        periods_.length[static_cast<std::size_t>(i)] = periods[static_cast<std::size_t>(i)];
    }
    if (time_period && !(*time_period > 0.0))
        fail(ErrorKind::invalid_argument, "time period must be positive");
    periods_.time = time_period;

    auto check_function = [&](const PeriodicFunction& fn, const char* name) {
        for (const auto& term : fn.terms()) {
            if (term.m != 0 && !time_period)
                fail(ErrorKind::invalid_argument, std::string(name) + " has time modes but the medium has no time period");
            if (term.k2 != 0 && n == 1)
                fail(ErrorKind::invalid_argument, std::string(name) + " has x2 modes in a one-dimensional medium");
        }
    };
    check_function(diffusion_.entry(0), "a11");
    if (n == 2) check_function(diffusion_.entry(1), "a22");
    if (reaction_.kind() == Nonlinearity::Kind::kpp_logistic) check_function(reaction_.mu(), "mu");

    // Sampled periodicity certificate: x versus x + L_i e_i.
    const SampleSet samples = sample_medium(*this, 16, 4);
    for (const auto& x : samples.points) {
        for (double t : samples.times) {
            for (int axis = 0; axis < n; ++axis) {
                Point shifted = x;
                shifted[static_cast<std::size_t>(axis)] += period(axis);
                for (int k = 0; k < n; ++k) {
                    if (std::abs(this->diffusion(k, x, t) - this->diffusion(k, shifted, t)) > 1e-12)
                        fail(ErrorKind::invalid_argument, "diffusion coefficient is not L-periodic");
                }
                for (double u : {0.25, 1.0}) {
                    if (std::abs(f(x, u, t) - f(shifted, u, t)) > 1e-12)
                        fail(ErrorKind::invalid_argument, "reaction is not L-periodic");
                }
            }
            if (time_period) {
                for (int k = 0; k < n; ++k)
                    if (std::abs(this->diffusion(k, x, t) - this->diffusion(k, x, t + *time_period)) > 1e-12)
                        fail(ErrorKind::invalid_argument, "diffusion coefficient is not T-periodic");
                if (std::abs(f_u(x, 0.0, t) - f_u(x, 0.0, t + *time_period)) > 1e-12)
                    fail(ErrorKind::invalid_argument, "reaction is not T-periodic");
            }
        }
    }
}

bool Medium::time_dependent() const {
    return periods_.time && (diffusion_.depends_on_time() || reaction_.depends_on_time());
}

bool Medium::spatially_homogeneous() const {
    return !diffusion_.depends_on_space() && !reaction_.depends_on_space();
}

SampleSet sample_medium(const Medium& medium, int per_period, int time_samples) {
    SampleSet s;
    const int n = medium.dimension();
    const int n2 = n == 2 ? per_period : 1;
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < per_period; ++i) {
            Point p{medium.period(0) * i / per_period, 0.0};
            if (n == 2) p[1] = medium.period(1) * j / per_period;
            s.points.push_back(p);
        }
    }
    if (medium.time_period()) {
        for (int k = 0; k < time_samples; ++k) s.times.push_back(*medium.time_period() * k / time_samples);
    } else {
        s.times.push_back(0.0);
    }
    return s;
}

double validate_ellipticity(const Medium& medium, int n_samples) {
    if (n_samples < 16) fail(ErrorKind::invalid_argument, "ellipticity check needs >= 16 samples per dimension");
    const SampleSet samples = sample_medium(medium, n_samples);
    constexpr int directions = 16;
    double alpha = std::numeric_limits<double>::infinity();
    for (const auto& x : samples.points) {
        for (double t : samples.times) {
            const double a11 = medium.diffusion(0, x, t);
            if (medium.dimension() == 1) {
                alpha = std::min(alpha, a11);
                continue;
            }
            const double a22 = medium.diffusion(1, x, t);
            for (int k = 0; k < directions; ++k) {
                const double theta = std::numbers::pi * k / directions;
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                alpha = std::min(alpha, a11 * c * c + a22 * s * s);
            }
        }
    }
    if (!(alpha > 0.0)) {
        std::ostringstream msg;
        msg << "minimum Rayleigh quotient " << alpha << " is not positive";
        fail(ErrorKind::non_elliptic, msg.str());
    }
    return alpha;
}

namespace {

void require_positive_increasing(std::span<const double> u_grid) {
    if (u_grid.empty()) fail(ErrorKind::invalid_argument, "u grid is empty");
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        if (!(u_grid[j] > 0.0)) fail(ErrorKind::invalid_argument, "u grid entries must be positive");
        if (j > 0 && !(u_grid[j] > u_grid[j - 1]))
            fail(ErrorKind::invalid_argument, "u grid must be strictly increasing");
    }
}

}  // namespace

SublinearityReport check_sublinearity(const Medium& medium, std::span<const double> u_grid,
                                      const SampleSet& samples) {
    require_positive_increasing(u_grid);
    SublinearityReport report;
    for (double t : samples.times) {
        for (const auto& x : samples.points) {
            const LocalReaction r = medium.reaction_at(x, t);
            double prev = r.f(u_grid[0]) / u_grid[0];
            for (std::size_t j = 1; j < u_grid.size(); ++j) {
                const double g = r.f(u_grid[j]) / u_grid[j];
                if (g > prev + 1e-12 * std::max(1.0, std::abs(prev))) {
                    report.holds = false;
                    report.witness = SublinearityWitness{x, t, u_grid[j - 1], u_grid[j]};
                    return report;
                }
                prev = g;
            }
        }
    }
    return report;
}

SublinearityReport check_sublinearity(const Medium& medium, std::span<const double> u_grid) {
    return check_sublinearity(medium, u_grid, sample_medium(medium));
}

double check_bound_M(const Medium& medium, double search_ceiling, double resolution, int per_period) {
    if (!(search_ceiling > 0.0) || !(resolution > 0.0))
        fail(ErrorKind::invalid_argument, "bound search needs a positive ceiling and resolution");
    const SampleSet samples = sample_medium(medium, per_period);
    const auto steps = static_cast<long>(std::floor(search_ceiling / resolution + 1e-9));
    if (steps < 1) fail(ErrorKind::invalid_argument, "ceiling below the search resolution");
    auto positive_somewhere = [&](double s) {
        for (double t : samples.times)
            for (const auto& x : samples.points)
                if (medium.f(x, s, t) > 0.0) return true;
        return false;
    };
    for (long k = steps; k >= 1; --k) {
        const double s = static_cast<double>(k) * resolution;
        if (positive_somewhere(s)) {
            if (k == steps) {
                std::ostringstream msg;
                msg << "f stays positive up to the ceiling " << search_ceiling;
                fail(ErrorKind::no_bound_found, msg.str());
            }
            return static_cast<double>(k + 1) * resolution;
        }
    }
    return resolution;
}

bool check_condition_C(const Medium& medium, std::span<const double> u_grid,
                       std::span<const Point> x_grid, std::span<const double> times) {
    require_positive_increasing(u_grid);
    if (x_grid.empty()) fail(ErrorKind::invalid_argument, "x grid is empty");
    const std::vector<double> t0{0.0};
    const std::span<const double> ts = times.empty() ? std::span<const double>(t0) : times;
    for (double u : u_grid) {
        bool strict = false;
        for (double t : ts) {
            for (const auto& x : x_grid) {
                const LocalReaction r = medium.reaction_at(x, t);
                const double g = r.f(u) / u;
                const double fu = r.f_u(u);
                const double tol = 1e-12 * std::max(1.0, std::abs(g));
                if (fu > g + tol) return false;
                if (fu < g - tol) strict = true;
            }
        }
        if (!strict) return false;
    }
    return true;
}

double derivative_excess(const Medium& medium, std::span<const double> u_grid, const SampleSet& samples) {
    double excess = -std::numeric_limits<double>::infinity();
    for (double t : samples.times) {
        for (const auto& x : samples.points) {
            const LocalReaction r = medium.reaction_at(x, t);
            const double base = r.f_u(0.0);
            for (double u : u_grid) excess = std::max(excess, r.f_u(u) - base);
        }
    }
    return excess;
}

double sup_reaction_slope(const Medium& medium, double u_max, int per_period, int u_samples) {
    const SampleSet samples = sample_medium(medium, per_period);
    double sup = 0.0;
    for (double t : samples.times) {
        for (const auto& x : samples.points) {
            const LocalReaction r = medium.reaction_at(x, t);
            for (int j = 0; j < u_samples; ++j) {
                const double u = u_max * j / (u_samples - 1);
                sup = std::max(sup, std::abs(r.f_u(u)));
            }
        }
    }
    return sup;
}

}  // namespace pulsewave
