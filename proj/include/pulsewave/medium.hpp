#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pulsewave {

/// Spatial point; the second coordinate is ignored for one-dimensional media.
using Point = std::array<double, 2>;

/// Spatial periods L_i and the optional time period T of a medium.
struct Periods {
    int dimension = 1;
    std::array<double, 2> length{1.0, 1.0};
    std::optional<double> time;
};

namespace detail {
struct ReactionTable;
}

enum class Phase { cos, sin };

/// amplitude * trig(2π (k1 x1/L1 + k2 x2/L2 + m t/T))
struct FourierTerm {
    double amplitude = 0.0;
    int k1 = 0;
    int k2 = 0;
    int m = 0;
    Phase phase = Phase::cos;
};

/// Truncated trigonometric series in (x, t). Periodic in every variable by
/// construction once the periods are bound at evaluation time.
class PeriodicFunction {
public:
    PeriodicFunction() = default;
    explicit PeriodicFunction(double constant, std::vector<FourierTerm> terms = {});

    double operator()(const Point& x, double t, const Periods& periods) const;

    double constant() const { return constant_; }
    const std::vector<FourierTerm>& terms() const { return terms_; }
    bool depends_on_time() const;
    bool depends_on_space() const;
    bool depends_on_axis(int axis) const;
    bool is_zero() const;

private:
    double constant_ = 0.0;
    std::vector<FourierTerm> terms_;
};

/// f(u) and f_u(u) at one frozen (x, t). Cheap to copy.
class LocalReaction {
public:
    double f(double u) const;
    double f_u(double u) const;

private:
    friend class Nonlinearity;
    double mu_ = 0.0;
    const detail::ReactionTable* table_ = nullptr;
    std::size_t row0_ = 0;
    std::size_t row1_ = 0;
    double weight_ = 0.0;
};

/// Reaction term f(x, u). Either the KPP logistic family u(μ(x) − u) or a
/// table over (x1, u) read with bilinear interpolation.
class Nonlinearity {
public:
    enum class Kind { kpp_logistic, tabulated };

    static Nonlinearity kpp_logistic(PeriodicFunction mu);

    /// `x` spans one period [0, L1) in increasing order, `u` is increasing and
    /// contains 0. `f` and `f_u` are row-major tables of size x.size() * u.size().
    static Nonlinearity tabulated(std::vector<double> x, std::vector<double> u,
                                  std::vector<double> f, std::vector<double> f_u);

    Kind kind() const { return kind_; }
    const PeriodicFunction& mu() const { return mu_; }

    LocalReaction at(const Point& x, double t, const Periods& periods) const;

    bool depends_on_time() const;
    bool depends_on_space() const;

private:
    Nonlinearity() = default;
    Kind kind_ = Kind::kpp_logistic;
    PeriodicFunction mu_;
    std::shared_ptr<const detail::ReactionTable> table_;
};

/// Diagonal diffusion matrix field. n = 1 keeps only a11.
class DiffusionField {
public:
    static DiffusionField scalar(PeriodicFunction a);
    static DiffusionField diagonal(PeriodicFunction a11, PeriodicFunction a22);
    /// Throws Unsupported for a non-zero off-diagonal entry.
    static DiffusionField matrix(PeriodicFunction a11, PeriodicFunction a12, PeriodicFunction a22);

    int dimension() const { return dimension_; }
    double coefficient(int axis, const Point& x, double t, const Periods& periods) const;
    const PeriodicFunction& entry(int axis) const { return diagonal_[static_cast<std::size_t>(axis)]; }
    bool depends_on_time() const;
    bool depends_on_space() const;

private:
    int dimension_ = 1;
    std::array<PeriodicFunction, 2> diagonal_;
};

/// Immutable periodic medium: diffusion field, reaction, periods, optional
/// time period. Propagation direction is fixed to e1.
class Medium {
public:
    Medium(DiffusionField diffusion, Nonlinearity reaction, std::vector<double> periods,
           std::optional<double> time_period = std::nullopt);

    int dimension() const { return periods_.dimension; }
    double period(int axis) const { return periods_.length[static_cast<std::size_t>(axis)]; }
    std::optional<double> time_period() const { return periods_.time; }
    const Periods& periods() const { return periods_; }

    const DiffusionField& diffusion_field() const { return diffusion_; }
    const Nonlinearity& reaction() const { return reaction_; }

    double diffusion(int axis, const Point& x, double t = 0.0) const {
        return diffusion_.coefficient(axis, x, t, periods_);
    }
    LocalReaction reaction_at(const Point& x, double t = 0.0) const {
        return reaction_.at(x, t, periods_);
    }
    double f(const Point& x, double u, double t = 0.0) const { return reaction_at(x, t).f(u); }
    double f_u(const Point& x, double u, double t = 0.0) const { return reaction_at(x, t).f_u(u); }

    bool time_dependent() const;
    bool spatially_homogeneous() const;

private:
    DiffusionField diffusion_;
    Nonlinearity reaction_;
    Periods periods_;
};

/// Deterministic sample set for the structural checks.
struct SampleSet {
    std::vector<Point> points;
    std::vector<double> times;
};

/// `per_period` points per period per axis; `time_samples` phases when the
/// medium is time periodic (a single t = 0 otherwise).
SampleSet sample_medium(const Medium& medium, int per_period = 64, int time_samples = 16);

/// Minimum Rayleigh quotient ξᵀA(x)ξ/|ξ|² over samples and 16 directions.
/// Throws NonElliptic when the estimate is not positive.
double validate_ellipticity(const Medium& medium, int n_samples = 64);

struct SublinearityWitness {
    Point x;
    double t = 0.0;
    double s = 0.0;
    double s_next = 0.0;
};

struct SublinearityReport {
    bool holds = true;
    std::optional<SublinearityWitness> witness;
};

/// s ↦ f(x, s)/s non-increasing along `u_grid` at every sampled x.
SublinearityReport check_sublinearity(const Medium& medium, std::span<const double> u_grid,
                                      const SampleSet& samples);
SublinearityReport check_sublinearity(const Medium& medium, std::span<const double> u_grid);

/// Smallest M on a grid of step `resolution` with f(x, s) <= 0 for every
/// sampled x and every sampled s in [M, ceiling]. Throws NoBoundFound.
double check_bound_M(const Medium& medium, double search_ceiling, double resolution = 1.0 / 64.0,
                     int per_period = 64);

/// f_u <= f/u at every sample, strictly at some x for every sampled u.
bool check_condition_C(const Medium& medium, std::span<const double> u_grid,
                       std::span<const Point> x_grid, std::span<const double> times = {});

/// max over samples of f_u(x, u) - f_u(x, 0); non-positive for sublinear media.
double derivative_excess(const Medium& medium, std::span<const double> u_grid,
                         const SampleSet& samples);

/// sup over samples of |f_u(x, u)| for u in [0, u_max].
double sup_reaction_slope(const Medium& medium, double u_max, int per_period = 64,
                          int u_samples = 129);

}  // namespace pulsewave
