#pragma once

#include <cstddef>
#include <vector>

#include "pulsewave/medium.hpp"

namespace pulsewave {

/// Boundary treatment of a window axis.
///  - clamp_to_limits: both end nodes keep their initial values (0 and p(x)
///    for front data).
///  - zero_flux: no flux through either end.
///  - decay_tail: lower node tied to its neighbour by the far-field decay
///    u(x0) = r u(x0 + h) of a front tail B e^{λξ} v(x); upper node tied to
///    its neighbour by the steady-state ratio u(xN) = q u(xN − h), q = p(xN)/p(xN − h).
enum class BoundaryRule { clamp_to_limits, zero_flux, decay_tail };

/// One axis of a node grid. Node i sits at x = (first + i) h with h = period / cells,
/// so periodic data restricts to any window by phase = (first + i) mod cells.
struct Axis {
    double period = 1.0;
    int cells = 8;
    long first = 0;
    long count = 8;
    bool periodic = true;
    BoundaryRule rule = BoundaryRule::clamp_to_limits;

    double spacing() const { return period / cells; }
    double coordinate(long i) const { return static_cast<double>(first + i) * spacing(); }
    long phase(long i) const;
};

/// Node grid on a periodicity cell (every axis periodic) or on a finite window
/// of the front direction x1 (axis 0 is a window; axis 1, when present, is
/// periodic or a zero-flux window). Nodes are ordered with axis 0 fastest.
class Grid {
public:
    /// Cell of periodicity with `cells[i]` nodes per period; every count >= 8.
    static Grid periodic(std::vector<double> periods, std::vector<int> cells);

    /// One-dimensional window [x_lo, x_hi] with spacing period/cells. x_lo must be
    /// a node of the lattice (h Z) and the window must span at least 20 periods.
    static Grid line(double period, int cells, double x_lo, double x_hi,
                     BoundaryRule rule = BoundaryRule::clamp_to_limits);

    /// Adds a transverse axis to a line grid: periodic (one period of `cells`
    /// nodes) or a zero-flux window [y_lo, y_hi].
    Grid with_periodic_transverse(double period, int cells) const;
    Grid with_window_transverse(double period, int cells, double y_lo, double y_hi) const;

    /// Decay-tail data for axis 0: decay rate λ and the lower node ratio
    /// r = u(x0)/u(x0 + h), phase dependent through v(x) in general. The upper
    /// ratio q (indexed by the phase of the upper node) defaults to 1.
    Grid with_decay_tail(double rate, std::vector<double> ratio_by_phase,
                         std::vector<double> plateau_ratio_by_phase = {}) const;

    bool is_periodic() const { return axes_[0].periodic; }
    int dimension() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
    std::size_t size() const;
    long count(int i) const { return axis(i).count; }

    std::size_t index(long i0, long i1 = 0) const {
        return static_cast<std::size_t>(i0 + axes_[0].count * i1);
    }
    Point coordinate(std::size_t node) const;

    /// Index into arrays sampled on the matching periodic cell grid.
    std::size_t phase_index(std::size_t node) const;
    /// Periodic cell grid with the same spacing on every axis.
    Grid cell() const;

    /// Moves the window of axis 0 by `periods` whole periods (negative = towards -x).
    Grid shifted(long periods) const;

    double tail_rate() const { return tail_rate_; }
    /// Lower-boundary decay ratio at the phase of node 0 of `line` i1.
    double tail_ratio(long i1 = 0) const;
    const std::vector<double>& tail_ratio_table() const { return tail_ratio_; }
    /// Upper-boundary ratio q at the phase of the last node of `line` i1.
    double plateau_ratio(long i1 = 0) const;
    const std::vector<double>& plateau_ratio_table() const { return plateau_ratio_; }

    bool same_shape(const Grid& other) const;

private:
    std::vector<Axis> axes_;
    double tail_rate_ = 0.0;
    std::vector<double> tail_ratio_;  // indexed by axis-0 phase + cells0 * axis-1 phase
    std::vector<double> plateau_ratio_;
};

}  // namespace pulsewave
