#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pulsewave/grid.hpp"
#include "pulsewave/medium.hpp"
#include "pulsewave/tridiagonal.hpp"

namespace pulsewave {

struct Field {
    Grid grid;
    std::vector<double> values;
    double t = 0.0;
};

/// Window shift applied during an evolution (whole periods, negative = towards −x1).
struct RecenterEvent {
    double t = 0.0;
    long periods = 0;
};

struct Trajectory {
    std::vector<Field> frames;
    double dt = 0.0;
    std::string scheme = "imex-euler";
    std::vector<RecenterEvent> recenters;
};

/// Largest admissible step 1/(2 sup |f_u|) over u in [0, u_max].
double step_budget(const Medium& medium, double u_max);

/// Default step min(budget, h) for the spacing of axis 0.
double default_step(const Medium& medium, const Grid& grid, double u_max);

/// One IMEX step (I − Δt D) u_new = u + Δt f(x, u), D the flux-form divergence
/// operator with coefficients at t + Δt/2. Nodes held by a window boundary rule
/// keep their value (clamp) or follow the decay-tail relations. Two-dimensional
/// grids split the implicit solve by axis, (I − Δt D2)^{-1}(I − Δt D1)^{-1},
/// which keeps every factor an M-matrix inverse.
///
/// A Stepper is bound to a grid shape: it serves any field on that grid or on a
/// copy shifted by whole periods. Read-only after construction for autonomous
/// media, so one Stepper may drive several fields.
class Stepper {
public:
    /// u_max bounds the solution (M of the medium); the step is checked against
    /// step_budget(medium, u_max). Throws StepTooLarge.
    Stepper(const Medium& medium, Grid grid, double dt, double u_max);

    double dt() const { return dt_; }
    const Grid& grid() const { return grid_; }
    const Medium& medium() const { return medium_; }

    void step(Field& u) const;

private:
    struct Line {
        std::vector<std::size_t> nodes;
        Tridiagonal solver;
        bool robin = false;    // first node follows the decay tail
        bool plateau = false;  // last node follows the steady-state ratio
    };
    struct Factorization {
        std::vector<Line> axis0;
        std::vector<Line> axis1;
    };

    Factorization factor(double t_mid) const;
    void reactions(double t, std::vector<LocalReaction>& out) const;

    Medium medium_;
    Grid grid_;
    double dt_;
    bool time_dependent_;
    Factorization cached_;
    std::vector<LocalReaction> cached_reaction_;
    std::vector<bool> held_;
};

/// Single step with a throwaway Stepper; u_max defaults to max(M, max u).
Field step(const Field& u, const Medium& medium, double dt, std::optional<double> u_max = std::nullopt);

/// Keeps a front inside a window on axis 0. The front position is the leftmost
/// node with u >= level * reference(x) (reference sampled on the periodicity
/// cell, usually the steady state p). When it comes closer than `trigger` to the
/// left edge the window moves left by whole periods so the front sits at
/// `target` from the left edge. Distances are in units of x1.
struct RecenterPolicy {
    std::vector<double> reference_by_phase;
    double level = 0.5;
    double trigger = 0.0;
    double target = 0.0;
    /// Left fill: clamp data are zero; decay-tail data follow u(x − L) = e^{−λL} u(x).
    double fill_rate = 0.0;
};

/// Front position as defined in RecenterPolicy (linear interpolation between
/// nodes, first line of a 2D grid). Empty if no node reaches the level.
std::optional<double> front_position(const Field& u, const std::vector<double>& reference_by_phase, double level);

/// Shifts the window of a field by `periods` whole periods, filling new nodes
/// on the left from the decay-tail relation (or zero) and on the right by
/// repeating the last period.
Field shift_window(const Field& u, long periods, double fill_rate);

struct EvolveOptions {
    double t_end = 0.0;
    std::vector<double> record_times;  // multiples of Δt; t = t0 is always recorded
    std::optional<RecenterPolicy> recenter;
};

/// Evolves several fields on the same grid with identical steps. Recentering
/// decisions come from member 0 and are applied to every member, so twin runs
/// stay aligned node for node.
std::vector<Trajectory> evolve_ensemble(const std::vector<Field>& initial, const Stepper& stepper,
                                        const EvolveOptions& options);
Trajectory evolve(const Field& u0, const Stepper& stepper, const EvolveOptions& options);

/// True iff u(t) <= v(t) + 1e-12 nodewise after every step up to t_end.
bool comparison_check(const Field& u0, const Field& v0, const Stepper& stepper, double t_end);

/// CSV "t,x,u" (or "t,x1,x2,u"), 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Raw little-endian float64 frames in `<stem>.bin` plus a JSON sidecar
/// `<stem>.json` describing grids, times and step.
void write_trajectory_binary(const std::string& stem, const Trajectory& trajectory);
Trajectory read_trajectory_binary(const std::string& stem);

}  // namespace pulsewave
