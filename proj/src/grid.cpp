#include "pulsewave/grid.hpp"

#include <cmath>
#include <sstream>

#include "pulsewave/errors.hpp"

namespace pulsewave {

namespace {

long floor_mod(long a, long n) {
    const long r = a % n;
    return r < 0 ? r + n : r;
}

long lattice_index(double x, double h, const char* what) {
    const double k = x / h;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * std::max(1.0, std::abs(k))) {
        std::ostringstream msg;
        msg << what << " = " << x << " is not a multiple of the spacing " << h;
        fail(ErrorKind::incompatible_grid, msg.str());
    }
    return static_cast<long>(kr);
}

}  // namespace

long Axis::phase(long i) const { return floor_mod(first + i, cells); }

Grid Grid::periodic(std::vector<double> periods, std::vector<int> cells) {
    if (periods.empty() || periods.size() > 2 || periods.size() != cells.size())
        fail(ErrorKind::invalid_argument, "periodic grid needs one or two axes");
    Grid g;
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (cells[i] < 8) fail(ErrorKind::invalid_argument, "periodic grid needs N >= 8 per axis");
        if (!(periods[i] > 0.0)) fail(ErrorKind::invalid_argument, "periods must be positive");
        Axis a;
        a.period = periods[i];
        a.cells = cells[i];
        a.first = 0;
        a.count = cells[i];
        a.periodic = true;
        g.axes_.push_back(a);
    }
    return g;
}

Grid Grid::line(double period, int cells, double x_lo, double x_hi, BoundaryRule rule) {
    if (cells < 8) fail(ErrorKind::invalid_argument, "line grid needs N >= 8 per period");
    if (!(period > 0.0)) fail(ErrorKind::invalid_argument, "period must be positive");
    if (!(x_hi - x_lo >= 20.0 * period * (1.0 - 1e-12)))
        fail(ErrorKind::invalid_argument, "line window must span at least 20 periods");
    Axis a;
    a.period = period;
    a.cells = cells;
    const double h = a.spacing();
    a.first = lattice_index(x_lo, h, "window start");
    const long last = lattice_index(x_hi, h, "window end");
    a.count = last - a.first + 1;
    a.periodic = false;
    a.rule = rule;
    Grid g;
    g.axes_.push_back(a);
    return g;
}

Grid Grid::with_periodic_transverse(double period, int cells) const {
    if (dimension() != 1) fail(ErrorKind::invalid_argument, "grid already has a transverse axis");
    if (cells < 8) fail(ErrorKind::invalid_argument, "transverse axis needs N >= 8");
    Grid g = *this;
    Axis a;
    a.period = period;
    a.cells = cells;
    a.count = cells;
    a.periodic = true;
    g.axes_.push_back(a);
    g.tail_ratio_.clear();
    g.plateau_ratio_.clear();
    return g;
}

Grid Grid::with_window_transverse(double period, int cells, double y_lo, double y_hi) const {
    if (dimension() != 1) fail(ErrorKind::invalid_argument, "grid already has a transverse axis");
    if (cells < 8) fail(ErrorKind::invalid_argument, "transverse axis needs N >= 8");
    Grid g = *this;
    Axis a;
    a.period = period;
    a.cells = cells;
    const double h = a.spacing();
    a.first = lattice_index(y_lo, h, "transverse window start");
    a.count = lattice_index(y_hi, h, "transverse window end") - a.first + 1;
    if (a.count < 3) fail(ErrorKind::invalid_argument, "transverse window too small");
    a.periodic = false;
    a.rule = BoundaryRule::zero_flux;
    g.axes_.push_back(a);
    g.tail_ratio_.clear();
    g.plateau_ratio_.clear();
    return g;
}

Grid Grid::with_decay_tail(double rate, std::vector<double> ratio_by_phase,
                           std::vector<double> plateau_ratio_by_phase) const {
    if (is_periodic()) fail(ErrorKind::incompatible_grid, "decay tail applies to line grids only");
    std::size_t cells_total = static_cast<std::size_t>(axes_[0].cells);
    if (dimension() == 2) cells_total *= static_cast<std::size_t>(axes_[1].cells);
    if (ratio_by_phase.size() != cells_total)
        fail(ErrorKind::invalid_argument, "decay-tail ratio table must cover one periodicity cell");
    if (plateau_ratio_by_phase.empty()) plateau_ratio_by_phase.assign(cells_total, 1.0);
    if (plateau_ratio_by_phase.size() != cells_total)
        fail(ErrorKind::invalid_argument, "plateau ratio table must cover one periodicity cell");
    Grid g = *this;
    g.axes_[0].rule = BoundaryRule::decay_tail;
    g.tail_rate_ = rate;
    g.tail_ratio_ = std::move(ratio_by_phase);
    g.plateau_ratio_ = std::move(plateau_ratio_by_phase);
    return g;
}

std::size_t Grid::size() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= static_cast<std::size_t>(a.count);
    return n;
}

Point Grid::coordinate(std::size_t node) const {
    const long n0 = axes_[0].count;
    const long i0 = static_cast<long>(node) % n0;
    const long i1 = static_cast<long>(node) / n0;
    Point p{axes_[0].coordinate(i0), 0.0};
    if (dimension() == 2) p[1] = axes_[1].coordinate(i1);
    return p;
}

std::size_t Grid::phase_index(std::size_t node) const {
    const long n0 = axes_[0].count;
    const long i0 = static_cast<long>(node) % n0;
    const long i1 = static_cast<long>(node) / n0;
    long idx = axes_[0].phase(i0);
    if (dimension() == 2) idx += static_cast<long>(axes_[0].cells) * axes_[1].phase(i1);
    return static_cast<std::size_t>(idx);
}

Grid Grid::cell() const {
    std::vector<double> periods;
    std::vector<int> cells;
    for (const auto& a : axes_) {
        periods.push_back(a.period);
        cells.push_back(a.cells);
    }
    return periodic(std::move(periods), std::move(cells));
}

Grid Grid::shifted(long periods) const {
    if (is_periodic()) fail(ErrorKind::incompatible_grid, "cannot shift a periodic grid");
    Grid g = *this;
    g.axes_[0].first += periods * static_cast<long>(axes_[0].cells);
    return g;
}

double Grid::tail_ratio(long i1) const {
    if (tail_ratio_.empty()) return 0.0;
    long idx = axes_[0].phase(0);
    if (dimension() == 2) idx += static_cast<long>(axes_[0].cells) * axes_[1].phase(i1);
    return tail_ratio_[static_cast<std::size_t>(idx)];
}

double Grid::plateau_ratio(long i1) const {
    if (plateau_ratio_.empty()) return 1.0;
    long idx = axes_[0].phase(axes_[0].count - 1);
    if (dimension() == 2) idx += static_cast<long>(axes_[0].cells) * axes_[1].phase(i1);
    return plateau_ratio_[static_cast<std::size_t>(idx)];
}

bool Grid::same_shape(const Grid& other) const {
    if (dimension() != other.dimension()) return false;
    for (int i = 0; i < dimension(); ++i) {
        const Axis& a = axis(i);
        const Axis& b = other.axis(i);
        if (a.period != b.period || a.cells != b.cells || a.count != b.count ||
            a.periodic != b.periodic || a.rule != b.rule || a.phase(0) != b.phase(0))
            return false;
    }
    return tail_rate_ == other.tail_rate_ && tail_ratio_ == other.tail_ratio_ &&
           plateau_ratio_ == other.plateau_ratio_;
}

}  // namespace pulsewave
