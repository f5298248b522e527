#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "pulsewave/errors.hpp"
#include "pulsewave/evolution.hpp"
#include "support.hpp"

using namespace pulsewave;
using testing_media::fisher;
using testing_media::periodic_mu;

namespace {

Field constant_field(const Grid& g, double value) { return Field{g, std::vector<double>(g.size(), value), 0.0}; }

Medium inert() {
    const std::vector<double> xs = {0.0, 0.5};
    const std::vector<double> us = {0.0, 2.0};
    return Medium(DiffusionField::scalar(PeriodicFunction(1.0, {{0.5, 1, 0, 0, Phase::cos}})),
                  Nonlinearity::tabulated(xs, us, std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)), {1.0});
}

}  // namespace

TEST_CASE("tridiagonal solves against dense") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> off(-1.0, 0.0);
    for (bool cyclic : {false, true}) {
        const int n = 17;
        std::vector<double> lo(n), di(n), up(n);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            lo[k] = off(rng);
            up[k] = off(rng);
            di[k] = 2.5;
            a(k, k) = di[k];
            if (k > 0) a(k, k - 1) = lo[k];
            else if (cyclic) a(0, n - 1) = lo[0];
            if (k + 1 < n) a(k, k + 1) = up[k];
            else if (cyclic) a(n - 1, 0) = up[k];
        }
        Eigen::VectorXd b = Eigen::VectorXd::Random(n);
        const Eigen::VectorXd x = a.lu().solve(b);
        std::vector<double> y(b.data(), b.data() + n);
        Tridiagonal(lo, di, up, cyclic).solve(y);
        for (int k = 0; k < n; ++k) CHECK(y[static_cast<std::size_t>(k)] == doctest::Approx(x[k]).epsilon(1e-13));
    }
}

TEST_CASE("fixed points and the scalar logistic step") {
    const Grid g = Grid::periodic({1.0}, {32});
    const Field zero = step(constant_field(g, 0.0), fisher(), 0.1);
    for (double v : zero.values) CHECK(v == 0.0);
    const Field half = step(constant_field(g, 0.5), fisher(), 0.01);
    for (double v : half.values) CHECK(v == doctest::Approx(0.5025).epsilon(1e-14));
    CHECK(half.t == doctest::Approx(0.01));
}

TEST_CASE("step budget") {
    const Grid g = Grid::periodic({1.0}, {32});
    CHECK(step_budget(fisher(), 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(Stepper(fisher(), g, 0.6, 1.0), Error);
    try {
        Stepper(fisher(), g, 0.6, 1.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::step_too_large);
    }
    CHECK(default_step(fisher(), g, 1.0) == doctest::Approx(1.0 / 32));
}

TEST_CASE("logistic convergence to carrying capacity") {
    const Grid g = Grid::periodic({1.0}, {32});
    const Stepper s(fisher(), g, 1.0 / 32, 1.0);
    const Trajectory tr = evolve(constant_field(g, 0.1), s, {30.0, {10.0, 30.0}, std::nullopt});
    REQUIRE(tr.frames.size() == 3);
    CHECK(tr.frames[1].t == doctest::Approx(10.0));
    for (double v : tr.frames.back().values) CHECK(std::abs(v - 1.0) <= 1e-4);
    const Trajectory none = evolve(constant_field(g, 0.1), s, {0.0, {}, std::nullopt});
    CHECK(none.frames.size() == 1);
    CHECK_THROWS_AS(evolve(constant_field(g, 0.1), s, {1.0, {0.3 + 1e-3}, std::nullopt}), Error);
}

TEST_CASE("comparison principle and invariant region, 100 seeded ordered pairs") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const Medium& m : {fisher(), periodic_mu()}) {
        const Grid g = Grid::periodic({1.0}, {64});
        const double top = check_bound_M(m, 4.0);
        const Stepper s(m, g, default_step(m, g, top), top);
        for (int pair = 0; pair < 50; ++pair) {
            Field u = constant_field(g, 0.0);
            Field v = constant_field(g, 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double a = unit(rng) * top;
                const double b = unit(rng) * top;
                u.values[i] = std::min(a, b);
                v.values[i] = std::max(a, b);
            }
            CHECK(comparison_check(u, v, s, 1.0));
        }
        CHECK(comparison_check(constant_field(g, 0.3), constant_field(g, 0.3), s, 1.0));
        Field w = constant_field(g, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) w.values[i] = unit(rng);
        const Trajectory tr = evolve(w, s, {2.0, {1.0, 2.0}, std::nullopt});
        for (const Field& f : tr.frames)
            for (double x : f.values) {
                CHECK(x >= -1e-12);
                CHECK(x <= top + 1e-9);
            }
    }
}

TEST_CASE("mass is conserved without reaction") {
    const Grid g = Grid::periodic({1.0}, {64});
    const Stepper s(inert(), g, 0.01, 1.0);
    Field u = constant_field(g, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) u.values[i] = std::exp(std::sin(6.28318 * g.coordinate(i)[0]));
    double before = 0.0;
    for (double v : u.values) before += v;
    for (int k = 0; k < 100; ++k) s.step(u);
    double after = 0.0;
    for (double v : u.values) after += v;
    CHECK(std::abs(after - before) / g.size() <= 1e-9);
}

TEST_CASE("2D splitting keeps transverse-constant data transverse-constant") {
    const Medium m(DiffusionField::diagonal(PeriodicFunction(1.0, {{0.3, 1, 0, 0, Phase::cos}}), PeriodicFunction(1.0)),
                   Nonlinearity::kpp_logistic(PeriodicFunction(1.0)), {1.0, 1.0});
    const Grid g = Grid::periodic({1.0, 1.0}, {16, 16});
    const Stepper s(m, g, 1.0 / 16, 1.0);
    Field u = constant_field(g, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) u.values[i] = 0.5 + 0.4 * std::cos(6.283185307 * g.coordinate(i)[0]);
    for (int k = 0; k < 20; ++k) s.step(u);
    for (long i1 = 1; i1 < 16; ++i1)
        for (long i0 = 0; i0 < 16; ++i0) CHECK(u.values[g.index(i0, i1)] == doctest::Approx(u.values[g.index(i0, 0)]).epsilon(1e-13));
}

TEST_CASE("time-periodic reaction: spatially constant data follow the ODE") {
    const Medium m(DiffusionField::scalar(PeriodicFunction(1.0)),
                   Nonlinearity::kpp_logistic(PeriodicFunction(1.0, {{0.3, 0, 0, 1, Phase::sin}})), {1.0}, 1.0);
    const Grid g = Grid::periodic({1.0}, {16});
    const Stepper s(m, g, 1.0 / 64, 1.5);
    Field u = constant_field(g, 0.2);
    double ode = 0.2;
    for (int k = 0; k < 64; ++k) {
        const double tm = (k + 0.5) / 64.0;
        ode += (1.0 / 64) * ode * (1.0 + 0.3 * std::sin(6.283185307179586 * tm) - ode);
        s.step(u);
    }
    for (double v : u.values) CHECK(v == doctest::Approx(ode).epsilon(1e-12));
}

TEST_CASE("window: held ends, front position, shifting") {
    const Grid g = Grid::line(1.0, 16, -20.0, 20.0, BoundaryRule::clamp_to_limits);
    Field u = constant_field(g, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) u.values[i] = std::min(1.0, std::exp(0.5 * g.coordinate(i)[0]));
    u.values.front() = 0.0;
    const std::vector<double> ref(16, 1.0);
    const auto x = front_position(u, ref, 0.5);
    REQUIRE(x.has_value());
    CHECK(std::abs(*x - 2.0 * std::log(0.5)) <= 0.01);

    const Stepper s(fisher(), g, 1.0 / 16, 1.0);
    for (int k = 0; k < 16; ++k) s.step(u);
    CHECK(u.values.front() == 0.0);
    CHECK(u.values.back() == 1.0);

    const Field shifted = shift_window(u, -3, 0.5);
    CHECK(shifted.grid.axis(0).coordinate(0) == doctest::Approx(-23.0));
    CHECK(shifted.values[48] == u.values[0]);
    CHECK(shifted.values[32] == doctest::Approx(std::exp(-0.5) * shifted.values[48]));
    const Field right = shift_window(u, 2, 0.0);
    CHECK(right.values[0] == u.values[32]);
    CHECK(right.values.back() == u.values.back());
}

TEST_CASE("recentering keeps a moving front inside the window") {
    const Grid g = Grid::line(1.0, 16, -20.0, 20.0, BoundaryRule::clamp_to_limits);
    Field u = constant_field(g, 0.0);
    for (std::size_t i = 1; i < g.size(); ++i) u.values[i] = g.coordinate(i)[0] > 10.0 ? 1.0 : 0.0;
    const Stepper s(fisher(), g, 1.0 / 16, 1.0);
    RecenterPolicy p{std::vector<double>(16, 1.0), 0.5, 25.0, 30.0, 0.0};
    const Trajectory tr = evolve(u, s, {10.0, {5.0, 10.0}, p});
    CHECK_FALSE(tr.recenters.empty());
    const auto x = front_position(tr.frames.back(), p.reference_by_phase, 0.5);
    REQUIRE(x.has_value());
    CHECK(*x - tr.frames.back().grid.axis(0).coordinate(0) >= 20.0);
    // started at 10; steep data lag behind 2t by a logarithmic shift
    CHECK(*x < 0.0);
    CHECK(*x > -15.0);
}

TEST_CASE("twin members share steps and recentering") {
    const Grid g = Grid::line(1.0, 16, -20.0, 20.0, BoundaryRule::clamp_to_limits);
    Field u = constant_field(g, 0.0);
    for (std::size_t i = 1; i < g.size(); ++i) u.values[i] = g.coordinate(i)[0] > 10.0 ? 1.0 : 0.0;
    const Stepper s(fisher(), g, 1.0 / 16, 1.0);
    RecenterPolicy p{std::vector<double>(16, 1.0), 0.5, 25.0, 30.0, 0.0};
    const auto runs = evolve_ensemble({u, u}, s, {8.0, {8.0}, p});
    CHECK(runs[0].frames.back().values == runs[1].frames.back().values);
    CHECK(runs[0].frames.back().grid.axis(0).first == runs[1].frames.back().grid.axis(0).first);
}

TEST_CASE("trajectory output round trip") {
    const Grid g = Grid::line(1.0, 8, -10.0, 12.0, BoundaryRule::clamp_to_limits)
                       .with_decay_tail(0.5, std::vector<double>(8, std::exp(-0.5 / 8)));
    Field u = constant_field(g, 0.25);
    const Stepper s(fisher(), g, 1.0 / 8, 1.0);
    const Trajectory tr = evolve(u, s, {1.0, {0.5, 1.0}, std::nullopt});
    const auto dir = std::filesystem::temp_directory_path() / "pulsewave_roundtrip";
    std::filesystem::create_directories(dir);
    const std::string stem = (dir / "traj").string();
    write_trajectory_binary(stem, tr);
    const Trajectory back = read_trajectory_binary(stem);
    REQUIRE(back.frames.size() == tr.frames.size());
    for (std::size_t k = 0; k < tr.frames.size(); ++k) {
        CHECK(back.frames[k].t == tr.frames[k].t);
        CHECK(back.frames[k].values == tr.frames[k].values);
        CHECK(back.frames[k].grid.same_shape(tr.frames[k].grid));
    }
    std::ostringstream csv;
    write_trajectory_csv(csv, tr);
    CHECK(csv.str().rfind("t,x,u\n0,-10,", 0) == 0);
}

TEST_CASE("decay tail boundary follows the imposed ratio") {
    const double r = std::exp(-0.5 / 16);
    const Grid g = Grid::line(1.0, 16, -30.0, 10.0).with_decay_tail(0.5, std::vector<double>(16, r));
    Field u = constant_field(g, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) u.values[i] = std::min(1.0, std::exp(0.5 * g.coordinate(i)[0]));
    const Stepper s(fisher(), g, 1.0 / 16, 1.0);
    for (int k = 0; k < 32; ++k) s.step(u);
    CHECK(u.values[0] == doctest::Approx(r * u.values[1]).epsilon(1e-14));
    CHECK(u.values[0] > 0.0);
    const std::size_t last = g.size() - 1;
    CHECK(u.values[last] == doctest::Approx(u.values[last - 1]).epsilon(1e-14));
}

TEST_CASE("decay tail upper end follows the plateau ratio") {
    std::vector<double> q(16);
    for (int k = 0; k < 16; ++k) q[static_cast<std::size_t>(k)] = 1.0 + 0.01 * k;
    const Grid g = Grid::line(1.0, 16, -10.0, 10.0).with_decay_tail(0.5, std::vector<double>(16, 0.9), q);
    Field u = constant_field(g, 0.5);
    const Stepper s(fisher(), g, 1.0 / 16, 1.0);
    for (int k = 0; k < 8; ++k) s.step(u);
    const std::size_t last = g.size() - 1;
    CHECK(u.values[last] == doctest::Approx(q[g.phase_index(last)] * u.values[last - 1]).epsilon(1e-14));
    CHECK(g.plateau_ratio() == q[g.phase_index(last)]);
}
