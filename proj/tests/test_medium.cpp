#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "pulsewave/errors.hpp"
#include "pulsewave/medium.hpp"
#include "support.hpp"

using namespace pulsewave;
using testing_media::fisher;
using testing_media::periodic_mu;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

// f = u(1 − u + u²), tabulated on one period of x.
Medium cubic_tabulated() {
    const std::vector<double> xs = linspace(0.0, 0.875, 8);
    const std::vector<double> us = linspace(0.0, 2.0, 201);
    std::vector<double> f, fu;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (double u : us) {
            f.push_back(u * (1 - u + u * u));
            fu.push_back(1 - 2 * u + 3 * u * u);
        }
    }
    return Medium(DiffusionField::scalar(PeriodicFunction(1.0)), Nonlinearity::tabulated(xs, us, f, fu), {1.0});
}

}  // namespace

TEST_CASE("ellipticity estimates") {
    CHECK(validate_ellipticity(fisher()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(validate_ellipticity(testing_media::periodic_a(0.5)) == doctest::Approx(0.5).epsilon(1e-12));

    const Medium two_d(DiffusionField::diagonal(PeriodicFunction(2.0),
                                                PeriodicFunction(1.0, {{0.9, 1, 0, 0, Phase::sin}})),
                       Nonlinearity::kpp_logistic(PeriodicFunction(1.0)), {1.0, 1.0});
    CHECK(validate_ellipticity(two_d) == doctest::Approx(0.1).epsilon(1e-9));

    const Medium bad(DiffusionField::scalar(PeriodicFunction(0.5, {{1.0, 1, 0, 0, Phase::cos}})),
                     Nonlinearity::kpp_logistic(PeriodicFunction(1.0)), {1.0});
    CHECK_THROWS_AS(validate_ellipticity(bad), Error);
    try {
        validate_ellipticity(bad);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::non_elliptic);
    }
}

TEST_CASE("off-diagonal diffusion is rejected") {
    CHECK_THROWS_AS(DiffusionField::matrix(PeriodicFunction(1.0), PeriodicFunction(0.1), PeriodicFunction(1.0)),
                    Error);
    CHECK_NOTHROW(DiffusionField::matrix(PeriodicFunction(1.0), PeriodicFunction(0.0), PeriodicFunction(1.0)));
}

TEST_CASE("sublinearity") {
    const std::vector<double> grid = linspace(0.1, 1.0, 10);
    CHECK(check_sublinearity(fisher(), grid).holds);
    CHECK(check_sublinearity(periodic_mu(), grid).holds);

    const auto report = check_sublinearity(cubic_tabulated(), linspace(0.05, 1.0, 20));
    REQUIRE_FALSE(report.holds);
    REQUIRE(report.witness.has_value());
    // g(s) = 1 − s + s² turns upward at s = 0.5
    CHECK(report.witness->s == doctest::Approx(0.55).epsilon(0.1));
    CHECK(report.witness->s_next > report.witness->s);
}

TEST_CASE("bound M") {
    CHECK(check_bound_M(fisher(), 10.0) == doctest::Approx(1.0));
    CHECK(check_bound_M(periodic_mu(), 10.0) == doctest::Approx(1.5));
    CHECK(check_bound_M(fisher(2.0), 10.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(check_bound_M(fisher(20.0), 10.0), Error);
}

TEST_CASE("condition C") {
    const std::vector<double> us = linspace(0.05, 2.0, 40);
    std::vector<Point> xs;
    for (double x : linspace(0.0, 1.0, 33)) xs.push_back({x, 0.0});
    CHECK(check_condition_C(fisher(), us, xs));
    CHECK(check_condition_C(periodic_mu(), us, xs));

    const std::vector<double> xt = {0.0, 0.5};
    const std::vector<double> ut = {0.0, 1.0};
    const std::vector<double> f = {0.0, 1.0, 0.0, 1.0};
    const std::vector<double> fu = {1.0, 1.0, 1.0, 1.0};
    const Medium linear(DiffusionField::scalar(PeriodicFunction(1.0)), Nonlinearity::tabulated(xt, ut, f, fu), {1.0});
    CHECK_FALSE(check_condition_C(linear, us, xs));
}

TEST_CASE("kpp evaluation is exact") {
    const Medium m = periodic_mu();
    for (double x : linspace(0.0, 3.0, 13)) {
        const double mu = 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * x);
        for (double u : {0.0, 0.3, 1.7}) {
            CHECK(m.f({x, 0.0}, u) == doctest::Approx(u * (mu - u)).epsilon(1e-15));
            CHECK(m.f_u({x, 0.0}, u) == doctest::Approx(mu - 2 * u).epsilon(1e-15));
        }
    }
}

TEST_CASE("property: derivative bound, periodicity, determinism") {
    const std::vector<double> us = linspace(0.0, 2.0, 41);
    for (const Medium& m : {fisher(), periodic_mu(), testing_media::periodic_a(0.3, 1.5)}) {
        const SampleSet samples = sample_medium(m);
        CHECK(check_sublinearity(m, linspace(0.05, 2.0, 40), samples).holds);
        CHECK(derivative_excess(m, us, samples) <= 1e-10);
        for (const Point& x : samples.points) {
            for (double u : us) CHECK(std::abs(m.f({x[0] + 1.0, x[1]}, u) - m.f(x, u)) <= 1e-12);
        }
        const auto a = check_sublinearity(m, linspace(0.05, 2.0, 40), samples);
        const auto b = check_sublinearity(m, linspace(0.05, 2.0, 40), samples);
        CHECK(a.holds == b.holds);
    }
}

TEST_CASE("tabulated table rejects f(x,0) != 0") {
    const std::vector<double> xt = {0.0, 0.5};
    const std::vector<double> ut = {0.0, 1.0};
    CHECK_THROWS_AS(Nonlinearity::tabulated(xt, ut, {0.1, 1.0, 0.0, 1.0}, {1.0, 1.0, 1.0, 1.0}), Error);
}

TEST_CASE("time-periodic medium") {
    const Medium m(DiffusionField::scalar(PeriodicFunction(1.0)),
                   Nonlinearity::kpp_logistic(PeriodicFunction(1.0, {{0.3, 0, 0, 1, Phase::sin}})), {1.0}, 2.0);
    CHECK(m.time_dependent());
    CHECK(m.f_u({0.2, 0.0}, 0.0, 0.5) == doctest::Approx(1.3));
    CHECK(m.f_u({0.2, 0.0}, 0.0, 2.5) == doctest::Approx(1.3));
}
