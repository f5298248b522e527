#include "doctest.h"

#include <cmath>

#include "pulsewave/dispersion.hpp"
#include "pulsewave/errors.hpp"
#include "support.hpp"

using namespace pulsewave;
using testing_media::fisher;
using testing_media::periodic_a;
using testing_media::periodic_mu;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::validation_error;
}

}  // namespace

TEST_CASE("homogeneous Fisher dispersion values") {
    const Grid g = Grid::periodic({1.0}, {64});
    const Medium m = fisher();
    CHECK(std::abs(mu_c(m, g, 1.0, 2.0)) <= 1e-10);
    CHECK(mu_c(m, g, 1.25, 2.5) == doctest::Approx(0.5625).epsilon(1e-10));
    CHECK(std::abs(mu_c(m, g, 0.5, 2.5)) <= 1e-10);
    CHECK(speed_of_lambda(m, g, 1.0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(speed_of_lambda(m, g, 0.5) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(speed_of_lambda(m, g, 2.0) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(kind_of([&] { speed_of_lambda(m, g, 1e-7); }) == ErrorKind::degenerate_lambda);
}

TEST_CASE("minimal speed, homogeneous families") {
    const Grid g = Grid::periodic({1.0}, {64});
    const DispersionCurve a = minimal_speed(fisher(), g);
    CHECK(a.c_star == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(a.lambda_star == doctest::Approx(1.0).epsilon(1e-3));
    const DispersionCurve b = minimal_speed(fisher(4.0), g);
    CHECK(b.c_star == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(b.lambda_star == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("curve invariants") {
    const Grid g = Grid::periodic({1.0}, {64});
    const DispersionCurve curve = minimal_speed(periodic_mu(), g);
    for (std::size_t i = 0; i < curve.lambda.size(); ++i) {
        CHECK(std::abs(curve.c_of_lambda[i] + curve.mu0[i] / curve.lambda[i]) <= 1e-10);
        CHECK(curve.c_of_lambda[i] >= curve.c_star);
    }
    CHECK(curve.max_residual <= 1e-9);
}

TEST_CASE("boundary minimum") {
    const Grid g = Grid::periodic({1.0}, {64});
    DispersionSettings s;
    s.lambda_lo = 2.0;
    s.lambda_hi = 6.0;
    s.widen_once = false;
    CHECK(kind_of([&] { minimal_speed(fisher(), g, s); }) == ErrorKind::boundary_minimum);
    s.widen_once = true;
    CHECK(minimal_speed(fisher(), g, s).c_star == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("root pair, homogeneous Fisher") {
    const Grid g = Grid::periodic({1.0}, {64});
    const DispersionCurve curve = minimal_speed(fisher(), g);
    const RootPair r = lambda_roots(fisher(), g, 2.5, curve);
    CHECK(r.lambda1 == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(r.lambda2 == doctest::Approx(2.0).epsilon(1e-7));
    const RootPair near = lambda_roots(fisher(), g, 2.0 + 1e-6, curve);
    CHECK(std::abs(near.lambda1 - 1.0) <= 2e-3);
    CHECK(std::abs(near.lambda2 - 1.0) <= 2e-3);
    CHECK(kind_of([&] { lambda_roots(fisher(), g, 1.9, curve); }) == ErrorKind::subcritical_speed);
    DispersionCurve narrow = curve;
    narrow.lambda_lo = 0.9;
    CHECK(kind_of([&] { lambda_roots(fisher(), g, 2.5, narrow); }) == ErrorKind::no_root_bracket);
}

TEST_CASE("property: sign pattern of mu_c and root consistency, periodic medium") {
    const Grid g = Grid::periodic({1.0}, {64});
    const Medium m = periodic_mu();
    const DispersionCurve curve = minimal_speed(m, g);
    for (double factor : {1.1, 1.25, 1.5}) {
        const double c = factor * curve.c_star;
        const RootPair r = lambda_roots(m, g, c, curve);
        CHECK(std::abs(mu_c(m, g, r.lambda1, c)) <= 1e-7);
        CHECK(std::abs(mu_c(m, g, r.lambda2, c)) <= 1e-7);
        CHECK(std::abs(speed_of_lambda(m, g, r.lambda1) - c) <= 1e-6);
        CHECK(std::abs(speed_of_lambda(m, g, r.lambda2) - c) <= 1e-6);
        for (int k = 1; k <= 16; ++k) {
            const double l = r.lambda1 + (r.lambda2 - r.lambda1) * k / 17.0;
            CHECK(mu_c(m, g, l, c) > 0.0);
        }
        CHECK(mu_c(m, g, r.lambda1 - 1e-3, c) < 0.0);
        CHECK(mu_c(m, g, r.lambda2 + 1e-3, c) < 0.0);
    }
    // critical tangency
    for (int k = 0; k < 64; ++k) {
        const double l = curve.lambda_lo * std::pow(curve.lambda_hi / curve.lambda_lo, k / 63.0);
        CHECK(mu_c(m, g, l, curve.c_star) <= 1e-6);
    }
}

TEST_CASE("property: affinity in c") {
    const Grid g = Grid::periodic({1.0}, {128});
    for (const Medium& m : {fisher(), periodic_mu(), periodic_a(0.5, 1.2)}) {
        for (double l : {0.1, 0.7, 1.9, 4.0}) {
            const double base = mu_c(m, g, l, 0.0);
            for (double c1 : {-2.0, 1.0, 3.5}) {
                for (double c2 : {0.0, 2.2}) {
                    CHECK(std::abs((mu_c(m, g, l, c1) - mu_c(m, g, l, c2)) - l * (c1 - c2)) <= 1e-10);
                }
            }
            (void)base;
        }
    }
}

TEST_CASE("grid convergence of c*") {
    const Medium m = periodic_a(0.5, 1.5);
    std::vector<double> cs;
    for (int n : {32, 64, 128}) cs.push_back(minimal_speed(m, Grid::periodic({1.0}, {n})).c_star);
    CHECK(std::abs(cs[0] - cs[1]) <= 4.0 * std::abs(cs[1] - cs[2]) * 1.0001 + 1e-12);
    CHECK(std::abs(cs[0] - cs[1]) >= 3.0 * std::abs(cs[1] - cs[2]));
}

TEST_CASE("front eigenfunction") {
    const Grid g = Grid::periodic({1.0}, {64});
    const EigenResult v = front_eigenfunction(fisher(), g, 2.5, 0.5);
    for (double x : v.eigenfunction) CHECK(x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kind_of([&] { front_eigenfunction(fisher(), g, 2.5, 1.0); }) == ErrorKind::not_on_dispersion);
    const DispersionCurve curve = minimal_speed(periodic_mu(), g);
    const EigenResult w = front_eigenfunction(periodic_mu(), g, curve.c_star, curve.lambda_star);
    CHECK(*std::min_element(w.eigenfunction.begin(), w.eigenfunction.end()) > 0.0);
    CHECK(w.residual <= 1e-9);
}
