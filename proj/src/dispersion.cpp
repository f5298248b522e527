#include "pulsewave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pulsewave/errors.hpp"
#include "pulsewave/parallel.hpp"

namespace pulsewave {

namespace {

EigenResult solve(const Medium& medium, const Grid& grid, double lambda, double c, const DispersionSettings& s) {
    if (!medium.time_dependent()) return principal_eig(assemble_twisted(grid, medium, lambda, c), s.eigen);
    const double period = *medium.time_period();
    const FloquetResult f = principal_eig_floquet(medium, grid, lambda, c, s.floquet_dt.value_or(period / 1024.0), s.eigen);
    EigenResult out;
    out.eigenvalue = f.eigenvalue;
    out.eigenfunction = f.eigenfunction;
    out.iterations = f.iterations;
    return out;
}

struct Sample {
    double lambda;
    double mu0;
    double residual;
    double speed() const { return -mu0 / lambda; }
};

Sample sample(const Medium& medium, const Grid& grid, double lambda, const DispersionSettings& s) {
    const EigenResult r = solve(medium, grid, lambda, 0.0, s);
    return {lambda, r.eigenvalue, r.residual};
}

const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

// Golden-section minimum of c(λ) on [a, b].
Sample golden(const Medium& medium, const Grid& grid, double a, double b, const DispersionSettings& s,
              double& max_residual) {
    auto eval = [&](double l) {
        Sample x = sample(medium, grid, l, s);
        max_residual = std::max(max_residual, x.residual);
        return x;
    };
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    Sample f1 = eval(x1);
    Sample f2 = eval(x2);
    while (b - a > s.relative_width * 0.5 * (a + b)) {
        if (f1.speed() <= f2.speed()) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        }
    }
    return f1.speed() <= f2.speed() ? f1 : f2;
}

std::vector<Sample> scan(const Medium& medium, const Grid& grid, double lo, double hi, int points,
                         bool logarithmic, const DispersionSettings& s) {
    std::vector<Sample> out(static_cast<std::size_t>(points));
    parallel_for(out.size(), s.workers, [&](std::size_t i) {
        const double t = static_cast<double>(i) / (points - 1);
        const double l = logarithmic ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
        out[i] = sample(medium, grid, l, s);
    });
    return out;
}

std::size_t argmin_speed(const std::vector<Sample>& v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i].speed() < v[k].speed()) k = i;
    return k;
}

DispersionCurve minimize(const Medium& medium, const Grid& grid, double lo, double hi, const DispersionSettings& s) {
    const std::vector<Sample> coarse = scan(medium, grid, lo, hi, s.scan_points, true, s);
    const std::size_t k = argmin_speed(coarse);
    if (k == 0 || k + 1 == coarse.size()) {
        std::ostringstream msg;
        msg << "c(lambda) is smallest at the end of [" << lo << ", " << hi << "] (lambda = " << coarse[k].lambda
            << "); widen the range";
        fail(ErrorKind::boundary_minimum, msg.str());
    }
    DispersionCurve curve;
    curve.lambda_lo = lo;
    curve.lambda_hi = hi;
    for (const Sample& x : coarse) {
        curve.lambda.push_back(x.lambda);
        curve.mu0.push_back(x.mu0);
        curve.c_of_lambda.push_back(x.speed());
        curve.max_residual = std::max(curve.max_residual, x.residual);
    }

    double a = coarse[k - 1].lambda;
    double b = coarse[k + 1].lambda;
    Sample best = golden(medium, grid, a, b, s, curve.max_residual);
    // Unimodality guard: the refinement must not land above the scan minimum.
    if (best.speed() > coarse[k].speed() + 1e-6 * std::abs(coarse[k].speed())) {
        const std::vector<Sample> fine = scan(medium, grid, a, b, 257, false, s);
        const std::size_t j = std::clamp<std::size_t>(argmin_speed(fine), 1, fine.size() - 2);
        best = golden(medium, grid, fine[j - 1].lambda, fine[j + 1].lambda, s, curve.max_residual);
        for (const Sample& x : fine) curve.max_residual = std::max(curve.max_residual, x.residual);
    }
    if (coarse[k].speed() < best.speed()) best = coarse[k];
    curve.c_star = best.speed();
    curve.lambda_star = best.lambda;
    return curve;
}

}  // namespace

double mu_c(const Medium& medium, const Grid& grid, double lambda, double c, const DispersionSettings& settings) {
    return solve(medium, grid, lambda, c, settings).eigenvalue;
}

double speed_of_lambda(const Medium& medium, const Grid& grid, double lambda, const DispersionSettings& settings) {
    if (lambda < 1e-6) fail(ErrorKind::degenerate_lambda, "c(lambda) is undefined as lambda -> 0");
    return sample(medium, grid, lambda, settings).speed();
}

DispersionCurve minimal_speed(const Medium& medium, const Grid& grid, const DispersionSettings& settings) {
    if (!(settings.lambda_lo > 0.0) || !(settings.lambda_hi > settings.lambda_lo))
        fail(ErrorKind::invalid_argument, "lambda range must satisfy 0 < lo < hi");
    if (settings.scan_points < 3) fail(ErrorKind::invalid_argument, "scan needs at least 3 points");
    try {
        return minimize(medium, grid, settings.lambda_lo, settings.lambda_hi, settings);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::boundary_minimum || !settings.widen_once) throw;
    }
    return minimize(medium, grid, settings.lambda_lo / 4.0, settings.lambda_hi * 2.0, settings);
}

RootPair lambda_roots(const Medium& medium, const Grid& grid, double c, const DispersionCurve& curve,
                      const DispersionSettings& settings) {
    if (c <= curve.c_star + 1e-8) {
        std::ostringstream msg;
        msg << "speed " << c << " is not above c* = " << curve.c_star;
        fail(ErrorKind::subcritical_speed, msg.str());
    }
    // μ_c(λ) = μ_0(λ) + λ c; one eigen solve per λ.
    auto g = [&](double l) { return mu_c(medium, grid, l, 0.0, settings) + l * c; };
    auto bisect = [&](double a, double b) {
        double ga = g(a);
        const double gb = g(b);
        if (ga * gb > 0.0) {
            std::ostringstream msg;
            msg << "mu_c does not change sign on [" << a << ", " << b << "] at c = " << c;
            fail(ErrorKind::no_root_bracket, msg.str());
        }
        while (b - a > 1e-8) {
            const double m = 0.5 * (a + b);
            const double gm = g(m);
            if ((gm < 0.0) == (ga < 0.0)) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };
    RootPair out;
    out.lambda1 = bisect(curve.lambda_lo, curve.lambda_star);
    out.lambda2 = bisect(curve.lambda_star, curve.lambda_hi);
    out.mu_mid = g(0.5 * (out.lambda1 + out.lambda2));
    if (!(out.mu_mid > 0.0)) fail(ErrorKind::no_root_bracket, "mu_c is not positive between the roots");
    return out;
}

EigenResult front_eigenfunction(const Medium& medium, const Grid& grid, double c, double lambda,
                                const DispersionSettings& settings) {
    EigenResult r = solve(medium, grid, lambda, c, settings);
    if (std::abs(r.eigenvalue) > 1e-6) {
        std::ostringstream msg;
        msg << "mu_c(" << lambda << ") = " << r.eigenvalue << " at c = " << c << ", not on the dispersion curve";
        fail(ErrorKind::not_on_dispersion, msg.str());
    }
    return r;
}

}  // namespace pulsewave
