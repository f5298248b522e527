#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "pulsewave/medium.hpp"

namespace testing_media {

using namespace pulsewave;

inline Medium fisher(double mu = 1.0) {
    return Medium(DiffusionField::scalar(PeriodicFunction(1.0)),
                  Nonlinearity::kpp_logistic(PeriodicFunction(mu)), {1.0});
}

// μ(x) = 1 + amp sin(2πx/L)
inline Medium periodic_mu(double amp = 0.5, double period = 1.0) {
    return Medium(DiffusionField::scalar(PeriodicFunction(1.0)),
                  Nonlinearity::kpp_logistic(PeriodicFunction(1.0, {{amp, 1, 0, 0, Phase::sin}})),
                  {period});
}

// a(x) = 1 + amp cos(2πx/L), μ ≡ mu
inline Medium periodic_a(double amp = 0.5, double mu = 1.0, double period = 1.0) {
    return Medium(DiffusionField::scalar(PeriodicFunction(1.0, {{amp, 1, 0, 0, Phase::cos}})),
                  Nonlinearity::kpp_logistic(PeriodicFunction(mu)), {period});
}

// Largest real part among the eigenvalues of a dense matrix.
inline double dense_max_real(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    return es.eigenvalues().real().maxCoeff();
}

inline double dense_min_real(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    return es.eigenvalues().real().minCoeff();
}

}  // namespace testing_media
