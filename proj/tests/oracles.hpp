#pragma once

// Closed-form references shared by the unit tests.

#include "abq/grid.hpp"

#include <cmath>
#include <numbers>

namespace oracle {

// Boosted free Gaussian: the k = 0 spreading packet translated by k t, times
// the plane wave e^{i (k x - k^2 t / 2)}. At t = 0 it matches gaussian_packet.
inline abq::cplx free_gaussian_1d(double x, double x0, double sigma, double k, double t) {
    using abq::cplx;
    const cplx s(sigma * sigma, t / 2.0);
    const double u = x - x0 - k * t;
    const cplx envelope = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) *
                          std::sqrt(sigma * sigma / s) * std::exp(-u * u / (4.0 * s));
    return envelope * std::polar(1.0, k * x - 0.5 * k * k * t);
}

inline double spread_sigma(double sigma, double t) {
    return sigma * std::sqrt(1.0 + std::pow(t / (2.0 * sigma * sigma), 2));
}

}  // namespace oracle
