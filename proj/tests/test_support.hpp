#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "nslit/gaussian.hpp"

namespace nslit::test {

/// Composite trapezoid rule on [a, b] with n intervals.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + h * i);
    return s * h;
}

inline std::complex<double> trapezoid_c(const std::function<std::complex<double>(double)>& f, double a,
                                        double b, int n) {
    const double h = (b - a) / n;
    std::complex<double> s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + h * i);
    return s * h;
}

/// Micrometre-scale chirped packet with random parameters.
inline ChirpedGaussian random_packet(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double sigma = (2.0 + 8.0 * u(rng)) * 1e-6;
    ChirpedGaussian p;
    p.alpha = 1.0 / (4.0 * sigma * sigma);
    p.beta = (2.0 * u(rng) - 1.0) * p.alpha;
    p.center = (2.0 * u(rng) - 1.0) * 20e-6;
    p.wave_number = (2.0 * u(rng) - 1.0) * 2e5;
    p.amplitude = std::polar(0.5 + u(rng), 6.28 * u(rng));
    return p;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    return std::abs(got - want) / std::abs(want);
}

}  // namespace nslit::test
