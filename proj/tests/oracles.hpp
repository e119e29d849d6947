// Independent reference computations used to pin expected test values.
// Everything here is deliberately separate from the library's own code paths:
// closed-form polynomials, rotated-grid sampling, finite differences.
#ifndef RFNET_TESTS_ORACLES_HPP
#define RFNET_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "rfnet/scalespace.hpp"

namespace oracles {

// Explicit physicists' Hermite polynomials up to order 4.
inline double hermite_closed_form(int m, double x) {
    switch (m) {
        case 0: return 1.0;
        case 1: return 2.0 * x;
        case 2: return 4.0 * x * x - 2.0;
        case 3: return 8.0 * x * x * x - 12.0 * x;
        case 4: return 16.0 * x * x * x * x - 48.0 * x * x + 12.0;
        default: return NAN;
    }
}

// Standard normal density scaled to sigma, and its derivatives, closed form.
inline double gauss_density(double sigma, double t) {
    return std::exp(-0.5 * t * t / (sigma * sigma)) / (sigma * std::sqrt(2.0 * M_PI));
}
inline double gauss_d1(double sigma, double t) { return -t / (sigma * sigma) * gauss_density(sigma, t); }
inline double gauss_d2(double sigma, double t) {
    const double s2 = sigma * sigma;
    return (t * t - s2) / (s2 * s2) * gauss_density(sigma, t);
}
inline double gauss_d3(double sigma, double t) {
    const double s2 = sigma * sigma;
    return (3.0 * s2 * t - t * t * t) / (s2 * s2 * s2) * gauss_density(sigma, t);
}
inline double gauss_dm(int m, double sigma, double t) {
    switch (m) {
        case 0: return gauss_density(sigma, t);
        case 1: return gauss_d1(sigma, t);
        case 2: return gauss_d2(sigma, t);
        case 3: return gauss_d3(sigma, t);
        default: return NAN;
    }
}

// Correlation-oriented continuous 2D derivative: the function whose integer
// samples the library stores for (order_x, order_y). Mirrored in both axes
// relative to the analytic derivative.
inline double corr_deriv_2d(int order_x, int order_y, double sigma, double x, double y) {
    return gauss_dm(order_x, sigma, -x) * gauss_dm(order_y, sigma, -y);
}

// The base derivative rotated by theta, sampled on the integer grid:
// value at (x, y) is the base function at R_theta (x, y).
inline rfnet::Kernel2D rotated_grid_sample(int order_x, int order_y, double sigma, double theta,
                                           int radius) {
    rfnet::Kernel2D k;
    k.order_x = order_x;
    k.order_y = order_y;
    k.sigma = sigma;
    k.radius = radius;
    k.taps.resize(static_cast<size_t>(k.side()) * k.side());
    const double c = std::cos(theta), s = std::sin(theta);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            const double xr = dx * c - dy * s;
            const double yr = dx * s + dy * c;
            k.tap(dy, dx) = corr_deriv_2d(order_x, order_y, sigma, xr, yr);
        }
    return k;
}

inline double max_abs_diff(const rfnet::Kernel2D& a, const rfnet::Kernel2D& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.taps.size(); ++i) m = std::max(m, std::abs(a.taps[i] - b.taps[i]));
    return m;
}

// Central finite difference d/dt f at t.
inline double central_diff(const std::function<double(double)>& f, double t, double h = 1e-5) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace oracles

#endif
