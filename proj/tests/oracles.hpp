#pragma once

#include <cmath>
#include <functional>

#include <hitchin/theta.hpp>

// Independent reference computations used by the tests.
namespace hitchin::oracle {

// theta(z) = (1 / prod_{i>=1} (1 - q^i)) sum_n (-1)^n q^{n(n-1)/2} z^n
inline cplx theta_series(cplx q, cplx z) {
    cplx sum = 0.0;
    for (int n = -60; n <= 60; ++n) {
        const double e = 0.5 * n * (n - 1.0);
        sum += (n % 2 ? -1.0 : 1.0) * std::exp(e * std::log(q)) * std::pow(z, n);
    }
    cplx euler = 1.0;
    for (int i = 1; i < 400; ++i) euler *= 1.0 - std::pow(q, i);
    return sum / euler;
}

// lim_{tau -> 0} (1/tau^2 + D L(e^tau)), two Richardson levels
inline cplx wp_constant_richardson(const ThetaContext &ctx) {
    auto g = [&](double tau) { return 1.0 / (tau * tau) + ctx.logderiv_d(std::exp(cplx(tau)), 1); };
    const double h = 0.02;
    const cplx g1 = g(h), g2 = g(h / 2), g3 = g(h / 4);
    const cplx r1 = (4.0 * g2 - g1) / 3.0, r2 = (4.0 * g3 - g2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

// D^k f at x by the Cauchy integral of s -> f(x e^s) on a small circle
inline cplx euler_fd(const std::function<cplx(cplx)> &f, cplx x, int k, double radius = 0.02, int nodes = 64) {
    const double pi = 3.14159265358979323846;
    cplx acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const cplx s = std::polar(radius, 2 * pi * j / nodes);
        acc += f(x * std::exp(s)) / std::pow(s, k);
    }
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return fact * acc / static_cast<double>(nodes);
}

} // namespace hitchin::oracle
