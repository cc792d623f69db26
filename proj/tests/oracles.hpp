#pragma once

// Independent reference implementations used only by the tests: a classical
// RK4 integrator, Richardson-extrapolated central differences, composite
// Simpson quadrature, and a brute-force one-dimensional optimal-transport
// distance. Everything here is deliberately written from scratch (no library
// headers beyond the standard library) so library results are checked against
// arithmetic that shares no code with them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Classical fixed-step RK4 for the autonomous scalar ODE x' = f(x).
inline double rk4(const std::function<double(double)>& f, double x0, double t1,
                  std::size_t n_steps) {
    double x = x0;
    const double h = t1 / static_cast<double>(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double k1 = f(x);
        const double k2 = f(x + 0.5 * h * k1);
        const double k3 = f(x + 0.5 * h * k2);
        const double k4 = f(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

// Central first derivative with one Richardson step: error O(h^4).
inline double diff1(const std::function<double(double)>& f, double x, double h) {
    const double d_h = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d_h2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
}

// Central second derivative with one Richardson step.
inline double diff2(const std::function<double(double)>& f, double x, double h) {
    const auto stencil = [&](double s) {
        return (f(x + s) - 2.0 * f(x) + f(x - s)) / (s * s);
    };
    return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
}

// Plain central stencils for the third and fourth derivative (error O(h^2)).
inline double diff3(const std::function<double(double)>& f, double x, double h) {
    return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) /
           (2.0 * h * h * h);
}

inline double diff4(const std::function<double(double)>& f, double x, double h) {
    return (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) +
            f(x - 2.0 * h)) /
           (h * h * h * h);
}

// Composite Simpson with n (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("simpson: n must be even >= 2");
    const double h = (b - a) / static_cast<double>(n);
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < n; i += 2) odd += f(a + h * static_cast<double>(i));
    for (std::size_t i = 2; i < n; i += 2) even += f(a + h * static_cast<double>(i));
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

// Exact first Wasserstein distance between two empirical measures on the line
// under the ground metric |g(x) - g(y)|, by integrating the gap between the
// two empirical quantile functions over the merged probability breakpoints.
// Brute force, intended for small samples.
inline double wasserstein_1d(std::vector<double> a, std::vector<double> b,
                             const std::function<double(double)>& g) {
    if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein: empty sample");
    for (auto& x : a) x = g(x);
    for (auto& x : b) x = g(x);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();
    double total = 0.0, p = 0.0;
    std::size_t i = 0, j = 0;  // current quantile segments of a and b
    while (i < n && j < m) {
        const double pa = static_cast<double>(i + 1) / static_cast<double>(n);
        const double pb = static_cast<double>(j + 1) / static_cast<double>(m);
        const double q = std::min(pa, pb);
        total += (q - p) * std::abs(a[i] - b[j]);
        p = q;
        if (pa <= q) ++i;
        if (pb <= q) ++j;
    }
    return total;
}

// Deterministic pseudo-random doubles for building fixed test fixtures
// (xorshift-mixed counter; not the library generator).
inline double fixture_uniform(std::uint64_t& state) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
}

}  // namespace oracles
