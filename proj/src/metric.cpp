#include "riccati/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "riccati/quadrature.hpp"

namespace riccati {

namespace {

void require_positive(double x1, double x2, const char* who) {
    if (!(x1 > 0.0 && x2 > 0.0))
        throw std::invalid_argument(std::string(who) + ": strictly positive arguments required");
}

double sigma_hat_distance(double x1, double x2, double iota) {
    if (iota == 0.0) return std::abs(std::log(x1) - std::log(x2));
    // |x1^{-iota} - x2^{-iota}| / |iota|, evaluated through expm1 so the
    // small-iota regime degrades gracefully to the log-distance.
    const double l1 = std::log(x1);
    const double l2 = std::log(x2);
    return std::exp(-iota * l1) * std::abs(std::expm1(-iota * (l2 - l1))) / std::abs(iota);
}

}  // namespace

double metric_d(double x1, double x2, MetricKind which, const ModelParams& p) {
    switch (which) {
        case MetricKind::euclid:
            return std::abs(x1 - x2);
        case MetricKind::sigma_hat: {
            require_positive(x1, x2, "metric_d(sigma_hat)");
            return sigma_hat_distance(x1, x2, derive(p).iota);
        }
        case MetricKind::sigma_1: {
            require_positive(x1, x2, "metric_d(sigma_1)");
            if (!(p.U + p.V > 0.0))
                throw std::invalid_argument("metric_d(sigma_1): U + V > 0 required");
            if (p.V == 0.0)
                return 2.0 / std::sqrt(p.U) * std::abs(std::sqrt(x1) - std::sqrt(x2));
            if (p.U == 0.0)
                return 2.0 / std::sqrt(p.V) *
                       std::abs(1.0 / std::sqrt(x1) - 1.0 / std::sqrt(x2));
            if (x1 == x2) return 0.0;
            const double lo = std::min(x1, x2);
            const double hi = std::max(x1, x2);
            return integrate([&](double z) { return 1.0 / sigma1(p, z); }, lo, hi, 1e-10);
        }
    }
    throw std::invalid_argument("metric_d: unknown metric");
}

double metric_transform(double x, MetricKind which, const ModelParams& p) {
    switch (which) {
        case MetricKind::euclid:
            return x;
        case MetricKind::sigma_hat: {
            if (!(x > 0.0))
                throw std::invalid_argument("metric_transform(sigma_hat): x > 0 required");
            const double iota = derive(p).iota;
            if (iota == 0.0) return std::log(x);
            // Antiderivative of z^{-(1+iota)} pinned to 0 at z = 1.
            return -std::expm1(-iota * std::log(x)) / iota;
        }
        case MetricKind::sigma_1: {
            if (!(x > 0.0))
                throw std::invalid_argument("metric_transform(sigma_1): x > 0 required");
            if (!(p.U + p.V > 0.0))
                throw std::invalid_argument("metric_transform(sigma_1): U + V > 0 required");
            if (p.V == 0.0) return 2.0 / std::sqrt(p.U) * (std::sqrt(x) - 1.0);
            if (p.U == 0.0) return 2.0 / std::sqrt(p.V) * (1.0 - 1.0 / std::sqrt(x));
            if (x == 1.0) return 0.0;
            const double sign = x > 1.0 ? 1.0 : -1.0;
            const double lo = std::min(x, 1.0);
            const double hi = std::max(x, 1.0);
            return sign *
                   integrate([&](double z) { return 1.0 / sigma1(p, z); }, lo, hi, 1e-10);
        }
    }
    throw std::invalid_argument("metric_transform: unknown metric");
}

}  // namespace riccati
