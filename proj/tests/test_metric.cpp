#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "riccati/flow.hpp"
#include "riccati/metric.hpp"
#include "riccati/params.hpp"

using namespace riccati;

namespace {
ModelParams make(double A, double R, double S, double U, double V) {
    ModelParams p;
    p.A = A;
    p.R = R;
    p.S = S;
    p.U = U;
    p.V = V;
    return p;
}
}  // namespace

TEST_CASE("euclidean metric") {
    const ModelParams p = make(0.0, 1.0, 1.0, 0.0, 0.0);
    CHECK(metric_d(-2.0, 3.5, MetricKind::euclid, p) == doctest::Approx(5.5));
    CHECK(metric_transform(4.2, MetricKind::euclid, p) == doctest::Approx(4.2));
}

TEST_CASE("hat metric is the log-distance when the drift is centered") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(metric_d(std::exp(1.0), 1.0, MetricKind::sigma_hat, p) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(metric_transform(std::exp(2.0), MetricKind::sigma_hat, p) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(metric_d(0.0, 1.0, MetricKind::sigma_hat, p), std::invalid_argument);
    CHECK_THROWS_AS(metric_transform(-1.0, MetricKind::sigma_hat, p), std::invalid_argument);
}

TEST_CASE("hat metric power form") {
    const ModelParams p = make(1.0, 2.0, 3.0, 0.0, 0.0);
    const double iota = derive(p).iota;
    CHECK(iota == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-15));
    auto direct = [&](double x, double y) {
        return std::abs(std::pow(x, -iota) - std::pow(y, -iota)) / std::abs(iota);
    };
    for (auto [x, y] : {std::pair{2.0, 0.5}, {1.0, 7.0}, {0.2, 0.3}}) {
        CHECK(metric_d(x, y, MetricKind::sigma_hat, p) ==
              doctest::Approx(direct(x, y)).epsilon(1e-13));
        const double g1 = metric_transform(x, MetricKind::sigma_hat, p);
        const double g2 = metric_transform(y, MetricKind::sigma_hat, p);
        CHECK(std::abs(g1 - g2) ==
              doctest::Approx(metric_d(x, y, MetricKind::sigma_hat, p)).epsilon(1e-13));
    }
    CHECK(metric_transform(1.0, MetricKind::sigma_hat, p) == doctest::Approx(0.0));

    // Negative drift parameter flips the exponent's sign, not the distance's.
    const ModelParams pm = make(-1.0, 2.0, 3.0, 0.0, 0.0);
    CHECK(metric_d(2.0, 0.5, MetricKind::sigma_hat, pm) ==
          doctest::Approx(std::abs(std::pow(2.0, iota) - std::pow(0.5, iota)) / iota)
              .epsilon(1e-13));
}

TEST_CASE("hat metric degrades gracefully to the log-distance at small iota") {
    const ModelParams tiny = make(1e-9, 1.0, 1.0, 0.0, 0.0);
    CHECK(metric_d(3.0, 0.2, MetricKind::sigma_hat, tiny) ==
          doctest::Approx(std::log(3.0 / 0.2)).epsilon(1e-7));
    CHECK(metric_transform(5.0, MetricKind::sigma_hat, tiny) ==
          doctest::Approx(std::log(5.0)).epsilon(1e-7));
}

TEST_CASE("diffusion metric closed forms") {
    const ModelParams pu = make(0.0, 1.0, 1.0, 4.0, 0.0);
    CHECK(metric_d(4.0, 1.0, MetricKind::sigma_1, pu) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(metric_transform(9.0, MetricKind::sigma_1, pu) ==
          doctest::Approx(2.0).epsilon(1e-14));

    const ModelParams pv = make(0.0, 1.0, 1.0, 0.0, 4.0);
    CHECK(metric_d(1.0, 4.0, MetricKind::sigma_1, pv) ==
          doctest::Approx(0.5).epsilon(1e-14));  // |1 - 1/2| = 1/2, times 2/sqrt(4)
    CHECK(metric_transform(4.0, MetricKind::sigma_1, pv) ==
          doctest::Approx(0.5).epsilon(1e-14));

    CHECK_THROWS_AS(metric_d(1.0, 2.0, MetricKind::sigma_1, make(0.0, 1.0, 1.0, 0.0, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(metric_d(0.0, 2.0, MetricKind::sigma_1, pu), std::invalid_argument);
    CHECK_THROWS_AS(metric_transform(0.0, MetricKind::sigma_1, pu), std::invalid_argument);
}

TEST_CASE("diffusion metric, mixed case, agrees with direct quadrature") {
    const ModelParams p = make(0.5, 1.0, 1.0, 2.0, 3.0);
    auto inv_sigma = [&](double z) { return 1.0 / sigma1(p, z); };
    for (auto [x, y] : {std::pair{0.5, 3.0}, {1.0, 1.7}, {0.05, 0.6}}) {
        const double oracle = oracles::simpson(inv_sigma, x, y, 20000);
        CHECK(metric_d(x, y, MetricKind::sigma_1, p) ==
              doctest::Approx(oracle).epsilon(1e-9));
        CHECK(metric_d(y, x, MetricKind::sigma_1, p) ==
              doctest::Approx(oracle).epsilon(1e-9));  // symmetry
        const double g1 = metric_transform(x, MetricKind::sigma_1, p);
        const double g2 = metric_transform(y, MetricKind::sigma_1, p);
        CHECK(std::abs(g2 - g1) == doctest::Approx(oracle).epsilon(1e-8));
    }
    CHECK(metric_d(1.3, 1.3, MetricKind::sigma_1, p) == doctest::Approx(0.0));
    CHECK(metric_transform(1.0, MetricKind::sigma_1, p) == doctest::Approx(0.0));
    // Additivity along the line.
    const double d_ab = metric_d(0.4, 1.1, MetricKind::sigma_1, p);
    const double d_bc = metric_d(1.1, 2.9, MetricKind::sigma_1, p);
    const double d_ac = metric_d(0.4, 2.9, MetricKind::sigma_1, p);
    CHECK(d_ac == doctest::Approx(d_ab + d_bc).epsilon(1e-9));
}

TEST_CASE("transforms are strictly increasing") {
    const ModelParams p = make(0.7, 1.2, 0.9, 1.5, 0.4);
    for (MetricKind k : {MetricKind::sigma_hat, MetricKind::sigma_1, MetricKind::euclid}) {
        double prev = metric_transform(0.05, k, p);
        for (double x = 0.1; x < 20.0; x *= 1.7) {
            const double cur = metric_transform(x, k, p);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("deterministic flow contracts the hat metric at the spectral gap") {
    // d(phi_t(x), phi_t(y)) <= exp(-lambda t) d(x, y), with equality in the
    // linearization at the attracting equilibrium.
    const ModelParams sets[] = {make(0.0, 1.0, 1.0, 0.0, 0.0), make(1.0, 2.0, 3.0, 0.0, 0.0),
                                make(-0.7, 0.8, 1.6, 0.0, 0.0)};
    for (const ModelParams& p : sets) {
        const DerivedParams d = derive(p);
        for (auto [x, y] : {std::pair{0.3, 5.0}, {1.0, 2.0}, {0.05, 0.4}}) {
            const double d0 = metric_d(x, y, MetricKind::sigma_hat, p);
            for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
                const double dt =
                    metric_d(phi(t, x, p), phi(t, y, p), MetricKind::sigma_hat, p);
                CHECK(dt <= std::exp(-d.lambda * t) * d0 * (1.0 + 1e-12));
            }
        }
        // Sharpness at the fixed point.
        const double a = d.varpi_plus * (1.0 - 1e-5);
        const double b = d.varpi_plus * (1.0 + 1e-5);
        const double ratio = metric_d(phi(1.0, a, p), phi(1.0, b, p), MetricKind::sigma_hat, p) /
                             metric_d(a, b, MetricKind::sigma_hat, p);
        CHECK(ratio == doctest::Approx(std::exp(-d.lambda)).epsilon(1e-4));
    }
}
