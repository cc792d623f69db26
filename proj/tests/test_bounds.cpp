#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "riccati/bound_functions.hpp"
#include "riccati/family.hpp"
#include "riccati/flow.hpp"
#include "riccati/params.hpp"

using namespace riccati;

namespace {
ModelParams make(double A, double R, double S, double U, double V, double eps) {
    ModelParams p;
    p.A = A;
    p.R = R;
    p.S = S;
    p.U = U;
    p.V = V;
    p.eps = eps;
    return p;
}
}  // namespace

TEST_CASE("noiseless envelopes at the symmetric unit system") {
    // A=0, R=S=U=1, V=0, eps=0: varpi=2, varpi_minus=-1, lambda=2, and every
    // modified flow collapses onto the base one, so the envelopes reduce to
    // small rationals (v = 2n, w = 34 and w_bar = 512 at x=1, n=1).
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.0);
    CHECK(bound_v(p, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(bound_v(p, 0.0, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(bound_v(p, 1.0, 3.0) == doctest::Approx(6.0).epsilon(1e-14));
    const BoundFunctions b = bound_functions(p, 1.0, 1.0);
    CHECK(b.v == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b.w == doctest::Approx(34.0).epsilon(1e-13));
    CHECK(b.w_bar == doctest::Approx(512.0).epsilon(1e-13));
    CHECK(b.rho == doctest::Approx(2.0 * std::exp(6.0)).epsilon(1e-13));
}

TEST_CASE("exponential-moment prefactor") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.2);
    // Above the floor the formula is (1 + varpi_plus/x)^(1+iota) e^(3 lambda).
    CHECK(bound_rho(p, 2.0, 1.0) == doctest::Approx(1.5 * std::exp(6.0)).epsilon(1e-14));
    CHECK(bound_rho(p, 1.0, 1.0) == doctest::Approx(2.0 * std::exp(6.0)).epsilon(1e-14));
    // Below the floor it plateaus at the x = 0 supremum, computed from the
    // time-one image of the order -1 modified flow.
    const double floor_val =
        phi(1.0, 0.0, family(p, FamilyVariant::modified, -1.0).derived);
    CHECK(floor_val > 0.7);
    CHECK(floor_val < 0.8);
    CHECK(bound_rho(p, 0.0, 1.0) ==
          doctest::Approx((1.0 + 1.0 / floor_val) * std::exp(6.0)).epsilon(1e-13));
    CHECK(bound_rho(p, 0.5 * floor_val, 1.0) == doctest::Approx(bound_rho(p, 0.0, 1.0)));

    // Monotone: decreasing in x, increasing in the index and the noise.
    double prev = bound_rho(p, 0.0, 1.0);
    for (double x : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double cur = bound_rho(p, x, 1.0);
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK(bound_rho(p, 0.0, 2.0) >= bound_rho(p, 0.0, 1.0));
    CHECK(bound_rho(make(0.0, 1.0, 1.0, 1.0, 0.0, 0.4), 0.0, 1.0) >=
          bound_rho(p, 0.0, 1.0));
}

TEST_CASE("envelopes grow with the start point, the order and the noise") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.2);
    double prev_v = -1.0, prev_wbar = -1.0;
    for (double x : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        const BoundFunctions b = bound_functions(p, x == 0.0 ? 1e-6 : x, 2.0);
        CHECK(b.v > 0.0);
        CHECK(b.w > 0.0);
        CHECK(b.w_bar > 0.0);
        CHECK(b.v >= prev_v);
        CHECK(b.w_bar >= prev_wbar);
        prev_v = b.v;
        prev_wbar = b.w_bar;
    }
    CHECK(bound_v(p, 1.0, 1.0) <= bound_v(p, 1.0, 2.0));
    CHECK(bound_v(p, 1.0, 2.0) <= bound_v(p, 1.0, 4.0));
    CHECK(bound_v(p, 1.0, 2.0) <= bound_v(make(0.0, 1.0, 1.0, 1.0, 0.0, 0.3), 1.0, 2.0));
}

TEST_CASE("mixed-noise envelopes are finite and positive away from zero") {
    const ModelParams p = make(0.4, 1.2, 0.8, 0.6, 0.5, 0.2);
    const BoundFunctions b = bound_functions(p, 0.7, 2.0);
    CHECK(std::isfinite(b.v));
    CHECK(std::isfinite(b.w));
    CHECK(std::isfinite(b.w_bar));
    CHECK(std::isfinite(b.rho));
    CHECK(b.v > 0.0);
    CHECK(b.w > 0.0);
    CHECK(b.w_bar > 0.0);
    CHECK(b.rho > 1.0);
    // Pure-V systems accept x = 0 (no reciprocal-flow term).
    CHECK(std::isfinite(bound_functions(make(0.0, 1.0, 1.0, 0.0, 1.0, 0.1), 0.0, 1.0).w));
}

TEST_CASE("envelope preconditions") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.2);
    CHECK_THROWS_AS(bound_v(p, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(bound_functions(p, 1.0, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(bound_functions(p, -1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_rho(p, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_rho(p, -0.5, 1.0), std::invalid_argument);
    // The interior modified families (orders up to 12n) must be well-founded.
    CHECK_THROWS_AS(bound_functions(make(0.0, 1.0, 1.0, 1.0, 1.0, 0.5), 1.0, 2.0),
                    std::invalid_argument);
    // With U > 0 the reciprocal-flow supremum needs a strictly positive start.
    CHECK_THROWS_AS(bound_functions(p, 0.0, 1.0), std::invalid_argument);
}
