#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "riccati/quadrature.hpp"

using namespace riccati;

TEST_CASE("adaptive rule on smooth integrands") {
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-13));
    // Polynomials up to degree 29 are exact on a single panel.
    CHECK(integrate([](double x) { return 30.0 * std::pow(x, 29.0); }, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, -1.0, 1.0) ==
          doctest::Approx(M_PI / 2.0).epsilon(1e-13));
}

TEST_CASE("orientation and degenerate interval") {
    auto f = [](double x) { return x * x; };
    CHECK(integrate(f, 0.0, 2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(integrate(f, 2.0, 0.0) == doctest::Approx(-8.0 / 3.0).epsilon(1e-13));
    CHECK(integrate(f, 1.5, 1.5) == doctest::Approx(0.0));
}

TEST_CASE("integrable endpoint singularities are subdivided away") {
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10) ==
          doctest::Approx(2.0).epsilon(1e-8));
    CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0, 1e-10) ==
          doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("oscillatory integrand against a dense fixed-grid reference") {
    auto f = [](double x) { return std::sin(x * x); };
    const double reference = simpson(f, 0.0, 10.0, 400000);
    CHECK(integrate(f, 0.0, 10.0, 1e-11) == doctest::Approx(reference).epsilon(1e-9));
}

TEST_CASE("composite Simpson rule") {
    // Exact for cubics at any even n.
    CHECK(simpson([](double x) { return x * x * x; }, 0.0, 2.0, 2) ==
          doctest::Approx(4.0).epsilon(1e-14));
    CHECK(simpson([](double x) { return std::cos(x); }, 0.0, 1.0, 200) ==
          doctest::Approx(std::sin(1.0)).epsilon(1e-9));
    // Fourth-order convergence: quadrupling n shrinks the error ~256x.
    auto g = [](double x) { return std::exp(-x) * std::sin(3.0 * x); };
    const double exact = (3.0 - std::exp(-2.0) * (std::sin(6.0) * 1.0 + 3.0 * std::cos(6.0))) / 10.0;
    const double e1 = std::abs(simpson(g, 0.0, 2.0, 8) - exact);
    const double e2 = std::abs(simpson(g, 0.0, 2.0, 32) - exact);
    CHECK(e2 < e1 / 100.0);
    CHECK_THROWS_AS(simpson([](double x) { return x; }, 0.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(simpson([](double x) { return x; }, 0.0, 1.0, 0), std::invalid_argument);
}
