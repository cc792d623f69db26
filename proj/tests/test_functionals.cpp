#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "riccati/family.hpp"
#include "riccati/flow.hpp"
#include "riccati/functionals.hpp"
#include "riccati/params.hpp"
#include "riccati/potential.hpp"
#include "riccati/sim.hpp"

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

sde::SimConfig cfg_of(double dt, double T, std::size_t n, std::uint64_t seed,
                      std::size_t stride = 1) {
    sde::SimConfig cfg;
    cfg.dt = dt;
    cfg.horizon = T;
    cfg.n_paths = n;
    cfg.seed = seed;
    cfg.record_stride = stride;
    return cfg;
}
}  // namespace

TEST_CASE("exponential drift functional at a frozen equilibrium path") {
    // x stays at 1 for (0,1,1,*,0) with eps = 0, where dLambda = -2, so the
    // functional is exactly e^{-(t-s)} (trapezoid of a constant).
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.0);
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 1.0, cfg_of(0.1, 2.0, 3, 0));
    for (double t : {0.5, 1.0, 2.0}) {
        const std::vector<double> v = sde::exp_functional(ens, 0.0, t);
        for (double x : v) CHECK(x == doctest::Approx(std::exp(-t)).epsilon(1e-13));
    }
    const std::vector<double> mid = sde::exp_functional(ens, 0.5, 1.5);
    CHECK(mid[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("exponential drift functional equals half the log flow derivative") {
    const ModelParams p = make(0.9, 1.4, 0.8, 0.0, 0.0, 0.0);
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 0.3, cfg_of(1e-3, 1.0, 1, 0));
    const double expected = std::sqrt(phi_derivative(1, 1.0, 0.3, p));
    CHECK(sde::exp_functional(ens, 0.0, 1.0)[0] ==
          doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("exponential drift functional: multiplicativity, overrides, errors") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 1.0, 0.3);
    const sde::PathEnsemble ens =
        sde::simulate_riccati(p, 1.0, cfg_of(0.01, 1.0, 32, 7, 5));
    const std::vector<double> a = sde::exp_functional(ens, 0.0, 0.5);
    const std::vector<double> b = sde::exp_functional(ens, 0.5, 1.0);
    const std::vector<double> c = sde::exp_functional(ens, 0.0, 1.0);
    for (std::size_t i = 0; i < ens.n_paths; ++i)
        CHECK(a[i] * b[i] == doctest::Approx(c[i]).epsilon(1e-13));

    // Another system's drift derivative weights the same path.
    const ModelParams bar = family(p, FamilyVariant::bar, 1.0).derived;
    const std::vector<double> w = sde::exp_functional(ens, 0.0, 1.0, bar);
    const std::size_t m = ens.times.size();
    for (std::size_t i = 0; i < ens.n_paths; ++i) {
        double integral = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k)
            integral += 0.5 * (ens.times[k + 1] - ens.times[k]) *
                        (0.5 * drift_derivative(bar, ens.at(i, k)) +
                         0.5 * drift_derivative(bar, ens.at(i, k + 1)));
        CHECK(w[i] == doctest::Approx(std::exp(integral)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(sde::exp_functional(ens, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sde::exp_functional(ens, 0.0, 0.123), std::invalid_argument);

    // Blown-up rows propagate as NaN.
    sde::SimConfig raw = cfg_of(1e-2, 5.0, 64, 1, 100);
    raw.scheme = sde::Scheme::raw_euler;
    const ModelParams pb = make(20.0, 1.0, 1.0, 1.0, 1.0, 2.0 / std::sqrt(6.0));
    const sde::PathEnsemble blown = sde::simulate_riccati(pb, 1.0, raw);
    REQUIRE(blown.n_blown() > 0);
    const std::vector<double> vb = sde::exp_functional(blown, 0.0, 5.0);
    for (std::size_t i = 0; i < blown.n_paths; ++i)
        if (blown.blown(i)) CHECK(std::isnan(vb[i]));
}

TEST_CASE("tangent field at a frozen equilibrium path decays at the gap") {
    // H(1) = 2 for (0,1,1,1,0): the tangent field is exactly e^{-2t}.
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.0);
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 1.0, cfg_of(0.125, 1.0, 2, 0));
    const sde::FunctionalField field = sde::tangent_process(ens);
    CHECK(field.n_excluded == 0);
    REQUIRE(field.times.size() == ens.times.size());
    for (std::size_t k = 0; k < field.times.size(); ++k)
        CHECK(field.at(0, k) ==
              doctest::Approx(std::exp(-2.0 * field.times[k])).epsilon(1e-12));
    // Terminal variant is bit-identical to the last column.
    const std::vector<double> term = sde::tangent_terminal(ens);
    for (std::size_t i = 0; i < ens.n_paths; ++i)
        CHECK(term[i] == field.at(i, field.times.size() - 1));
}

TEST_CASE("noiseless tangent field reproduces the flow derivative") {
    const ModelParams p = make(0.5, 1.2, 0.9, 1.0, 0.5, 0.0);
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 0.4, cfg_of(1e-3, 1.5, 1, 0, 250));
    const sde::FunctionalField field = sde::tangent_process(ens);
    for (std::size_t k = 1; k < field.times.size(); ++k)
        CHECK(field.at(0, k) ==
              doctest::Approx(phi_derivative(1, field.times[k], 0.4, p)).epsilon(5e-3));

    // The conjugate field agrees with the same derivative at eps = 0 (the
    // conjugate system coincides with the base one and the two weights are
    // linked by the conjugate potential).
    const sde::FunctionalField conj = sde::tangent_process_conjugate(ens, p);
    for (std::size_t k = 1; k < conj.times.size(); ++k)
        CHECK(conj.at(0, k) ==
              doctest::Approx(phi_derivative(1, conj.times[k], 0.4, p)).epsilon(5e-3));
}

TEST_CASE("tangent fields: stochastic structure and exclusions") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.2);
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 1.0, cfg_of(1e-2, 1.0, 128, 9, 10));
    const sde::FunctionalField field = sde::tangent_process(ens);
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < field.n_paths; ++i) {
        if (field.excluded[i]) {
            ++flagged;
            CHECK(std::isnan(field.at(i, 1)));
            continue;
        }
        CHECK(field.at(i, 0) == doctest::Approx(1.0));  // weight ratio 1, no integral yet
        for (std::size_t k = 0; k < field.times.size(); ++k) CHECK(field.at(i, k) > 0.0);
    }
    CHECK(flagged == field.n_excluded);

    // Strong noise from a small start forces visits to the origin, which the
    // singular potential excludes.
    const ModelParams loud = make(0.0, 1.0, 1.0, 1.0, 0.0, 1.4);
    const sde::PathEnsemble tiny =
        sde::simulate_riccati(loud, 0.05, cfg_of(0.05, 0.5, 400, 2));
    const sde::FunctionalField lf = sde::tangent_process(tiny);
    CHECK(lf.n_excluded > 0);
    CHECK(lf.n_excluded < lf.n_paths);
    const std::vector<double> lt = sde::tangent_terminal(tiny);
    for (std::size_t i = 0; i < lf.n_paths; ++i) {
        if (lf.excluded[i])
            CHECK(std::isnan(lt[i]));
        else
            CHECK(lt[i] == lf.at(i, lf.times.size() - 1));
    }
}

TEST_CASE("conjugate field reconstructs from the recorded states") {
    const ModelParams base = make(0.4, 1.1, 0.9, 0.8, 0.6, 0.25);
    const ModelParams hat = family(base, FamilyVariant::hat, 1.0).derived;
    const sde::PathEnsemble ens = sde::simulate_riccati(hat, 0.7, cfg_of(0.02, 1.0, 24, 3, 5));
    const sde::FunctionalField field = sde::tangent_process_conjugate(ens, base);
    const std::vector<double> term = sde::tangent_conjugate_terminal(ens, base);
    const double iota1 = 1.0 + derive(base).iota;
    const std::size_t m = ens.times.size();
    for (std::size_t i = 0; i < ens.n_paths; ++i) {
        if (field.excluded[i]) {
            CHECK(std::isnan(term[i]));
            continue;
        }
        double integral = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k)
            integral += 0.5 * (ens.times[k + 1] - ens.times[k]) *
                        (potential_H_hat(base, ens.at(i, k)) +
                         potential_H_hat(base, ens.at(i, k + 1)));
        const double expected =
            std::pow(ens.at(i, m - 1) / 0.7, iota1) * std::exp(-integral);
        CHECK(field.at(i, m - 1) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(term[i] == field.at(i, m - 1));
    }
}

TEST_CASE("tangent preconditions") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.2);
    const sde::PathEnsemble from_zero = sde::simulate_riccati(p, 0.0, cfg_of(0.1, 0.5, 2, 0));
    CHECK_THROWS_AS(sde::tangent_process(from_zero), std::invalid_argument);
    CHECK_THROWS_AS(sde::tangent_terminal(from_zero), std::invalid_argument);
    const ModelParams no_noise_shape = make(0.0, 1.0, 1.0, 0.0, 0.0, 0.0);
    const sde::PathEnsemble plain =
        sde::simulate_riccati(no_noise_shape, 1.0, cfg_of(0.1, 0.5, 2, 0));
    CHECK_THROWS_AS(sde::tangent_process(plain), std::invalid_argument);
}
