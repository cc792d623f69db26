#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "riccati/flow.hpp"
#include "riccati/params.hpp"
#include "riccati/sim.hpp"

using namespace riccati;

namespace {
ModelParams make(double A, double R, double S, double U, double V, double eps,
                 double eps_bar = 0.0) {
    ModelParams p;
    p.A = A;
    p.R = R;
    p.S = S;
    p.U = U;
    p.V = V;
    p.eps = eps;
    p.eps_bar = eps_bar;
    return p;
}
}  // namespace

TEST_CASE("config validation") {
    sde::SimConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(sde::validate(cfg), std::invalid_argument);
    cfg.dt = 1e-3;
    cfg.horizon = 0.0;
    CHECK_THROWS_AS(sde::validate(cfg), std::invalid_argument);
    cfg.horizon = 1e-4;  // dt > horizon
    CHECK_THROWS_AS(sde::validate(cfg), std::invalid_argument);
    cfg.horizon = 1.0;
    cfg.n_paths = 0;
    CHECK_THROWS_AS(sde::validate(cfg), std::invalid_argument);
    cfg.n_paths = 4;
    cfg.record_stride = 0;
    CHECK_THROWS_AS(sde::validate(cfg), std::invalid_argument);
    cfg.record_stride = 1;
    CHECK_NOTHROW(sde::validate(cfg));
}

TEST_CASE("step grid ends exactly at the horizon") {
    sde::SimConfig cfg;
    cfg.dt = 0.3;
    cfg.horizon = 1.0;
    CHECK(sde::step_count(cfg) == 4);  // 3 full steps + one of 0.1
    const std::vector<double> t1 = sde::record_times(cfg);
    REQUIRE(t1.size() == 5);
    CHECK(t1[1] == doctest::Approx(0.3));
    CHECK(t1[4] == doctest::Approx(1.0));

    cfg.dt = 0.1;
    cfg.record_stride = 3;
    const sde::detail::StepPlan plan = sde::detail::make_step_plan(cfg);
    CHECK(plan.n_steps == 10);
    CHECK(plan.dt_last == doctest::Approx(0.1));
    REQUIRE(plan.rec_steps.size() == 5);
    CHECK(plan.rec_steps.front() == 0);
    CHECK(plan.rec_steps[1] == 3);
    CHECK(plan.rec_steps.back() == 10);
    const std::vector<double> t2 = sde::record_times(cfg);
    CHECK(t2[1] == doctest::Approx(0.3));
    CHECK(t2.back() == doctest::Approx(1.0));

    cfg.dt = 0.25;
    cfg.record_stride = 1;
    CHECK(sde::step_count(cfg) == 4);  // exact division, no stub step
}

TEST_CASE("stepping rules") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 1.0);
    const double x = 0.1, h = 0.01, dw = -1.0;
    // Raw: untamed increment, no projection, may go negative.
    const double lam = drift(p, x);
    CHECK(sde::advance_state(p, sde::Scheme::raw_euler, x, h, dw) ==
          doctest::Approx(x + lam * h + sigma_eps(p, x) * dw).epsilon(1e-15));
    CHECK(sde::advance_state(p, sde::Scheme::raw_euler, x, h, dw) < 0.0);
    // Tamed: damped drift increment, projected to the half-line.
    CHECK(sde::advance_state(p, sde::Scheme::tamed_euler, x, h, dw) == 0.0);
    const double dw2 = 0.05;
    CHECK(sde::advance_state(p, sde::Scheme::tamed_euler, x, h, dw2) ==
          doctest::Approx(x + lam * h / (1.0 + h * std::abs(lam)) + sigma_eps(p, x) * dw2)
              .epsilon(1e-15));
    // Milstein adds (eps^2/4)(U + 3V x^2)(dw^2 - h) on top of the tamed step.
    const ModelParams pv = make(0.0, 1.0, 1.0, 0.5, 2.0, 0.3);
    const double tamed = sde::advance_state(pv, sde::Scheme::tamed_euler, 0.8, h, dw2);
    const double mil = sde::advance_state(pv, sde::Scheme::milstein_tamed, 0.8, h, dw2);
    CHECK(mil - tamed ==
          doctest::Approx(0.25 * 0.09 * (0.5 + 3.0 * 2.0 * 0.64) * (dw2 * dw2 - h))
              .epsilon(1e-12));
    // At eps = 0 the correction vanishes identically.
    const ModelParams p0 = make(0.0, 1.0, 1.0, 0.5, 2.0, 0.0);
    CHECK(sde::advance_state(p0, sde::Scheme::milstein_tamed, 0.8, h, dw) ==
          sde::advance_state(p0, sde::Scheme::tamed_euler, 0.8, h, dw));
}

TEST_CASE("noiseless ensemble follows the deterministic flow") {
    const ModelParams p = make(1.3, 0.7, 2.1, 0.0, 0.0, 0.0);
    sde::SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.horizon = 2.0;
    cfg.n_paths = 1;
    cfg.record_stride = 5000;
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 0.2, cfg);
    for (std::size_t k = 0; k < ens.times.size(); ++k)
        CHECK(ens.at(0, k) == doctest::Approx(phi(ens.times[k], 0.2, p)).epsilon(1e-3));
    CHECK(ens.n_blown() == 0);
}

TEST_CASE("ensembles are reproducible and path-seeded") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.2);
    sde::SimConfig cfg;
    cfg.dt = 1e-2;
    cfg.horizon = 0.5;
    cfg.n_paths = 16;
    cfg.seed = 11;
    const sde::PathEnsemble a = sde::simulate_riccati(p, 1.0, cfg);
    const sde::PathEnsemble b = sde::simulate_riccati(p, 1.0, cfg);
    CHECK(a.states == b.states);
    for (std::size_t k = 0; k < a.stream_ids.size(); ++k)
        CHECK(a.stream_ids[k] == 2 * k);
    sde::SimConfig other = cfg;
    other.seed = 12;
    CHECK(sde::simulate_riccati(p, 1.0, other).states != a.states);
    // Per-path start values land in row zero of each path.
    std::vector<double> x0s(cfg.n_paths);
    for (std::size_t i = 0; i < x0s.size(); ++i) x0s[i] = 0.1 * double(i + 1);
    const sde::PathEnsemble c = sde::simulate_riccati(p, x0s, cfg);
    for (std::size_t i = 0; i < x0s.size(); ++i) CHECK(c.at(i, 0) == x0s[i]);
    std::vector<double> wrong(cfg.n_paths + 1, 1.0);
    CHECK_THROWS_AS(sde::simulate_riccati(p, wrong, cfg), std::invalid_argument);
}

TEST_CASE("streaming interface reproduces the ensemble bit for bit") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 1.0, 0.2);
    sde::SimConfig cfg;
    cfg.dt = 1e-2;
    cfg.horizon = 1.0;
    cfg.n_paths = 64;
    cfg.seed = 5;
    cfg.record_stride = 10;
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 0.5, cfg);
    const std::size_t m = ens.times.size();
    std::size_t seen = 0;
    sde::simulate_riccati_stream(p, 0.5, cfg, 32, 48,
                                 [&](std::size_t path, const double* row, std::size_t len,
                                     double blow) {
                                     REQUIRE(len == m);
                                     for (std::size_t k = 0; k < len; ++k)
                                         CHECK(row[k] == ens.at(path, k));
                                     CHECK(std::isnan(blow));
                                     ++seen;
                                 });
    CHECK(seen == 16);
}

TEST_CASE("tamed paths stay on the half-line and track the mean-field mean") {
    // At the equilibrium of (0,1,1,1,0) the small-noise mean obeys
    // E[X] ~ 1 - (eps^2/8)(1 - e^{-2t})·... with stationary bias -eps^2/8;
    // at eps = 0.2 and t = 1 that is 0.99568 to first order.
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.2);
    sde::SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 1.0;
    cfg.n_paths = 20000;
    cfg.seed = 3;
    cfg.record_stride = 1000;
    const sde::PathEnsemble ens = sde::simulate_riccati(p, 1.0, cfg);
    CHECK(ens.n_blown() == 0);
    double sum = 0.0, minv = 1e300;
    const std::size_t last = ens.times.size() - 1;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        sum += ens.at(i, last);
        for (std::size_t k = 0; k <= last; ++k) minv = std::min(minv, ens.at(i, k));
    }
    CHECK(minv >= 0.0);
    CHECK(sum / cfg.n_paths == doctest::Approx(0.99568).epsilon(2.5e-3));
}

TEST_CASE("raw scheme blows up where the tamed scheme survives") {
    // Unstable-signal variance diffusion: strong noise near the equilibrium
    // at 2A lets the untamed increment overshoot into the one-way drift
    // spiral below zero.
    const ModelParams p = make(20.0, 1.0, 1.0, 1.0, 1.0, 2.0 / std::sqrt(6.0));
    sde::SimConfig cfg;
    cfg.dt = 1e-2;
    cfg.horizon = 5.0;
    cfg.n_paths = 200;
    cfg.seed = 1;
    cfg.record_stride = 100;
    cfg.scheme = sde::Scheme::raw_euler;
    const sde::PathEnsemble raw = sde::simulate_riccati(p, 1.0, cfg);
    CHECK(raw.n_blown() > 0);
    bool nan_after_blowup = false;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        if (!raw.blown(i)) continue;
        CHECK(raw.blowup_time[i] >= 0.0);
        CHECK(raw.blowup_time[i] <= 5.0);
        nan_after_blowup = nan_after_blowup || std::isnan(raw.at(i, raw.times.size() - 1));
    }
    CHECK(nan_after_blowup);
    cfg.scheme = sde::Scheme::tamed_euler;
    const sde::PathEnsemble tamed = sde::simulate_riccati(p, 1.0, cfg);
    CHECK(tamed.n_blown() == 0);
    cfg.scheme = sde::Scheme::milstein_tamed;
    CHECK(sde::simulate_riccati(p, 1.0, cfg).n_blown() == 0);
}

TEST_CASE("common-noise pair is ordered and collapses at equal starts") {
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 1.0, 0.3);
    sde::SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 2.0;
    cfg.n_paths = 256;
    cfg.seed = 21;
    cfg.record_stride = 100;
    const sde::CoupledPair pair = sde::simulate_coupled_pair(p, 0.2, 2.5, cfg);
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
        for (std::size_t k = 0; k < pair.first.times.size(); ++k)
            CHECK(pair.first.at(i, k) <= pair.second.at(i, k));
    const sde::CoupledPair same = sde::simulate_coupled_pair(p, 1.0, 1.0, cfg);
    CHECK(same.first.states == same.second.states);
    // The pair shares the single-ensemble noise: component one reproduces it.
    const sde::PathEnsemble solo = sde::simulate_riccati(p, 0.2, cfg);
    CHECK(solo.states == pair.first.states);
}

TEST_CASE("coupled linear component contracts at the equilibrium gap rate") {
    // x frozen at the equilibrium of (0,1,1,*,0): dLambda/2 = -1 and the z
    // diffusion is sqrt(R + S) = sqrt(2), so z is Ornstein-Uhlenbeck:
    // E[z_1] = e^{-1} z_0 and E[z_1^2] = e^{-2} z_0^2 + (1 - e^{-2}).
    const ModelParams p = make(0.0, 1.0, 1.0, 1.0, 0.0, 0.0);
    sde::SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 1.0;
    cfg.n_paths = 20000;
    cfg.seed = 8;
    cfg.record_stride = 1000;
    const sde::CoupledXZ run = sde::simulate_coupled_xz(p, 1.0, 1.0, cfg);
    const std::size_t last = run.times.size() - 1;
    double zsum = 0.0, z2sum = 0.0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        CHECK(run.x_at(i, last) == doctest::Approx(1.0));  // frozen Riccati component
        const double z = run.z_at(i, last);
        zsum += z;
        z2sum += z * z;
    }
    const double mean = zsum / cfg.n_paths;
    const double second = z2sum / cfg.n_paths;
    // se(mean) ~ sqrt(1 - e^{-2})/sqrt(n) = 6.6e-3.
    CHECK(mean == doctest::Approx(std::exp(-1.0)).epsilon(0.08));
    CHECK(second == doctest::Approx(1.0).epsilon(0.05));
}
