#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "riccati/params.hpp"

namespace riccati::sde {

enum class Scheme { tamed_euler, raw_euler, milstein_tamed };

struct SimConfig {
    double dt = 1e-3;
    double horizon = 1.0;
    Scheme scheme = Scheme::tamed_euler;
    std::uint64_t seed = 0;
    std::size_t n_paths = 1;
    std::size_t record_stride = 1;
};

// Throws std::invalid_argument on dt <= 0, horizon <= 0, dt > horizon,
// n_paths < 1 or record_stride < 1.
void validate(const SimConfig& cfg);

// Number of time steps (last step may be shorter so the grid ends exactly
// at the horizon) and the record grid {0, dt*stride, 2*dt*stride, ...} + {T}.
std::size_t step_count(const SimConfig& cfg);
std::vector<double> record_times(const SimConfig& cfg);

struct PathEnsemble {
    ModelParams params;
    double x0 = 0.0;
    std::size_t n_paths = 0;
    std::vector<double> times;              // m record instants
    std::vector<double> states;             // n_paths * m, path-major
    std::vector<std::uint64_t> stream_ids;  // per path
    std::vector<double> blowup_time;        // NaN when the path stayed finite

    double at(std::size_t path, std::size_t k) const { return states[path * times.size() + k]; }
    bool blown(std::size_t path) const;
    std::size_t n_blown() const;
};

// Ensemble of Riccati diffusion paths from x0.  Tamed schemes apply the
// increment Lambda*dt/(1 + dt*|Lambda|) (plus the Milstein correction
// (eps^2/4)(U+3Vx^2)(dW^2-dt) for milstein_tamed) followed by projection to
// [0, inf); raw_euler applies the untamed increment with no projection and
// records the first instant |x| > 1e12 or x is non-finite, after which the
// path is NaN and excluded from statistics.
PathEnsemble simulate_riccati(const ModelParams& p, double x0, const SimConfig& cfg);

// Same, with one initial state per path (x0s.size() must equal cfg.n_paths);
// the ensemble's x0 field records x0s[0]. Used by stationary-start runs.
PathEnsemble simulate_riccati(const ModelParams& p, const std::vector<double>& x0s,
                              const SimConfig& cfg);

// Same dynamics, streaming: paths with global indices [path_begin, path_end)
// are simulated serially in index order and handed to sink one at a time as
// (path index, m recorded states, blow-up time or NaN).  The recorded values
// are bit-identical to simulate_riccati's for equal (seed, path index).
using PathSink =
    std::function<void(std::size_t, const double*, std::size_t, double)>;
void simulate_riccati_stream(const ModelParams& p, double x0, const SimConfig& cfg,
                             std::size_t path_begin, std::size_t path_end,
                             const PathSink& sink);

struct CoupledXZ {
    ModelParams params;
    double x0 = 0.0;
    double z0 = 0.0;
    std::size_t n_paths = 0;
    std::vector<double> times;
    std::vector<double> x_states;  // path-major
    std::vector<double> z_states;  // path-major

    double x_at(std::size_t path, std::size_t k) const { return x_states[path * times.size() + k]; }
    double z_at(std::size_t path, std::size_t k) const { return z_states[path * times.size() + k]; }
};

// Riccati component x plus the linear component z with drift (1/2)dLambda(x) z
// and state-dependent diffusion sqrt(R + S x^2 + eps_bar^2 x (U + V x^2)),
// driven by an independent Wiener stream (component 1 of the path's RNG).
CoupledXZ simulate_coupled_xz(const ModelParams& p, double x0, double z0,
                              const SimConfig& cfg);

// Two ensembles from x1 and x2 driven by the same Wiener increments
// path-by-path (common random numbers).  Tamed schemes preserve the
// pathwise ordering of the two components.
struct CoupledPair {
    PathEnsemble first;
    PathEnsemble second;
};
CoupledPair simulate_coupled_pair(const ModelParams& p, double x1, double x2,
                                  const SimConfig& cfg);

// One scheme step from state x over step h with Wiener increment dw. Shared
// so coupled estimators can replay the exact engine stepping rule.
double advance_state(const ModelParams& p, Scheme scheme, double x, double h, double dw);

namespace detail {

// Step layout behind a SimConfig: n_steps uniform steps of cfg.dt except the
// last of dt_last, with rec_steps the step indices that get recorded.
struct StepPlan {
    std::size_t n_steps;
    double dt_last;
    std::vector<std::size_t> rec_steps;  // ascending, starts at 0, ends at n_steps
};

StepPlan make_step_plan(const SimConfig& cfg);

}  // namespace detail

}  // namespace riccati::sde
