#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "riccati/metric.hpp"
#include "riccati/params.hpp"
#include "riccati/sim.hpp"

namespace riccati::estimators {

// Mean with a batch-means standard error (>= 32 batches over the input
// order). Non-finite entries are skipped and counted in n_excluded.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n_used = 0;
    std::size_t n_excluded = 0;
};
MeanSe mc_mean(const std::vector<double>& values);

// Ordinary least squares y = slope*x + intercept with R^2.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n_points = 0;
};
LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

// Exponential-rate fit: least squares of log(value) against t over the window
// [t0, t1]; rate is minus the slope. Requires t0 >= 1 (burn-in), at least 5
// points inside the window, and strictly positive values there. Fits with
// R^2 < 0.9 are flagged low_r2.
struct RateFit {
    double t0 = 0.0;
    double t1 = 0.0;
    double rate = 0.0;
    double intercept = 0.0;  // log-scale value extrapolated to t = 0
    double r2 = 0.0;
    bool low_r2 = false;
    std::size_t n_points = 0;
};
RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& values,
                 double t0, double t1);
// Default window [max(1, T/4), 3T/4] with T the last time in the series.
RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& values);

// One recorded instant of an ensemble as a flat sample; blown-up paths are
// dropped when drop_blown is set.
std::vector<double> ensemble_column(const sde::PathEnsemble& ens, std::size_t k,
                                    bool drop_blown = true);

// Monte Carlo n-norms (mean of |x|^n to the power 1/n) per record instant,
// with batch-means standard errors and, when the modified-parameter curves
// exist at the ensemble's noise amplitude, the deterministic bracket
//   phi^(eps,-1)_t(x0) <= n-norm <= phi^(eps,n)_t(x0).
// pass[k] records whether the estimate lies in the bracket widened by
// se_mult standard errors on both sides. Blown-up paths are excluded from
// every instant and counted once. When the order-n curve is ill-founded
// ((n-1) eps^2 V/S >= 2, or eps^2 U/R >= 1 for the lower curve) the report
// carries bracket_available = false and empty bracket/pass vectors.
struct MomentReport {
    ModelParams params;
    double x0 = 0.0;
    int n = 1;
    std::size_t n_paths = 0;
    std::size_t n_excluded = 0;
    bool bracket_available = false;
    double se_mult = 3.0;
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<double> se;
    std::vector<double> bracket_lo;
    std::vector<double> bracket_hi;
    std::vector<std::uint8_t> pass;
    bool all_pass = false;
};
MomentReport mc_moments(const sde::PathEnsemble& ens, int n, double se_mult = 3.0);

// First Wasserstein distance between two empirical measures on (0, inf)
// under d(x,y) = |g(x) - g(y)| with g the monotone transform of the chosen
// metric: the exact L1 distance between the empirical quantile functions of
// the transformed samples (optimal coupling in one dimension). Weighted
// metrics require strictly positive samples; empty samples throw.
double wasserstein_1d(const std::vector<double>& samples1,
                      const std::vector<double>& samples2, MetricKind which,
                      const ModelParams& p);

// Which change-of-measure identity fk_check verifies:
//   drift_shift : E[f(X_t) T_t] = E[f(Xbar_t) exp(int dLambda(Xbar_s) ds)]
//                 with Xbar the bar-reparametrized diffusion and dLambda the
//                 base drift derivative;
//   conjugate   : E[f(X_t) T_t] = E[f(Xhat_t) That_t] with Xhat the
//                 hat-reparametrized diffusion and That its conjugate
//                 tangent functional.
enum class FkIdentity { drift_shift, conjugate };

struct FkResult {
    FkIdentity identity = FkIdentity::drift_shift;
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs = 0.0;
    double rhs_se = 0.0;
    double z = 0.0;  // (lhs - rhs) / pooled SE
    std::size_t n_paths = 0;
    double excluded_lhs = 0.0;  // fraction of paths dropped on each side
    double excluded_rhs = 0.0;
};

// Monte Carlo check of one tangent-process identity at horizon t (t <= 2:
// the exponential functionals' variance grows too fast beyond that). The two
// sides use independent sub-seeds derived from cfg.seed; cfg.horizon is
// replaced by t. Paths whose tangent functional degenerates (a non-positive
// state under the singular potential) are dropped; if more than 0.1% of
// either side degenerates the check aborts. Requires x0 > 0 and U + V > 0.
FkResult fk_check(const ModelParams& p, double x0, double t,
                  const std::function<double(double)>& f, FkIdentity identity,
                  const sde::SimConfig& cfg);

// Same check with side-specific stepping: the two sides are independent
// Monte Carlo estimates of the same scalar, so they may use different step
// sizes, path counts and record strides. Used to push the weak O(dt) bias of
// the side with the smaller statistical error below its standard error
// without paying the small step on both sides.
FkResult fk_check(const ModelParams& p, double x0, double t,
                  const std::function<double(double)>& f, FkIdentity identity,
                  const sde::SimConfig& lhs_cfg, const sde::SimConfig& rhs_cfg);

// Ensemble average of the per-path time averages (1/T) int_0^T (A - S X_s) ds
// (trapezoid in time), with a batch-means standard error over paths.
// Requires T >= 100 so the transient is negligible against the ergodic mean.
struct LyapunovEstimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t n_paths = 0;
};
LyapunovEstimate lyapunov(const ModelParams& p, double x0, double T,
                          const sde::SimConfig& cfg);

// Nested Monte Carlo estimate of t -> Var_pi(P_t f) for a stationary-started
// diffusion: n_outer draws from the invariant measure, n_inner conditional
// paths from each, the between-draw variance of the inner means debiased by
// the within-draw variance over n_inner (two-level variance decomposition).
// The decay rate is fitted on [window_t0, window_t1], truncated at the first
// non-positive debiased value (noise floor); if fewer than 5 positive points
// remain the fit is left empty (n_points = 0, rate NaN) and passed = false.
// Requires V = 0, eps > 0 and a positive spectral-gap rate; rate_bound holds
// twice that rate and passed records fit.rate >= 0.8 * rate_bound.
struct PoincareConfig {
    std::size_t n_outer = 512;
    std::size_t n_inner = 256;
    double dt = 1e-3;
    double horizon = 1.5;
    std::size_t record_stride = 25;
    std::uint64_t seed = 0;
    double window_t0 = 1.0;
    double window_t1 = 1.5;
};
struct PoincareReport {
    std::vector<double> times;
    std::vector<double> variance;  // debiased Var_pi(P_t f) per instant
    RateFit fit;
    double rate_bound = 0.0;  // 2 * spectral-gap rate of the parameters
    bool passed = false;
};
PoincareReport poincare_decay(const ModelParams& p,
                              const std::function<double(double)>& f,
                              const PoincareConfig& cfg);

}  // namespace riccati::estimators
