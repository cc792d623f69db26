#include "riccati/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "riccati/family.hpp"
#include "riccati/functionals.hpp"
#include "riccati/invariant.hpp"
#include "riccati/potential.hpp"
#include "riccati/rng.hpp"

namespace riccati::estimators {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Independent sub-seed per role within one estimator call.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag + 0x9E3779B97F4A7C15ULL));
}

constexpr std::uint64_t kTagFkLhs = 1;
constexpr std::uint64_t kTagFkRhs = 2;
constexpr std::uint64_t kTagPoincareSampler = 3;
constexpr std::uint64_t kTagPoincareInner = 4;
constexpr std::uint64_t kTagLyapunov = 5;

// Standard error of the mean from batch means: the sample standard deviation
// of the per-batch means divided by sqrt(#batches).
double batch_se(const std::vector<double>& batch_means) {
    const std::size_t b = batch_means.size();
    if (b < 2) return 0.0;
    double mean = 0.0;
    for (double v : batch_means) mean += v;
    mean /= static_cast<double>(b);
    double ss = 0.0;
    for (double v : batch_means) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
}

}  // namespace

MeanSe mc_mean(const std::vector<double>& values) {
    MeanSe out;
    std::vector<double> kept;
    kept.reserve(values.size());
    for (double v : values) {
        if (std::isfinite(v))
            kept.push_back(v);
        else
            ++out.n_excluded;
    }
    out.n_used = kept.size();
    if (kept.empty()) {
        out.mean = kNaN;
        out.se = kNaN;
        return out;
    }
    const std::size_t n_batches = std::min<std::size_t>(32, kept.size());
    const std::size_t chunk = (kept.size() + n_batches - 1) / n_batches;
    std::vector<double> means;
    means.reserve(n_batches);
    double total = 0.0;
    for (std::size_t b = 0; b * chunk < kept.size(); ++b) {
        const std::size_t lo = b * chunk;
        const std::size_t hi = std::min(kept.size(), lo + chunk);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += kept[i];
        total += s;
        means.push_back(s / static_cast<double>(hi - lo));
    }
    out.mean = total / static_cast<double>(kept.size());
    out.se = batch_se(means);
    return out;
}

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("least_squares: size mismatch");
    if (xs.size() < 2) throw std::invalid_argument("least_squares: >= 2 points required");
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("least_squares: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res > 0.0 ? 0.0 : 1.0);
    fit.n_points = xs.size();
    return fit;
}

RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& values,
                 double t0, double t1) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_rate: size mismatch");
    if (!(t0 >= 1.0)) throw std::invalid_argument("fit_rate: window start below burn-in t0 >= 1");
    if (!(t1 > t0)) throw std::invalid_argument("fit_rate: empty window");
    const double tol = 1e-9 * std::max(1.0, std::abs(t1));
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 - tol || times[i] > t1 + tol) continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_rate: nonpositive value in window");
        ts.push_back(times[i]);
        logs.push_back(std::log(values[i]));
    }
    if (ts.size() < 5) throw std::invalid_argument("fit_rate: fewer than 5 points in window");
    const LineFit line = least_squares(ts, logs);
    RateFit fit;
    fit.t0 = t0;
    fit.t1 = t1;
    fit.rate = -line.slope;
    fit.intercept = line.intercept;
    fit.r2 = line.r2;
    fit.low_r2 = line.r2 < 0.9;
    fit.n_points = ts.size();
    return fit;
}

RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.empty()) throw std::invalid_argument("fit_rate: empty series");
    const double T = times.back();
    const double t0 = std::max(1.0, T / 4.0);
    const double t1 = 0.75 * T;
    if (!(t1 > t0))
        throw std::invalid_argument("fit_rate: horizon too short for the default window");
    return fit_rate(times, values, t0, t1);
}

std::vector<double> ensemble_column(const sde::PathEnsemble& ens, std::size_t k,
                                    bool drop_blown) {
    if (k >= ens.times.size()) throw std::invalid_argument("ensemble_column: instant out of range");
    std::vector<double> out;
    out.reserve(ens.n_paths);
    for (std::size_t path = 0; path < ens.n_paths; ++path) {
        if (drop_blown && ens.blown(path)) continue;
        out.push_back(ens.at(path, k));
    }
    return out;
}

MomentReport mc_moments(const sde::PathEnsemble& ens, int n, double se_mult) {
    if (n < 1) throw std::invalid_argument("mc_moments: order n >= 1 required");
    if (ens.n_paths < 1 || ens.times.empty())
        throw std::invalid_argument("mc_moments: empty ensemble");
    const std::size_t m = ens.times.size();
    MomentReport rep;
    rep.params = ens.params;
    rep.x0 = ens.x0;
    rep.n = n;
    rep.n_paths = ens.n_paths;
    rep.se_mult = se_mult;
    rep.times = ens.times;
    rep.norms.assign(m, kNaN);
    rep.se.assign(m, kNaN);

    std::vector<std::size_t> live;
    live.reserve(ens.n_paths);
    for (std::size_t path = 0; path < ens.n_paths; ++path) {
        if (ens.blown(path))
            ++rep.n_excluded;
        else
            live.push_back(path);
    }
    if (live.empty()) return rep;

    const std::size_t n_batches = std::min<std::size_t>(32, live.size());
    const std::size_t chunk = (live.size() + n_batches - 1) / n_batches;
    const std::size_t b_count = (live.size() + chunk - 1) / chunk;
    std::vector<double> batch_sum(b_count * m, 0.0);
    std::vector<double> batch_n(b_count, 0.0);
    for (std::size_t i = 0; i < live.size(); ++i) {
        const std::size_t b = i / chunk;
        batch_n[b] += 1.0;
        const double* row = ens.states.data() + live[i] * m;
        double* acc = batch_sum.data() + b * m;
        for (std::size_t k = 0; k < m; ++k)
            acc[k] += std::pow(std::abs(row[k]), static_cast<double>(n));
    }
    std::vector<double> means(b_count);
    for (std::size_t k = 0; k < m; ++k) {
        double total = 0.0;
        for (std::size_t b = 0; b < b_count; ++b) {
            total += batch_sum[b * m + k];
            means[b] = batch_sum[b * m + k] / batch_n[b];
        }
        const double mom = total / static_cast<double>(live.size());
        const double se_mom = batch_se(means);
        const double inv_n = 1.0 / static_cast<double>(n);
        rep.norms[k] = std::pow(mom, inv_n);
        rep.se[k] = mom > 0.0 ? se_mom * inv_n * std::pow(mom, inv_n - 1.0) : 0.0;
    }

    try {
        rep.bracket_lo.resize(m);
        rep.bracket_hi.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            rep.bracket_lo[k] = phi_modified(ens.times[k], ens.x0, ens.params, -1.0);
            rep.bracket_hi[k] =
                phi_modified(ens.times[k], ens.x0, ens.params, static_cast<double>(n));
        }
        rep.bracket_available = true;
    } catch (const std::invalid_argument&) {
        rep.bracket_lo.clear();
        rep.bracket_hi.clear();
        rep.bracket_available = false;
    }
    if (rep.bracket_available) {
        rep.pass.assign(m, 0);
        rep.all_pass = true;
        for (std::size_t k = 0; k < m; ++k) {
            const double slack = se_mult * rep.se[k];
            const bool ok = std::isfinite(rep.norms[k]) &&
                            rep.norms[k] >= rep.bracket_lo[k] - slack &&
                            rep.norms[k] <= rep.bracket_hi[k] + slack;
            rep.pass[k] = ok ? 1 : 0;
            rep.all_pass = rep.all_pass && ok;
        }
    }
    return rep;
}

double wasserstein_1d(const std::vector<double>& samples1,
                      const std::vector<double>& samples2, MetricKind which,
                      const ModelParams& p) {
    if (samples1.empty() || samples2.empty())
        throw std::invalid_argument("wasserstein_1d: empty sample");
    const auto transform = [&](const std::vector<double>& xs) {
        std::vector<double> g(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (which != MetricKind::euclid && !(xs[i] > 0.0))
                throw std::invalid_argument(
                    "wasserstein_1d: nonpositive sample under a weighted metric");
            g[i] = metric_transform(xs[i], which, p);
        }
        std::sort(g.begin(), g.end());
        return g;
    };
    const std::vector<double> a = transform(samples1);
    const std::vector<double> b = transform(samples2);
    // Exact L1 distance between the empirical quantile functions: the merged
    // breakpoint sweep in units of 1/(n1*n2).
    const std::uint64_t n1 = a.size(), n2 = b.size();
    const std::uint64_t total = n1 * n2;
    std::uint64_t k = 0, i = 0, j = 0;
    double w = 0.0;
    while (k < total) {
        const std::uint64_t bi = (i + 1) * n2;
        const std::uint64_t bj = (j + 1) * n1;
        const std::uint64_t nk = std::min(bi, bj);
        w += static_cast<double>(nk - k) * std::abs(a[i] - b[j]);
        k = nk;
        if (bi == nk) ++i;
        if (bj == nk) ++j;
    }
    return w / static_cast<double>(total);
}

namespace {

// Materialize paths [begin, end) of the shared-x0 ensemble defined by
// (p, x0, cfg) into a standalone chunk (bit-identical states to the full
// run), so the path functionals can stream over bounded memory.
sde::PathEnsemble simulate_chunk(const ModelParams& p, double x0, const sde::SimConfig& cfg,
                                 std::size_t begin, std::size_t end) {
    sde::PathEnsemble chunk;
    chunk.params = p;
    chunk.x0 = x0;
    chunk.n_paths = end - begin;
    chunk.times = sde::record_times(cfg);
    const std::size_t m = chunk.times.size();
    chunk.states.resize(chunk.n_paths * m);
    chunk.stream_ids.resize(chunk.n_paths);
    chunk.blowup_time.resize(chunk.n_paths);
    sde::simulate_riccati_stream(
        p, x0, cfg, begin, end,
        [&](std::size_t path, const double* row, std::size_t n_rec, double blow) {
            const std::size_t local = path - begin;
            std::memcpy(chunk.states.data() + local * m, row, n_rec * sizeof(double));
            chunk.stream_ids[local] = 2 * path;
            chunk.blowup_time[local] = blow;
        });
    return chunk;
}

}  // namespace

FkResult fk_check(const ModelParams& p, double x0, double t,
                  const std::function<double(double)>& f, FkIdentity identity,
                  const sde::SimConfig& lhs_cfg, const sde::SimConfig& rhs_cfg) {
    validate(p);
    if (!(x0 > 0.0)) throw std::invalid_argument("fk_check: x0 > 0 required");
    if (!(t > 0.0 && t <= 2.0))
        throw std::invalid_argument(
            "fk_check: horizon must lie in (0, 2] (exponential-functional variance)");
    if (!(p.U + p.V > 0.0)) throw std::invalid_argument("fk_check: U + V > 0 required");

    const ModelParams shifted = identity == FkIdentity::drift_shift
                                    ? family(p, FamilyVariant::bar, 1.0).derived
                                    : family(p, FamilyVariant::hat, 1.0).derived;

    FkResult out;
    out.identity = identity;
    out.n_paths = lhs_cfg.n_paths;

    std::vector<double> lhs_vals, rhs_vals;
    lhs_vals.reserve(lhs_cfg.n_paths);
    rhs_vals.reserve(rhs_cfg.n_paths);
    std::size_t lhs_dropped = 0, rhs_dropped = 0;

    for (int which = 0; which < 2; ++which) {
        const bool is_lhs = which == 0;
        sde::SimConfig side = is_lhs ? lhs_cfg : rhs_cfg;
        side.horizon = t;
        sde::validate(side);
        side.seed = sub_seed(side.seed, is_lhs ? kTagFkLhs : kTagFkRhs);
        const std::size_t m = sde::record_times(side).size();
        const std::size_t kt = m - 1;
        const std::size_t chunk_paths =
            std::clamp<std::size_t>(2'000'000 / std::max<std::size_t>(1, m), 64, 8192);
        const ModelParams& sys = is_lhs ? p : shifted;
        for (std::size_t begin = 0; begin < side.n_paths; begin += chunk_paths) {
            const std::size_t end = std::min(side.n_paths, begin + chunk_paths);
            const sde::PathEnsemble chunk = simulate_chunk(sys, x0, side, begin, end);
            if (is_lhs) {
                const std::vector<double> term = sde::tangent_terminal(chunk);
                for (std::size_t path = 0; path < chunk.n_paths; ++path) {
                    if (!std::isfinite(term[path])) {
                        ++lhs_dropped;
                        continue;
                    }
                    lhs_vals.push_back(f(chunk.at(path, kt)) * term[path]);
                }
            } else if (identity == FkIdentity::drift_shift) {
                const std::vector<double> half = sde::exp_functional(chunk, 0.0, t, p);
                for (std::size_t path = 0; path < chunk.n_paths; ++path) {
                    if (!std::isfinite(half[path])) {
                        ++rhs_dropped;
                        continue;
                    }
                    rhs_vals.push_back(f(chunk.at(path, kt)) * half[path] * half[path]);
                }
            } else {
                const std::vector<double> term = sde::tangent_conjugate_terminal(chunk, p);
                for (std::size_t path = 0; path < chunk.n_paths; ++path) {
                    if (!std::isfinite(term[path])) {
                        ++rhs_dropped;
                        continue;
                    }
                    rhs_vals.push_back(f(chunk.at(path, kt)) * term[path]);
                }
            }
        }
    }

    out.excluded_lhs = static_cast<double>(lhs_dropped) / static_cast<double>(lhs_cfg.n_paths);
    out.excluded_rhs = static_cast<double>(rhs_dropped) / static_cast<double>(rhs_cfg.n_paths);
    if (out.excluded_lhs > 1e-3 || out.excluded_rhs > 1e-3)
        throw std::runtime_error("fk_check: tangent-path degeneracy above 0.1%");

    const MeanSe lhs = mc_mean(lhs_vals);
    const MeanSe rhs = mc_mean(rhs_vals);
    out.lhs = lhs.mean;
    out.lhs_se = lhs.se;
    out.rhs = rhs.mean;
    out.rhs_se = rhs.se;
    const double pooled = std::sqrt(lhs.se * lhs.se + rhs.se * rhs.se);
    const double diff = lhs.mean - rhs.mean;
    if (pooled > 0.0)
        out.z = diff / pooled;
    else
        out.z = std::abs(diff) <= 1e-12 * (std::abs(lhs.mean) + std::abs(rhs.mean) + 1.0)
                    ? 0.0
                    : std::numeric_limits<double>::infinity();
    return out;
}

FkResult fk_check(const ModelParams& p, double x0, double t,
                  const std::function<double(double)>& f, FkIdentity identity,
                  const sde::SimConfig& cfg) {
    return fk_check(p, x0, t, f, identity, cfg, cfg);
}

LyapunovEstimate lyapunov(const ModelParams& p, double x0, double T,
                          const sde::SimConfig& cfg) {
    validate(p);
    if (!(x0 >= 0.0)) throw std::invalid_argument("lyapunov: x0 >= 0 required");
    if (!(T >= 100.0)) throw std::invalid_argument("lyapunov: T >= 100 required");
    sde::SimConfig local = cfg;
    local.horizon = T;
    sde::validate(local);
    const sde::detail::StepPlan pl = sde::detail::make_step_plan(local);
    const std::uint64_t seed = sub_seed(local.seed, kTagLyapunov);

    std::vector<double> averages(local.n_paths);
    for (std::size_t path = 0; path < local.n_paths; ++path) {
        Rng rng(seed, path);
        double x = x0;
        double integral = 0.0;
        for (std::size_t s = 0; s < pl.n_steps; ++s) {
            const double h = (s + 1 == pl.n_steps) ? pl.dt_last : local.dt;
            const double g0 = drift_derivative(p, x) / 2.0;
            x = sde::advance_state(p, local.scheme, x, h, std::sqrt(h) * rng.normal());
            const double g1 = drift_derivative(p, x) / 2.0;
            integral += 0.5 * h * (g0 + g1);
        }
        averages[path] = integral / T;
    }
    const MeanSe ms = mc_mean(averages);
    return {ms.mean, ms.se, local.n_paths};
}

PoincareReport poincare_decay(const ModelParams& p,
                              const std::function<double(double)>& f,
                              const PoincareConfig& cfg) {
    validate(p);
    if (p.V != 0.0) throw std::invalid_argument("poincare_decay: V = 0 regime required");
    if (!(p.eps > 0.0)) throw std::invalid_argument("poincare_decay: eps > 0 required");
    if (cfg.n_outer < 2 || cfg.n_inner < 2)
        throw std::invalid_argument("poincare_decay: n_outer, n_inner >= 2 required");
    const double rate = rate_lambda_eps(p);
    if (!(rate > 0.0)) throw std::invalid_argument("poincare_decay: spectral-gap rate <= 0");

    sde::SimConfig sim;
    sim.dt = cfg.dt;
    sim.horizon = cfg.horizon;
    sim.record_stride = cfg.record_stride;
    sde::validate(sim);
    const sde::detail::StepPlan pl = sde::detail::make_step_plan(sim);
    const std::vector<double> times = sde::record_times(sim);
    const std::size_t m = times.size();

    const stationary::StationaryMeasure msr = stationary::build(p);
    const std::vector<double> draws =
        stationary::sample(msr, cfg.n_outer, sub_seed(cfg.seed, kTagPoincareSampler));
    const std::uint64_t inner_seed = sub_seed(cfg.seed, kTagPoincareInner);

    const auto jd = static_cast<double>(cfg.n_outer);
    const auto md = static_cast<double>(cfg.n_inner);
    std::vector<double> sum_between(m, 0.0), sum_between2(m, 0.0), sum_within(m, 0.0);
    std::vector<double> sf(m), sf2(m);
    for (std::size_t j = 0; j < cfg.n_outer; ++j) {
        std::fill(sf.begin(), sf.end(), 0.0);
        std::fill(sf2.begin(), sf2.end(), 0.0);
        for (std::size_t i = 0; i < cfg.n_inner; ++i) {
            Rng rng(inner_seed, j * cfg.n_inner + i);
            double x = draws[j];
            std::size_t rec = 0;
            {
                const double v = f(x);
                sf[rec] += v;
                sf2[rec] += v * v;
                ++rec;
            }
            for (std::size_t s = 0; s < pl.n_steps; ++s) {
                const double h = (s + 1 == pl.n_steps) ? pl.dt_last : sim.dt;
                x = sde::advance_state(p, sim.scheme, x, h, std::sqrt(h) * rng.normal());
                if (rec < m && s + 1 == pl.rec_steps[rec]) {
                    const double v = f(x);
                    sf[rec] += v;
                    sf2[rec] += v * v;
                    ++rec;
                }
            }
        }
        for (std::size_t k = 0; k < m; ++k) {
            const double mj = sf[k] / md;
            const double s2j = std::max(0.0, (sf2[k] - md * mj * mj) / (md - 1.0));
            sum_between[k] += mj;
            sum_between2[k] += mj * mj;
            sum_within[k] += s2j;
        }
    }

    PoincareReport rep;
    rep.times = times;
    rep.variance.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double mean = sum_between[k] / jd;
        const double between = (sum_between2[k] - jd * mean * mean) / (jd - 1.0);
        rep.variance[k] = between - sum_within[k] / (jd * md);
    }
    rep.rate_bound = 2.0 * rate;

    // Truncate the fit window at the noise floor: past the first non-positive
    // debiased variance the series carries no rate information.
    double t1 = cfg.window_t1;
    for (std::size_t k = 0; k < m; ++k) {
        if (times[k] < cfg.window_t0 - 1e-12 || times[k] > cfg.window_t1 + 1e-12) continue;
        if (!(rep.variance[k] > 0.0)) {
            t1 = times[k] - 1e-12;
            break;
        }
    }
    try {
        rep.fit = fit_rate(times, rep.variance, cfg.window_t0, t1);
        rep.passed = rep.fit.rate >= 0.8 * rep.rate_bound;
    } catch (const std::invalid_argument&) {
        rep.fit = RateFit{};
        rep.fit.rate = kNaN;
        rep.passed = false;
    }
    return rep;
}

}  // namespace riccati::estimators
