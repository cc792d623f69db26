#include "riccati/sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "riccati/parallel.hpp"
#include "riccati/rng.hpp"

namespace riccati::sde {

namespace detail {

StepPlan make_step_plan(const SimConfig& cfg) {
    StepPlan pl;
    std::size_t n = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
    if (n < 1) n = 1;
    pl.n_steps = n;
    pl.dt_last = cfg.horizon - static_cast<double>(n - 1) * cfg.dt;
    pl.rec_steps.reserve(n / cfg.record_stride + 2);
    for (std::size_t s = 0; s < n; s += cfg.record_stride) pl.rec_steps.push_back(s);
    pl.rec_steps.push_back(n);
    return pl;
}

}  // namespace detail

namespace {

using detail::StepPlan;
using detail::make_step_plan;

constexpr double kBlowupThreshold = 1e12;
constexpr std::size_t kChunk = 256;

std::vector<double> plan_times(const SimConfig& cfg, const StepPlan& pl) {
    std::vector<double> t(pl.rec_steps.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = pl.rec_steps[i] == pl.n_steps ? cfg.horizon
                                             : static_cast<double>(pl.rec_steps[i]) * cfg.dt;
    return t;
}

}  // namespace

double advance_state(const ModelParams& p, Scheme scheme, double x, double h, double dw) {
    const double lam = drift(p, x);
    switch (scheme) {
        case Scheme::raw_euler:
            return x + lam * h + sigma_eps(p, x) * dw;
        case Scheme::tamed_euler:
            return std::max(0.0, x + lam * h / (1.0 + h * std::abs(lam)) +
                                     sigma_eps(p, x) * dw);
        case Scheme::milstein_tamed:
            return std::max(0.0, x + lam * h / (1.0 + h * std::abs(lam)) +
                                     sigma_eps(p, x) * dw +
                                     0.25 * p.eps * p.eps * (p.U + 3.0 * p.V * x * x) *
                                         (dw * dw - h));
    }
    return x;
}

namespace {

// One Riccati path; writes the recorded states into out[0..m) and returns the
// blow-up time (NaN if the path stayed finite).
double run_path(const ModelParams& p, double x0, const SimConfig& cfg, const StepPlan& pl,
                std::uint64_t path, double* out) {
    Rng rng(cfg.seed, 2 * path);
    const double sdt = std::sqrt(cfg.dt);
    const double sdt_last = std::sqrt(pl.dt_last);
    const std::size_t m = pl.rec_steps.size();
    // Only the untamed scheme diverges for good (the drift spiral below zero
    // is one-way); tamed excursions return to [0, inf), so they are not
    // flagged as blow-ups.
    const bool watch = cfg.scheme == Scheme::raw_euler;
    double x = x0;
    std::size_t ri = 0;
    out[ri++] = x;
    for (std::size_t step = 0; step < pl.n_steps; ++step) {
        const bool last = step + 1 == pl.n_steps;
        const double h = last ? pl.dt_last : cfg.dt;
        const double dw = rng.normal() * (last ? sdt_last : sdt);
        x = advance_state(p, cfg.scheme, x, h, dw);
        if (watch && (!std::isfinite(x) || std::abs(x) > kBlowupThreshold)) {
            const double blow = last ? cfg.horizon : static_cast<double>(step + 1) * cfg.dt;
            for (; ri < m; ++ri) out[ri] = std::numeric_limits<double>::quiet_NaN();
            return blow;
        }
        if (ri < m && pl.rec_steps[ri] == step + 1) out[ri++] = x;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("SimConfig: dt > 0 required");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("SimConfig: horizon > 0 required");
    if (!(cfg.dt <= cfg.horizon)) throw std::invalid_argument("SimConfig: dt <= horizon required");
    if (cfg.n_paths < 1) throw std::invalid_argument("SimConfig: n_paths >= 1 required");
    if (cfg.record_stride < 1)
        throw std::invalid_argument("SimConfig: record_stride >= 1 required");
}

std::size_t step_count(const SimConfig& cfg) { return make_step_plan(cfg).n_steps; }

std::vector<double> record_times(const SimConfig& cfg) {
    validate(cfg);
    const StepPlan pl = make_step_plan(cfg);
    return plan_times(cfg, pl);
}

namespace {

PathEnsemble simulate_impl(const ModelParams& p, const double* x0s, bool shared_x0,
                           const SimConfig& cfg) {
    const StepPlan pl = make_step_plan(cfg);
    const std::size_t m = pl.rec_steps.size();
    PathEnsemble ens;
    ens.params = p;
    ens.x0 = x0s[0];
    ens.n_paths = cfg.n_paths;
    ens.times = plan_times(cfg, pl);
    ens.states.resize(cfg.n_paths * m);
    ens.stream_ids.resize(cfg.n_paths);
    ens.blowup_time.resize(cfg.n_paths);
    parallel_chunks(cfg.n_paths, kChunk, [&](std::size_t b, std::size_t e) {
        for (std::size_t path = b; path < e; ++path) {
            ens.stream_ids[path] = 2 * path;
            const double x0 = shared_x0 ? x0s[0] : x0s[path];
            ens.blowup_time[path] = run_path(p, x0, cfg, pl, path, &ens.states[path * m]);
        }
    });
    return ens;
}

}  // namespace

PathEnsemble simulate_riccati(const ModelParams& p, double x0, const SimConfig& cfg) {
    riccati::validate(p);
    validate(cfg);
    if (!(x0 >= 0.0)) throw std::invalid_argument("simulate_riccati: x0 >= 0 required");
    return simulate_impl(p, &x0, true, cfg);
}

PathEnsemble simulate_riccati(const ModelParams& p, const std::vector<double>& x0s,
                              const SimConfig& cfg) {
    riccati::validate(p);
    validate(cfg);
    if (x0s.size() != cfg.n_paths)
        throw std::invalid_argument("simulate_riccati: x0s.size() must equal n_paths");
    for (double x0 : x0s)
        if (!(x0 >= 0.0)) throw std::invalid_argument("simulate_riccati: x0 >= 0 required");
    return simulate_impl(p, x0s.data(), false, cfg);
}

void simulate_riccati_stream(const ModelParams& p, double x0, const SimConfig& cfg,
                             std::size_t path_begin, std::size_t path_end,
                             const PathSink& sink) {
    riccati::validate(p);
    validate(cfg);
    if (!(x0 >= 0.0)) throw std::invalid_argument("simulate_riccati_stream: x0 >= 0 required");
    const StepPlan pl = make_step_plan(cfg);
    const std::size_t m = pl.rec_steps.size();
    std::vector<double> row(m);
    for (std::size_t path = path_begin; path < path_end; ++path) {
        const double blow = run_path(p, x0, cfg, pl, path, row.data());
        sink(path, row.data(), m, blow);
    }
}

bool PathEnsemble::blown(std::size_t path) const { return !std::isnan(blowup_time[path]); }

std::size_t PathEnsemble::n_blown() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_paths; ++i)
        if (blown(i)) ++c;
    return c;
}

CoupledXZ simulate_coupled_xz(const ModelParams& p, double x0, double z0,
                              const SimConfig& cfg) {
    riccati::validate(p);
    validate(cfg);
    if (!(x0 >= 0.0)) throw std::invalid_argument("simulate_coupled_xz: x0 >= 0 required");
    const StepPlan pl = make_step_plan(cfg);
    const std::size_t m = pl.rec_steps.size();
    CoupledXZ out;
    out.params = p;
    out.x0 = x0;
    out.z0 = z0;
    out.n_paths = cfg.n_paths;
    out.times = plan_times(cfg, pl);
    out.x_states.resize(cfg.n_paths * m);
    out.z_states.resize(cfg.n_paths * m);
    const double eb2 = p.eps_bar * p.eps_bar;
    parallel_chunks(cfg.n_paths, kChunk, [&](std::size_t b, std::size_t e) {
        for (std::size_t path = b; path < e; ++path) {
            Rng rng_x(cfg.seed, 2 * path);
            Rng rng_z(cfg.seed, 2 * path + 1);
            const double sdt = std::sqrt(cfg.dt);
            const double sdt_last = std::sqrt(pl.dt_last);
            double x = x0;
            double z = z0;
            std::size_t ri = 0;
            out.x_states[path * m + ri] = x;
            out.z_states[path * m + ri] = z;
            ++ri;
            for (std::size_t step = 0; step < pl.n_steps; ++step) {
                const bool lastp = step + 1 == pl.n_steps;
                const double h = lastp ? pl.dt_last : cfg.dt;
                const double root_h = lastp ? sdt_last : sdt;
                const double dw = rng_x.normal() * root_h;
                const double dwp = rng_z.normal() * root_h;
                const double zdrift = 0.5 * drift_derivative(p, x) * z;
                const double s1 = sigma1(p, x);
                const double varsig =
                    std::sqrt(p.R + p.S * x * x + eb2 * s1 * s1);
                z = z + zdrift * h / (1.0 + h * std::abs(zdrift)) + varsig * dwp;
                x = advance_state(p, cfg.scheme, x, h, dw);
                if (ri < m && pl.rec_steps[ri] == step + 1) {
                    out.x_states[path * m + ri] = x;
                    out.z_states[path * m + ri] = z;
                    ++ri;
                }
            }
        }
    });
    return out;
}

CoupledPair simulate_coupled_pair(const ModelParams& p, double x1, double x2,
                                  const SimConfig& cfg) {
    riccati::validate(p);
    validate(cfg);
    if (!(x1 >= 0.0 && x2 >= 0.0))
        throw std::invalid_argument("simulate_coupled_pair: x1, x2 >= 0 required");
    const StepPlan pl = make_step_plan(cfg);
    const std::size_t m = pl.rec_steps.size();
    CoupledPair pair;
    for (PathEnsemble* ens : {&pair.first, &pair.second}) {
        ens->params = p;
        ens->n_paths = cfg.n_paths;
        ens->times = plan_times(cfg, pl);
        ens->states.resize(cfg.n_paths * m);
        ens->stream_ids.resize(cfg.n_paths);
        ens->blowup_time.assign(cfg.n_paths, std::numeric_limits<double>::quiet_NaN());
    }
    pair.first.x0 = x1;
    pair.second.x0 = x2;
    parallel_chunks(cfg.n_paths, kChunk, [&](std::size_t b, std::size_t e) {
        for (std::size_t path = b; path < e; ++path) {
            Rng rng(cfg.seed, 2 * path);
            pair.first.stream_ids[path] = 2 * path;
            pair.second.stream_ids[path] = 2 * path;
            const double sdt = std::sqrt(cfg.dt);
            const double sdt_last = std::sqrt(pl.dt_last);
            const bool watch = cfg.scheme == Scheme::raw_euler;
            double xa = x1;
            double xb = x2;
            bool blown_a = false;
            bool blown_b = false;
            std::size_t ri = 0;
            pair.first.states[path * m + ri] = xa;
            pair.second.states[path * m + ri] = xb;
            ++ri;
            for (std::size_t step = 0; step < pl.n_steps; ++step) {
                const bool lastp = step + 1 == pl.n_steps;
                const double h = lastp ? pl.dt_last : cfg.dt;
                const double dw = rng.normal() * (lastp ? sdt_last : sdt);
                const double t_next =
                    lastp ? cfg.horizon : static_cast<double>(step + 1) * cfg.dt;
                if (!blown_a) {
                    xa = advance_state(p, cfg.scheme, xa, h, dw);
                    if (watch && (!std::isfinite(xa) || std::abs(xa) > kBlowupThreshold)) {
                        blown_a = true;
                        pair.first.blowup_time[path] = t_next;
                        xa = std::numeric_limits<double>::quiet_NaN();
                    }
                }
                if (!blown_b) {
                    xb = advance_state(p, cfg.scheme, xb, h, dw);
                    if (watch && (!std::isfinite(xb) || std::abs(xb) > kBlowupThreshold)) {
                        blown_b = true;
                        pair.second.blowup_time[path] = t_next;
                        xb = std::numeric_limits<double>::quiet_NaN();
                    }
                }
                if (ri < m && pl.rec_steps[ri] == step + 1) {
                    pair.first.states[path * m + ri] = xa;
                    pair.second.states[path * m + ri] = xb;
                    ++ri;
                }
            }
        }
    });
    return pair;
}

}  // namespace riccati::sde
