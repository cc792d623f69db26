#include "riccati/enkf.hpp"

#include <cmath>
#include <stdexcept>

#include "riccati/flow.hpp"
#include "riccati/rng.hpp"

namespace riccati::enkf {

namespace {

// Stream layout within one run's seed: 0 = signal Wiener (first draw is the
// initial state), 1 = observation Wiener, 2 = member initials, 3+2i / 4+2i =
// member i's perturbation Wieners.
constexpr std::uint64_t kStreamSignal = 0;
constexpr std::uint64_t kStreamObs = 1;
constexpr std::uint64_t kStreamInit = 2;
constexpr std::uint64_t kStreamMembers = 3;

struct StepGrid {
    std::size_t n_steps;
    double dt_last;
};

StepGrid step_grid(const FilterConfig& cfg) {
    std::size_t n = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
    if (n < 1) n = 1;
    return {n, cfg.horizon - static_cast<double>(n - 1) * cfg.dt};
}

double grid_time(const FilterConfig& cfg, const StepGrid& g, std::size_t k) {
    return k == g.n_steps ? cfg.horizon : static_cast<double>(k) * cfg.dt;
}

ModelParams variance_flow_params(const FilterModel& model) {
    ModelParams p;
    p.A = model.A;
    p.R = model.R;
    p.S = model.S();
    return p;
}

}  // namespace

void validate(const FilterModel& model) {
    if (!(model.R > 0.0)) throw std::invalid_argument("FilterModel: R > 0 required");
    if (!(model.Sigma > 0.0)) throw std::invalid_argument("FilterModel: Sigma > 0 required");
    if (model.B == 0.0) throw std::invalid_argument("FilterModel: B != 0 required (S > 0)");
    if (!(model.P0 >= 0.0)) throw std::invalid_argument("FilterModel: P0 >= 0 required");
}

void validate(const FilterConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("FilterConfig: dt > 0 required");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("FilterConfig: horizon > 0 required");
    if (!(cfg.dt <= cfg.horizon))
        throw std::invalid_argument("FilterConfig: dt <= horizon required");
}

TruthPath simulate_truth(const FilterModel& model, const FilterConfig& cfg) {
    validate(model);
    validate(cfg);
    const StepGrid g = step_grid(cfg);
    Rng rng_w(cfg.seed, kStreamSignal);
    Rng rng_v(cfg.seed, kStreamObs);
    TruthPath out;
    out.times.resize(g.n_steps + 1);
    out.signal.resize(g.n_steps + 1);
    out.dy.resize(g.n_steps);
    double x = model.m0 + std::sqrt(model.P0) * rng_w.normal();
    out.times[0] = 0.0;
    out.signal[0] = x;
    const double sqrt_r = std::sqrt(model.R);
    const double sqrt_sig = std::sqrt(model.Sigma);
    for (std::size_t k = 0; k < g.n_steps; ++k) {
        const double h = (k + 1 == g.n_steps) ? g.dt_last : cfg.dt;
        const double rh = std::sqrt(h);
        out.dy[k] = model.B * x * h + sqrt_sig * rh * rng_v.normal();
        x += model.A * x * h + sqrt_r * rh * rng_w.normal();
        out.times[k + 1] = grid_time(cfg, g, k + 1);
        out.signal[k + 1] = x;
    }
    return out;
}

KalmanRun kalman_bucy(const FilterModel& model, const TruthPath& truth,
                      const FilterConfig& cfg) {
    validate(model);
    validate(cfg);
    const StepGrid g = step_grid(cfg);
    if (truth.times.size() != g.n_steps + 1 || truth.dy.size() != g.n_steps)
        throw std::invalid_argument("kalman_bucy: observation path not on the config grid");
    const ModelParams p = variance_flow_params(model);
    const double gain_w = model.B / model.Sigma;
    KalmanRun run;
    run.times = truth.times;
    run.mean.resize(g.n_steps + 1);
    run.variance.resize(g.n_steps + 1);
    double m = model.m0;
    run.mean[0] = m;
    run.variance[0] = model.P0;
    for (std::size_t k = 0; k < g.n_steps; ++k) {
        const double h = (k + 1 == g.n_steps) ? g.dt_last : cfg.dt;
        const double pv = run.variance[k];
        m += (model.A - model.S() * pv) * m * h + pv * gain_w * truth.dy[k];
        run.variance[k + 1] = phi(run.times[k + 1], model.P0, p);
        run.mean[k + 1] = m;
    }
    return run;
}

void variant_noise_weights(Variant v, const FilterModel& model, double& U, double& V) {
    switch (v) {
        case Variant::vanilla:
            U = model.R;
            V = model.S();
            return;
        case Variant::deterministic:
            U = model.R;
            V = 0.0;
            return;
        case Variant::transport:
            U = 0.0;
            V = 0.0;
            return;
    }
}

ModelParams reduced_params(const FilterModel& model, Variant v, std::size_t N) {
    if (N < 1) throw std::invalid_argument("reduced_params: N >= 1 required");
    validate(model);
    ModelParams p = variance_flow_params(model);
    variant_noise_weights(v, model, p.U, p.V);
    p.eps = 2.0 / std::sqrt(static_cast<double>(N));
    p.eps_bar = 1.0 / std::sqrt(static_cast<double>(N) + 1.0);
    return p;
}

EnkfRun run_enkf(const FilterModel& model, Variant v, std::size_t N, const FilterConfig& cfg) {
    validate(model);
    validate(cfg);
    if (N < 1) throw std::invalid_argument("run_enkf: N >= 1 required");
    const StepGrid g = step_grid(cfg);
    const std::size_t n_members = N + 1;
    const TruthPath truth = simulate_truth(model, cfg);
    const KalmanRun kalman = kalman_bucy(model, truth, cfg);

    EnkfRun run;
    run.variant = v;
    run.N = N;
    run.times = truth.times;
    run.signal = truth.signal;
    run.kalman_mean = kalman.mean;
    run.kalman_var = kalman.variance;
    run.sample_mean.resize(g.n_steps + 1);
    run.sample_var.resize(g.n_steps + 1);
    run.members.resize((g.n_steps + 1) * n_members);

    std::vector<double> x(n_members);
    {
        Rng rng_init(cfg.seed, kStreamInit);
        const double sp = std::sqrt(model.P0);
        for (std::size_t i = 0; i < n_members; ++i) x[i] = model.m0 + sp * rng_init.normal();
    }
    std::vector<Rng> rng_w, rng_v;
    rng_w.reserve(n_members);
    rng_v.reserve(n_members);
    for (std::size_t i = 0; i < n_members; ++i) {
        rng_w.emplace_back(cfg.seed, kStreamMembers + 2 * i);
        rng_v.emplace_back(cfg.seed, kStreamMembers + 2 * i + 1);
    }

    const double S = model.S();
    const double gain_w = model.B / model.Sigma;
    const double sqrt_r = std::sqrt(model.R);
    const double sqrt_sig = std::sqrt(model.Sigma);

    const auto stats = [&](std::size_t k) {
        double mean = 0.0;
        for (double xi : x) mean += xi;
        mean /= static_cast<double>(n_members);
        double var = 0.0;
        for (double xi : x) var += (xi - mean) * (xi - mean);
        var /= static_cast<double>(N);  // (1 + 1/N) * (N+1)-divisor variance
        run.sample_mean[k] = mean;
        run.sample_var[k] = var;
        for (std::size_t i = 0; i < n_members; ++i) run.members[k * n_members + i] = x[i];
    };

    stats(0);
    for (std::size_t k = 0; k < g.n_steps; ++k) {
        const double h = (k + 1 == g.n_steps) ? g.dt_last : cfg.dt;
        const double rh = std::sqrt(h);
        const double mean = run.sample_mean[k];
        const double pv = run.sample_var[k];
        const double gain = pv * gain_w;
        switch (v) {
            case Variant::vanilla:
                for (std::size_t i = 0; i < n_members; ++i) {
                    const double dw = rh * rng_w[i].normal();
                    const double dv = rh * rng_v[i].normal();
                    x[i] += model.A * x[i] * h + sqrt_r * dw +
                            gain * (truth.dy[k] - (model.B * x[i] * h + sqrt_sig * dv));
                }
                break;
            case Variant::deterministic:
                for (std::size_t i = 0; i < n_members; ++i) {
                    const double dw = rh * rng_w[i].normal();
                    x[i] += model.A * x[i] * h + sqrt_r * dw +
                            gain * (truth.dy[k] - 0.5 * model.B * (x[i] + mean) * h);
                }
                break;
            case Variant::transport: {
                if (!(pv > 1e-12))
                    throw std::runtime_error(
                        "run_enkf: transport variant degenerate (sample variance <= 1e-12)");
                const double q = 0.5 * (model.R / pv - pv * S);
                for (std::size_t i = 0; i < n_members; ++i) {
                    x[i] += (model.A * x[i] + q * (x[i] - mean)) * h +
                            gain * (truth.dy[k] - model.B * mean * h);
                }
                break;
            }
        }
        stats(k + 1);
    }
    return run;
}

sde::CoupledXZ run_reduced(const FilterModel& model, Variant v, std::size_t N,
                           const sde::SimConfig& cfg, double x0, double z0) {
    return sde::simulate_coupled_xz(reduced_params(model, v, N), x0, z0, cfg);
}

}  // namespace riccati::enkf
