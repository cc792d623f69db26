#include "riccati/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riccati/flow.hpp"
#include "riccati/parallel.hpp"
#include "riccati/quadrature.hpp"
#include "riccati/rng.hpp"

namespace riccati::sde {

namespace {

// Per-step deterministic data shared by every path: the flow curve and the
// first-order propagation factors.
struct DetCurve {
    std::vector<double> h;        // step sizes
    std::vector<double> sqrt_h;   // sqrt of step sizes
    std::vector<double> f;        // dphi_h(phi_{t_k})
    std::vector<double> g;        // sigma1(phi_{t_k})
    std::vector<double> phi_rec;  // phi at the record instants
};

DetCurve det_curve(const ModelParams& p, double x0, const SimConfig& cfg,
                   const detail::StepPlan& pl) {
    DetCurve c;
    c.h.resize(pl.n_steps);
    c.sqrt_h.resize(pl.n_steps);
    c.f.resize(pl.n_steps);
    c.g.resize(pl.n_steps);
    for (std::size_t k = 0; k < pl.n_steps; ++k) {
        const double t_k = static_cast<double>(k) * cfg.dt;
        const double h = (k + 1 == pl.n_steps) ? pl.dt_last : cfg.dt;
        const double phi_k = phi(t_k, x0, p);
        c.h[k] = h;
        c.sqrt_h[k] = std::sqrt(h);
        c.f[k] = phi_derivative(1, h, phi_k, p);
        c.g[k] = sigma1(p, phi_k);
    }
    c.phi_rec.resize(pl.rec_steps.size());
    for (std::size_t j = 0; j < pl.rec_steps.size(); ++j) {
        const double t = pl.rec_steps[j] == pl.n_steps
                             ? cfg.horizon
                             : static_cast<double>(pl.rec_steps[j]) * cfg.dt;
        c.phi_rec[j] = phi(t, x0, p);
    }
    return c;
}

}  // namespace

double second_order_limit(const ModelParams& p, double x0, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("second_order_limit: t >= 0 required");
    if (t == 0.0) return 0.0;
    return 0.5 * simpson(
                     [&](double s) {
                         const double y = phi(s, x0, p);
                         const double s1 = sigma1(p, y);
                         return phi_derivative(2, t - s, y, p) * s1 * s1;
                     },
                     0.0, t, 256);
}

FluctuationFields fluctuation_fields(const ModelParams& p, double x0, const SimConfig& cfg) {
    riccati::validate(p);
    validate(cfg);
    if (!(p.eps > 0.0)) throw std::invalid_argument("fluctuation_fields: eps > 0 required");
    if (!(x0 >= 0.0)) throw std::invalid_argument("fluctuation_fields: x0 >= 0 required");

    const detail::StepPlan pl = detail::make_step_plan(cfg);
    const DetCurve c = det_curve(p, x0, cfg, pl);
    const std::size_t m = pl.rec_steps.size();

    FluctuationFields out;
    out.params = p;
    out.x0 = x0;
    out.n_paths = cfg.n_paths;
    out.times = record_times(cfg);
    out.v_eps.resize(cfg.n_paths * m);
    out.w_eps.resize(cfg.n_paths * m);
    out.v_limit.resize(cfg.n_paths * m);
    out.w_limit.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.w_limit[j] = second_order_limit(p, x0, out.times[j]);

    parallel_chunks(cfg.n_paths, 256, [&](std::size_t b, std::size_t e) {
        for (std::size_t path = b; path < e; ++path) {
            Rng rng(cfg.seed, 2 * path);
            double x = x0;
            double v = 0.0;
            std::size_t ri = 0;
            const auto record = [&](std::size_t j) {
                const double veps = (x - c.phi_rec[j]) / p.eps;
                out.v_eps[path * m + j] = veps;
                out.v_limit[path * m + j] = v;
                out.w_eps[path * m + j] = (veps - v) / p.eps;
            };
            record(ri++);
            for (std::size_t step = 0; step < pl.n_steps; ++step) {
                const double dw = rng.normal() * c.sqrt_h[step];
                v = c.f[step] * (v + c.g[step] * dw);
                x = advance_state(p, cfg.scheme, x, c.h[step], dw);
                if (!std::isfinite(x)) {
                    for (; ri < m; ++ri) {
                        out.v_eps[path * m + ri] = std::numeric_limits<double>::quiet_NaN();
                        out.w_eps[path * m + ri] = std::numeric_limits<double>::quiet_NaN();
                        out.v_limit[path * m + ri] = v;
                    }
                    break;
                }
                if (ri < m && pl.rec_steps[ri] == step + 1) record(ri++);
            }
        }
    });
    return out;
}

std::vector<FluctuationFields> fluctuation_fields(const ModelParams& p, double x0,
                                                  const SimConfig& cfg,
                                                  const std::vector<double>& eps_list) {
    std::vector<FluctuationFields> out;
    out.reserve(eps_list.size());
    for (double eps : eps_list) {
        ModelParams q = p;
        q.eps = eps;
        out.push_back(fluctuation_fields(q, x0, cfg));
    }
    return out;
}

FluctuationScaling fluctuation_scaling(const ModelParams& p, double x0, const SimConfig& cfg) {
    riccati::validate(p);
    validate(cfg);
    if (!(p.eps > 0.0)) throw std::invalid_argument("fluctuation_scaling: eps > 0 required");
    if (!(x0 >= 0.0)) throw std::invalid_argument("fluctuation_scaling: x0 >= 0 required");
    if (cfg.n_paths < 64)
        throw std::invalid_argument("fluctuation_scaling: n_paths >= 64 required");

    const detail::StepPlan pl = detail::make_step_plan(cfg);
    const DetCurve c = det_curve(p, x0, cfg, pl);
    const std::size_t m = pl.rec_steps.size();
    const std::size_t n = cfg.n_paths;
    const std::size_t n_batches = 32;
    const std::size_t chunk = (n + n_batches - 1) / n_batches;
    const std::size_t eff_batches = (n + chunk - 1) / chunk;

    // Per batch: sum of D and D^2 at every instant, D = X - phi - eps*V.
    std::vector<double> sum_d(eff_batches * m, 0.0);
    std::vector<double> sum_d2(eff_batches * m, 0.0);
    std::vector<std::size_t> batch_size(eff_batches, 0);

    parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e) {
        const std::size_t batch = b / chunk;
        double* sd = &sum_d[batch * m];
        double* sd2 = &sum_d2[batch * m];
        batch_size[batch] = e - b;
        for (std::size_t path = b; path < e; ++path) {
            Rng rng(cfg.seed, 2 * path);
            double x = x0;
            double v = 0.0;
            std::size_t ri = 1;  // instant 0 contributes D = 0 exactly
            for (std::size_t step = 0; step < pl.n_steps; ++step) {
                const double dw = rng.normal() * c.sqrt_h[step];
                v = c.f[step] * (v + c.g[step] * dw);
                x = advance_state(p, cfg.scheme, x, c.h[step], dw);
                if (ri < m && pl.rec_steps[ri] == step + 1) {
                    const double d = x - c.phi_rec[ri] - p.eps * v;
                    sd[ri] += d;
                    sd2[ri] += d * d;
                    ++ri;
                }
            }
        }
    });

    FluctuationScaling out;
    out.eps = p.eps;
    out.n_paths = n;
    out.times = record_times(cfg);
    out.remainder_l2.assign(m, 0.0);
    std::size_t jmax = 0;
    for (std::size_t j = 1; j < m; ++j) {
        double total = 0.0;
        for (std::size_t b = 0; b < eff_batches; ++b) total += sum_d2[b * m + j];
        out.remainder_l2[j] = std::sqrt(total / static_cast<double>(n));
        if (out.remainder_l2[j] > out.remainder_l2[jmax]) jmax = j;
    }
    out.remainder_l2_max = out.remainder_l2[jmax];

    const auto batch_se = [&](const std::vector<double>& sums, std::size_t j) {
        double mean = 0.0;
        std::vector<double> bm(eff_batches);
        for (std::size_t b = 0; b < eff_batches; ++b) {
            bm[b] = sums[b * m + j] / static_cast<double>(batch_size[b]);
            mean += bm[b];
        }
        mean /= static_cast<double>(eff_batches);
        double var = 0.0;
        for (double v : bm) var += (v - mean) * (v - mean);
        var /= static_cast<double>(eff_batches - 1);
        return std::sqrt(var / static_cast<double>(eff_batches));
    };

    const double se_m2 = batch_se(sum_d2, jmax);
    out.remainder_l2_max_se =
        out.remainder_l2_max > 0.0 ? se_m2 / (2.0 * out.remainder_l2_max) : 0.0;

    const std::size_t last = m - 1;
    double mean_d = 0.0;
    for (std::size_t b = 0; b < eff_batches; ++b) mean_d += sum_d[b * m + last];
    mean_d /= static_cast<double>(n);
    out.w_limit_terminal = second_order_limit(p, x0, cfg.horizon);
    out.bias_abs = std::abs(mean_d - p.eps * p.eps * out.w_limit_terminal);
    out.bias_se = batch_se(sum_d, last);
    return out;
}

}  // namespace riccati::sde
