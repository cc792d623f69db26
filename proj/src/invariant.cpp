#include "riccati/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riccati/quadrature.hpp"
#include "riccati/rng.hpp"

namespace riccati::stationary {

namespace {

constexpr double kNatDrop = 60.0;  // support truncation: log-density drop below max
constexpr double kHuge = 1e300;

// Unnormalized log-density evaluated at y = log x, overflow-safe for the
// large |y| reached by tilted-moment truncation scans.
struct LogDensityY {
    Regime regime;
    // UV_pos / tails: a = (2/eps^2)(R/U), b = (2/eps^2)(S/V)
    double a = 0.0, b = 0.0, c_atan = 0.0, sqrt_vu = 0.0, U = 0.0, V = 0.0;
    // U_pos_V0 / gamma / U0_V_pos coefficients
    double gauss_w = 0.0, gauss_c = 0.0, rate = 0.0, inv_w = 0.0, inv_c = 0.0;

    double operator()(double y) const {
        switch (regime) {
            case Regime::UV_pos: {
                // (a-1) log x - (1 + (a+b)/2) log(U + V x^2) + c_atan*atan(x sqrt(V/U))
                const double pw = 1.0 + 0.5 * (a + b);
                double log_uv;
                double at;
                if (y > 300.0) {
                    log_uv = 2.0 * y + std::log(V + U * std::exp(-2.0 * y));
                    at = std::atan(1.0) * 2.0 - std::atan(std::exp(-y) / sqrt_vu);
                } else if (y < -300.0) {
                    log_uv = std::log(U + V * std::exp(2.0 * y));
                    at = std::atan(sqrt_vu * std::exp(y));
                } else {
                    const double x = std::exp(y);
                    log_uv = std::log(U + V * x * x);
                    at = std::atan(sqrt_vu * x);
                }
                return (a - 1.0) * y - pw * log_uv + c_atan * at;
            }
            case Regime::U_pos_V0: {
                // (a-1) log x - gauss_w (x - gauss_c)^2
                if (y > 300.0) return -kHuge;
                const double x = std::exp(y);
                return (a - 1.0) * y - gauss_w * (x - gauss_c) * (x - gauss_c);
            }
            case Regime::gamma_case: {
                // (a-1) log x - rate*x
                if (y > 300.0) return -kHuge;
                return (a - 1.0) * y - rate * std::exp(y);
            }
            case Regime::U0_V_pos: {
                // -(b+3) log x - inv_w (1/x + inv_c)^2
                if (y < -300.0) return -kHuge;
                const double u = std::exp(-y);
                return -(b + 3.0) * y - inv_w * (u + inv_c) * (u + inv_c);
            }
        }
        return -kHuge;
    }
};

LogDensityY make_log_density(const ModelParams& p, Regime regime) {
    LogDensityY f;
    f.regime = regime;
    const double e2 = p.eps * p.eps;
    f.U = p.U;
    f.V = p.V;
    if (p.U > 0.0) f.a = 2.0 * p.R / (e2 * p.U);
    if (p.V > 0.0) f.b = 2.0 * p.S / (e2 * p.V);
    switch (regime) {
        case Regime::UV_pos:
            f.c_atan = 4.0 * p.A / (e2 * std::sqrt(p.U * p.V));
            f.sqrt_vu = std::sqrt(p.V / p.U);
            break;
        case Regime::U_pos_V0:
            f.gauss_w = p.S / (p.U * e2);
            f.gauss_c = 2.0 * p.A / p.S;
            break;
        case Regime::gamma_case:
            f.rate = 4.0 * std::abs(p.A) / (e2 * p.U);
            break;
        case Regime::U0_V_pos:
            f.inv_w = p.R / (p.V * e2);
            f.inv_c = 2.0 * p.A / p.R;
            break;
    }
    return f;
}

// Maximizer of a unimodal g over [lo, hi]: coarse scan then golden-section.
double maximize(const LogDensityY& f, double shift, double lo, double hi) {
    const auto g = [&](double y) { return f(y) + shift * y; };
    const int n_scan = 8192;
    double best_y = lo;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n_scan; ++i) {
        const double y = lo + (hi - lo) * i / n_scan;
        const double v = g(y);
        if (v > best) {
            best = v;
            best_y = y;
        }
    }
    const double step = (hi - lo) / n_scan;
    double a = best_y - step;
    double b = best_y + step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double gc = g(c);
    double gd = g(d);
    for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - gr * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + gr * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

// Walks outward from the mode until the tilted log-density has dropped
// kNatDrop nats below its max; returns the y bound.
double nat_drop_bound(const LogDensityY& f, double shift, double y_mode, double g_max,
                      double direction) {
    const auto g = [&](double y) { return f(y) + shift * y; };
    double step = 0.25;
    double y = y_mode;
    for (int it = 0; it < 400000; ++it) {
        y += direction * step;
        if (g(y) < g_max - kNatDrop) {
            // bisect back for a tight bound
            double in = y - direction * step;
            double out = y;
            for (int b = 0; b < 80; ++b) {
                const double mid = 0.5 * (in + out);
                if (g(mid) < g_max - kNatDrop)
                    out = mid;
                else
                    in = mid;
            }
            return out;
        }
        if (it > 64) step = std::min(step * 1.05, 64.0);
    }
    throw std::invalid_argument("stationary build: tail truncation not found (divergent?)");
}

struct TiltedIntegral {
    double y_lo, y_hi, g_max, log_value;  // log ∫ exp(f(y) + shift*y) dy
};

TiltedIntegral tilted_integral(const LogDensityY& f, double shift) {
    const double y_mode = maximize(f, shift, -200.0, 200.0);
    const double g_max = f(y_mode) + shift * y_mode;
    const double y_lo = nat_drop_bound(f, shift, y_mode, g_max, -1.0);
    const double y_hi = nat_drop_bound(f, shift, y_mode, g_max, +1.0);
    const auto integrand = [&](double y) { return std::exp(f(y) + shift * y - g_max); };
    const double i1 = integrate(integrand, y_lo, y_mode, 1e-10, 1e-300, 8192);
    const double i2 = integrate(integrand, y_mode, y_hi, 1e-10, 1e-300, 8192);
    TiltedIntegral out;
    out.y_lo = y_lo;
    out.y_hi = y_hi;
    out.g_max = g_max;
    out.log_value = g_max + std::log(i1 + i2);
    return out;
}

void check_admissible(const ModelParams& p) {
    if (!(p.eps > 0.0))
        throw std::invalid_argument("stationary build: eps > 0 required (no density at eps=0)");
    if (p.U > 0.0 && !(p.eps * p.eps * p.U / p.R < 2.0))
        throw std::invalid_argument(
            "stationary build: eps^2*U/R < 2 required (repellent origin)");
    if (!(p.R > 0.0)) throw std::invalid_argument("stationary build: R > 0 required");
    if (!(p.U >= 0.0 && p.V >= 0.0 && p.S >= 0.0))
        throw std::invalid_argument("stationary build: U, V, S >= 0 required");
}

}  // namespace

Regime classify(const ModelParams& p) {
    if (p.U > 0.0 && p.V > 0.0) return Regime::UV_pos;
    if (p.U > 0.0 && p.V == 0.0 && p.S > 0.0) return Regime::U_pos_V0;
    if (p.U > 0.0 && p.V == 0.0 && p.S == 0.0 && p.A < 0.0) return Regime::gamma_case;
    if (p.U == 0.0 && p.V > 0.0) return Regime::U0_V_pos;
    throw std::invalid_argument("stationary classify: no invariant-measure regime matches");
}

StationaryMeasure build(const ModelParams& p) {
    check_admissible(p);
    StationaryMeasure msr;
    msr.regime = classify(p);
    msr.params = p;
    const LogDensityY f = make_log_density(p, msr.regime);

    const TiltedIntegral norm = tilted_integral(f, 1.0);  // density of y carries e^y
    msr.log_norm = norm.log_value;
    msr.mode = std::exp(maximize(f, 0.0, norm.y_lo - 5.0, norm.y_hi + 5.0));
    msr.support_lo = std::exp(norm.y_lo);
    msr.support_hi = std::exp(norm.y_hi);

    // CDF by composite Simpson on a uniform y grid over the support, then a
    // second pass concentrated on the quantile window so the grid keeps at
    // least 4096 usable nodes.
    const auto build_cdf = [&](double y0, double y1, std::size_t n_cells,
                               std::vector<double>& xs, std::vector<double>& ps,
                               double offset) {
        const double h = (y1 - y0) / static_cast<double>(n_cells);
        const auto pdf_y = [&](double y) { return std::exp(f(y) + y - msr.log_norm); };
        xs.assign(n_cells + 1, 0.0);
        ps.assign(n_cells + 1, 0.0);
        xs[0] = std::exp(y0);
        ps[0] = offset;
        double prev = pdf_y(y0);
        for (std::size_t i = 0; i < n_cells; ++i) {
            const double ya = y0 + h * static_cast<double>(i);
            const double yb = ya + h;
            const double mid = pdf_y(0.5 * (ya + yb));
            const double cur = pdf_y(yb);
            ps[i + 1] = ps[i] + h / 6.0 * (prev + 4.0 * mid + cur);
            xs[i + 1] = std::exp(yb);
            prev = cur;
        }
    };

    // Pass 1: locate the quantile window on the full support.
    std::vector<double> xs0, ps0;
    build_cdf(norm.y_lo, norm.y_hi, 4096, xs0, ps0, 0.0);
    const double total = ps0.back();
    const double q_lo = 1e-9 * total;
    const double q_hi = (1.0 - 1e-9) * total;
    std::size_t i_lo = 0;
    while (i_lo + 1 < ps0.size() && ps0[i_lo + 1] < q_lo) ++i_lo;
    std::size_t i_hi = ps0.size() - 1;
    while (i_hi > 0 && ps0[i_hi - 1] > q_hi) --i_hi;
    const double w_lo = std::log(xs0[i_lo]);
    const double w_hi = std::log(xs0[i_hi]);

    // Pass 2: dense grid on the window; CDF offset = mass below the window.
    std::vector<double> xs, ps;
    build_cdf(w_lo, w_hi, 8192, xs, ps, ps0[i_lo]);

    // Normalize by the quadrature total (Simpson grid total matches the
    // adaptive integral to ~1e-10) and drop non-increasing nodes.
    msr.cdf_x.reserve(xs.size());
    msr.cdf_p.reserve(ps.size());
    double last_p = -1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pv = std::min(ps[i] / total, 1.0);
        if (pv > last_p) {
            msr.cdf_x.push_back(xs[i]);
            msr.cdf_p.push_back(pv);
            last_p = pv;
        }
    }
    if (msr.cdf_x.size() < 4096)
        throw std::invalid_argument("stationary build: CDF grid degenerate");
    return msr;
}

double log_density(const StationaryMeasure& msr, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("log_density: x > 0 required");
    const LogDensityY f = make_log_density(msr.params, msr.regime);
    return f(std::log(x)) - msr.log_norm;
}

double density(const StationaryMeasure& msr, double x) { return std::exp(log_density(msr, x)); }

std::vector<double> sample(const StationaryMeasure& msr, std::size_t n, std::uint64_t seed) {
    const std::vector<double>& px = msr.cdf_p;
    const std::vector<double>& xx = msr.cdf_x;
    const std::size_t m = px.size();

    // Fritsch-Carlson monotone cubic tangents for x as a function of p.
    std::vector<double> d(m - 1), t(m);
    for (std::size_t i = 0; i + 1 < m; ++i) d[i] = (xx[i + 1] - xx[i]) / (px[i + 1] - px[i]);
    t[0] = d[0];
    t[m - 1] = d[m - 2];
    for (std::size_t i = 1; i + 1 < m; ++i)
        t[i] = d[i - 1] * d[i] <= 0.0 ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (d[i] == 0.0) {
            t[i] = t[i + 1] = 0.0;
            continue;
        }
        const double al = t[i] / d[i];
        const double be = t[i + 1] / d[i];
        const double s2 = al * al + be * be;
        if (s2 > 9.0) {
            const double sc = 3.0 / std::sqrt(s2);
            t[i] = sc * al * d[i];
            t[i + 1] = sc * be * d[i];
        }
    }

    const auto inverse_cdf = [&](double u) {
        if (u <= px.front()) return xx.front();
        if (u >= px.back()) return xx.back();
        std::size_t lo = 0, hi = m - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (px[mid] <= u ? lo : hi) = mid;
        }
        const double h = px[lo + 1] - px[lo];
        const double s = (u - px[lo]) / h;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * xx[lo] + h10 * h * t[lo] + h01 * xx[lo + 1] + h11 * h * t[lo + 1];
    };

    Rng rng(seed, 0);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = inverse_cdf(rng.uniform());
    return out;
}

bool moment_exists(const ModelParams& p, int k) {
    const double e2 = p.eps * p.eps;
    if (p.U > 0.0 && !(static_cast<double>(k) > -2.0 * p.R / (e2 * p.U))) return false;
    if (p.V > 0.0 && !(static_cast<double>(k) < 2.0 + 2.0 * p.S / (e2 * p.V))) return false;
    return true;
}

double moment(const StationaryMeasure& msr, int k) {
    if (!moment_exists(msr.params, k)) return std::numeric_limits<double>::infinity();
    if (k == 0) return 1.0;
    const LogDensityY f = make_log_density(msr.params, msr.regime);
    const TiltedIntegral ti = tilted_integral(f, 1.0 + static_cast<double>(k));
    return std::exp(ti.log_value - msr.log_norm);
}

double tail_exponent(const StationaryMeasure& msr) {
    if (msr.regime != Regime::UV_pos && msr.regime != Regime::U0_V_pos)
        throw std::invalid_argument("tail_exponent: polynomial-tail regimes only");
    const ModelParams& p = msr.params;
    const LogDensityY f = make_log_density(p, msr.regime);
    const double scale = p.V > 0.0 && p.U > 0.0 ? std::sqrt(p.U / p.V) : 1.0;
    const double y0 = std::log(1e4 * scale);
    const double y1 = std::log(1e6 * scale);
    const int n = 64;
    double sy = 0.0, sf = 0.0, syy = 0.0, syf = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = y0 + (y1 - y0) * i / (n - 1);
        const double v = f(y);
        sy += y;
        sf += v;
        syy += y * y;
        syf += y * v;
    }
    return (n * syf - sy * sf) / (n * syy - sy * sy);
}

MeanBounds stationary_mean_bounds(const ModelParams& p) {
    const DerivedParams d = derive(p);
    const double e2 = p.eps * p.eps;
    if (!(e2 * d.Ubar < 1.0))
        throw std::invalid_argument("stationary_mean_bounds: eps^2*U/R < 1 required");
    const double root =
        std::sqrt(p.A * p.A + p.R * p.S * (1.0 - e2 * d.Ubar) * (1.0 + e2 * d.Vbar));
    MeanBounds mb;
    mb.lower = (p.A + root) / (p.S * (1.0 + e2 * d.Vbar));
    mb.upper = d.varpi_plus;
    return mb;
}

DriftBracket stationary_drift_bracket(const ModelParams& p) {
    const MeanBounds mb = stationary_mean_bounds(p);
    DriftBracket db;
    db.lower = p.A - mb.upper * p.S;
    db.upper = p.A - mb.lower * p.S;
    return db;
}

}  // namespace riccati::stationary
