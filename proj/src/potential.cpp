#include "riccati/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riccati/family.hpp"

namespace riccati {

double potential_H(const ModelParams& p, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("potential_H: x > 0 required");
    if (!(p.U + p.V > 0.0)) throw std::invalid_argument("potential_H: U + V > 0 required");
    // H = -dLambda + (dsigma/sigma) Lambda + (1/2) sigma_eps d2(sigma_eps),
    // with sigma_eps d2(sigma_eps) = eps^2 [3Vx - (U+3Vx^2)^2 / (4x(U+Vx^2))].
    // The Monte Carlo tangent identities pin this normalization; the closed
    // forms in rate_lambda_eps use a slightly smaller curvature term and are
    // therefore strict lower bounds of inf H at eps > 0.
    const double e2 = p.eps * p.eps;
    const double num = p.U + 3.0 * p.V * x * x;
    const double den = p.U + p.V * x * x;
    return num / den * (p.A + 0.5 * p.R / x - 0.5 * p.S * x) - 2.0 * (p.A - p.S * x) +
           e2 / 4.0 * (6.0 * p.V * x - num * num / (2.0 * x * den));
}

double rate_lambda_eps(const ModelParams& p) {
    validate(p);
    const double e2 = p.eps * p.eps;
    if (p.V == 0.0) {
        const double r_eff = p.R - e2 / 2.0 * p.U;
        if (!(r_eff >= 0.0))
            throw std::invalid_argument("rate_lambda_eps: 2R >= eps^2*U required when V = 0");
        return -p.A + std::sqrt(3.0 * r_eff * p.S);
    }
    if (p.U == 0.0) {
        const double s_eff = p.S - 3.0 * e2 / 2.0 * p.V;
        if (!(s_eff >= 0.0))
            throw std::invalid_argument("rate_lambda_eps: 2S >= 3*eps^2*V required when U = 0");
        return p.A + std::sqrt(3.0 * p.R * s_eff);
    }
    const double r_eff = p.R - e2 / 2.0 * p.U;
    const double s_eff = p.S + 3.0 * e2 * p.V * (p.S - 1.5);
    if (!(r_eff >= 0.0))
        throw std::invalid_argument("rate_lambda_eps: 2R >= eps^2*U required");
    if (!(s_eff >= 0.0))
        throw std::invalid_argument(
            "rate_lambda_eps: S*(1 + 3*eps^2*V) >= 9/2*eps^2*V required");
    return -std::abs(p.A) + std::sqrt(r_eff * s_eff);
}

bool rate_lambda_eps_is_exact(const ModelParams& p) { return p.U == 0.0 || p.V == 0.0; }

double potential_H_hat(const ModelParams& p, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("potential_H_hat: x > 0 required");
    family(p, FamilyVariant::hat, 1.0, p.eps);  // well-foundedness check
    const DerivedParams d = derive(p);
    const double iota1 = 1.0 + d.iota;
    const double e2 = p.eps * p.eps;
    const double u_fac = 1.0 - e2 / 2.0 * iota1 * d.Ubar;
    const double v_fac = 1.0 + e2 / 2.0 * iota1 * d.Vbar;
    return 2.0 * d.iota * (p.A - v_fac * p.S * x) +
           iota1 * (u_fac * p.R / x + v_fac * p.S * x);
}

double minimize_log_grid(const std::function<double(double)>& f, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("minimize_log_grid: scale > 0 required");
    constexpr int n = 1024;
    const double lo = std::log(1e-6 * scale);
    const double hi = std::log(1e6 * scale);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = std::exp(lo + (hi - lo) * i / (n - 1));
        const double v = f(x);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    auto node = [&](int i) { return std::exp(lo + (hi - lo) * i / (n - 1)); };
    double a = node(best > 0 ? best - 1 : best);
    double b = node(best < n - 1 ? best + 1 : best);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * (std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::min({best_val, fc, fd});
}

}  // namespace riccati
