#include "riccati/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace riccati {

double phi(double t, double x, const ModelParams& p) {
    if (!(t >= 0.0)) throw std::invalid_argument("phi: t >= 0 required");
    if (!(x >= 0.0)) throw std::invalid_argument("phi: x >= 0 required");
    const DerivedParams d = derive(p);
    if (d.lambda * t > 700.0) return d.varpi_plus;
    const double e = std::exp(-d.lambda * t);
    const double D = d.varpi_plus - d.varpi_minus;
    const double denom = D * e + (x - d.varpi_minus) * (1.0 - e);
    return d.varpi_plus + (x - d.varpi_plus) * D * e / denom;
}

double phi_derivative(int n, double t, double x, const ModelParams& p) {
    if (n < 1) throw std::invalid_argument("phi_derivative: n >= 1 required");
    if (!(t >= 0.0)) throw std::invalid_argument("phi_derivative: t >= 0 required");
    if (!(x >= 0.0)) throw std::invalid_argument("phi_derivative: x >= 0 required");
    const DerivedParams d = derive(p);
    if (d.lambda * t > 700.0) return 0.0;
    const double e = std::exp(-d.lambda * t);
    const double one_me = 1.0 - e;
    const double D = d.varpi_plus - d.varpi_minus;
    const double denom = e * D + one_me * (x - d.varpi_minus);
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    return fact * sign * D * D * std::pow(one_me, n - 1) * e / std::pow(denom, n + 1);
}

double phi_star(double x, const ModelParams& p) {
    if (!(x >= 0.0)) throw std::invalid_argument("phi_star: x >= 0 required");
    return std::max(x, derive(p).varpi_plus);
}

double phi_minus_star(double x, const ModelParams& p) {
    if (!(x > 0.0)) throw std::invalid_argument("phi_minus_star: x > 0 required");
    const double e2 = p.eps * p.eps;
    if (!(p.R - e2 * p.U > 0.0))
        throw std::invalid_argument("phi_minus_star: R > eps^2 U required for the reciprocal flow");
    ModelParams inv;
    inv.A = -p.A;
    inv.R = p.S + e2 * p.V;
    inv.S = p.R - e2 * p.U;
    inv.U = p.V;
    inv.V = p.U;
    inv.eps = p.eps;
    return std::max(1.0 / x, derive(inv).varpi_plus);
}

FlowEnvelope flow_envelope(double upsilon, const ModelParams& p) {
    if (!(upsilon > 0.0)) throw std::invalid_argument("flow_envelope: upsilon > 0 required");
    const DerivedParams d = derive(p);
    FlowEnvelope env;
    env.lower = phi(upsilon, 0.0, p);
    env.upper = d.varpi_plus +
                (d.varpi_plus - d.varpi_minus) / std::expm1(d.lambda * upsilon);
    return env;
}

}  // namespace riccati
