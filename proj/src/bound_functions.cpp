#include "riccati/bound_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riccati/family.hpp"
#include "riccati/flow.hpp"

namespace riccati {

namespace {

double sigma1_sq(const ModelParams& p, double x) {
    const double s = sigma1(p, x);
    return s * s;
}

}  // namespace

double bound_v(const ModelParams& p, double x, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("bound_v: n >= 1 required");
    const DerivedParams d = derive(p);
    const double varpi_lambda =
        -(d.varpi * d.varpi / d.varpi_minus) * std::sqrt(2.0 / d.lambda);
    const double s2 = sigma1_sq(p, phi_star_modified(x, p, 3.0 * n));
    const double s1 = sigma1(p, phi_star_modified(x, p, 1.5 * n));
    return varpi_lambda *
           (p.eps / std::sqrt(2.0 * d.lambda) * s2 - 0.5 * n * d.varpi_minus * s1);
}

double bound_rho(const ModelParams& p, double x, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("bound_rho: kappa > 0 required");
    if (!(x >= 0.0)) throw std::invalid_argument("bound_rho: x >= 0 required");
    const DerivedParams d = derive(p);
    const KappaParams kp = kappa_derive(p, kappa);
    const double order = std::max(kp.iota_kappa, 1.0);
    const double floor_val = phi(1.0, 0.0, family(p, FamilyVariant::modified, -order).derived);
    const double iota1 = 1.0 + d.iota;
    return std::pow(1.0 + d.varpi_plus / std::max(floor_val, x), iota1) *
           std::exp(3.0 * d.lambda);
}

BoundFunctions bound_functions(const ModelParams& p, double x, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("bound_functions: n >= 1 required");
    if (!(x >= 0.0)) throw std::invalid_argument("bound_functions: x >= 0 required");
    const DerivedParams d = derive(p);
    const double varpi_lambda =
        -(d.varpi * d.varpi / d.varpi_minus) * std::sqrt(2.0 / d.lambda);

    auto v_sub = [&](double m) { return std::max(1.0, bound_v(p, x, m)); };

    BoundFunctions out;
    out.v = bound_v(p, x, n);

    const double w1 =
        varpi_lambda * (n * v_sub(n) * sigma1(p, phi_star(x, p)) +
                        sigma1_sq(p, phi_star_modified(x, p, 3.0 * n)) /
                            std::sqrt(2.0 * d.lambda));
    const double inv_sup = p.U > 0.0 ? phi_minus_star(x, p) : 0.0;
    const double w2 =
        1.5 * n * varpi_lambda *
        std::sqrt(p.U * inv_sup + std::sqrt(p.U * p.V) +
                  0.5 * p.V * phi_star_modified(x, p, n)) *
        (2.0 * p.eps * v_sub(4.0 * n) * v_sub(4.0 * n) - v_sub(2.0 * n) * d.varpi_minus);
    out.w = w1 + w2;

    const double varpi_lambda_bar =
        3.0 / d.lambda * (d.varpi / d.varpi_minus) * (d.varpi / d.varpi_minus);
    const double v4 = v_sub(4.0);
    const double phi4 = phi_star_modified(x, p, 4.0);
    out.w_bar = varpi_lambda_bar * v4 * v4 *
                (sigma1_sq(p, phi_star(x, p)) +
                 (p.U / 3.0 + 4.0 * p.V * phi4 * phi4) * (3.0 * p.eps - d.varpi_minus));

    out.rho = bound_rho(p, x, n);
    return out;
}

}  // namespace riccati
