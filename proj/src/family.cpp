#include "riccati/family.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "riccati/flow.hpp"

namespace riccati {

namespace {

ModelParams modified_of(const ModelParams& p, double n, double eps) {
    const DerivedParams d = derive(p);
    const double e2 = eps * eps;
    if (n >= 1.0) {
        if (!((n - 1.0) * e2 * d.Vbar < 2.0))
            throw std::invalid_argument(
                "family(modified): (n-1)*eps^2*V/S < 2 required, got n=" + std::to_string(n));
    } else if (n <= -1.0) {
        if (!((-n + 1.0) * e2 * d.Ubar < 2.0))
            throw std::invalid_argument(
                "family(modified): (|n|+1)*eps^2*U/R < 2 required, got n=" + std::to_string(n));
    } else {
        throw std::invalid_argument("family(modified): |n| >= 1 required");
    }
    ModelParams q = p;
    q.R = p.R + (n - 1.0) * (e2 / 2.0) * p.U;
    q.S = p.S - (n - 1.0) * (e2 / 2.0) * p.V;
    q.eps = eps;
    return q;
}

}  // namespace

ParamFamily family(const ModelParams& p, FamilyVariant variant, double n, double eps) {
    validate(p);
    if (!(eps >= 0.0)) throw std::invalid_argument("family: eps >= 0 required");
    const DerivedParams d = derive(p);
    const double e2 = eps * eps;
    ParamFamily out;
    out.variant = variant;
    switch (variant) {
        case FamilyVariant::modified:
            out.derived = modified_of(p, n, eps);
            break;
        case FamilyVariant::inverse: {
            if (!(p.R - e2 * p.U > 0.0))
                throw std::invalid_argument("family(inverse): R > eps^2*U required");
            ModelParams q;
            q.A = -p.A;
            q.R = p.S + e2 * p.V;
            q.S = p.R - e2 * p.U;
            q.U = p.V;
            q.V = p.U;
            q.eps = eps;
            q.eps_bar = p.eps_bar;
            out.derived = q;
            break;
        }
        case FamilyVariant::hat: {
            ModelParams q = p;
            q.R = p.R * (1.0 - e2 * (0.5 + d.iota) * d.Ubar);
            q.S = p.S * (1.0 - e2 * (0.5 - d.iota) * d.Vbar);
            q.eps = eps;
            if (!(q.R > 0.0 && q.S > 0.0))
                throw std::invalid_argument(
                    "family(hat): eps too large, transformed R and S must stay positive");
            out.derived = q;
            break;
        }
        case FamilyVariant::bar: {
            ModelParams q = p;
            q.R = p.R * (1.0 + e2 / 2.0 * d.Ubar);
            q.S = p.S * (1.0 - 3.0 * e2 / 2.0 * d.Vbar);
            q.eps = eps;
            if (!(q.S > 0.0))
                throw std::invalid_argument("family(bar): 3*eps^2/2*V/S < 1 required");
            out.derived = q;
            break;
        }
        case FamilyVariant::hat_modified: {
            const ModelParams hat = family(p, FamilyVariant::hat, 1.0, eps).derived;
            out.derived = modified_of(hat, n, eps);
            break;
        }
    }
    return out;
}

double phi_modified(double t, double x, const ModelParams& p, double n, double eps) {
    return phi(t, x, family(p, FamilyVariant::modified, n, eps).derived);
}

double phi_modified(double t, double x, const ModelParams& p, double n) {
    return phi_modified(t, x, p, n, p.eps);
}

double phi_star_modified(double x, const ModelParams& p, double n, double eps) {
    return phi_star(x, family(p, FamilyVariant::modified, n, eps).derived);
}

double phi_star_modified(double x, const ModelParams& p, double n) {
    return phi_star_modified(x, p, n, p.eps);
}

double comparison_bound(const ModelParams& p, const ModelParams& pbar, double x) {
    if (!(p.R >= pbar.R && pbar.S >= p.S))
        throw std::invalid_argument("comparison_bound: R >= Rbar and Sbar >= S required");
    const DerivedParams d = derive(p);
    const DerivedParams dbar = derive(pbar);
    const double ps = phi_star(x, p);
    return 2.0 / (d.lambda + dbar.lambda) * dbar.varpi * d.varpi *
           ((p.R - pbar.R) + (pbar.S - p.S) * ps * ps);
}

}  // namespace riccati
