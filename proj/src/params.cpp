#include "riccati/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace riccati {

void validate(const ModelParams& p) {
    if (!(p.R > 0.0)) throw std::invalid_argument("ModelParams: R > 0 required");
    if (!(p.S > 0.0)) throw std::invalid_argument("ModelParams: S > 0 required");
    if (!(p.U >= 0.0)) throw std::invalid_argument("ModelParams: U >= 0 required");
    if (!(p.V >= 0.0)) throw std::invalid_argument("ModelParams: V >= 0 required");
    if (!(p.eps >= 0.0)) throw std::invalid_argument("ModelParams: eps >= 0 required");
    if (!(p.eps_bar >= 0.0 && p.eps_bar <= 1.0))
        throw std::invalid_argument("ModelParams: eps_bar in [0,1] required");
}

DerivedParams derive(const ModelParams& p) {
    validate(p);
    DerivedParams d;
    d.lambda = 2.0 * std::sqrt(p.A * p.A + p.R * p.S);
    d.varpi_plus = (p.A + d.lambda / 2.0) / p.S;
    d.varpi_minus = (p.A - d.lambda / 2.0) / p.S;
    d.jmath = p.A / std::sqrt(p.R * p.S);
    d.iota = d.jmath / std::sqrt(1.0 + d.jmath * d.jmath);
    d.varpi = 2.0 / (1.0 - d.iota);
    d.Ubar = p.U / p.R;
    d.Vbar = p.V / p.S;
    d.zeta = (d.iota + 1.0) * d.Ubar / (d.jmath * d.jmath + 1.0);
    const double c = 3.0 * p.A / (2.0 * p.S);
    const double disc = std::sqrt(c * c + 3.0 * p.R / p.S);
    d.chi_minus = c - disc;
    d.chi_plus = c + disc;
    return d;
}

KappaParams kappa_derive(const ModelParams& p, double kappa) {
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa_derive: kappa >= 0 required");
    const DerivedParams d = derive(p);
    KappaParams k;
    k.kappa = kappa;
    const double i1 = 1.0 + d.iota;
    const double j2 = 1.0 + d.jmath * d.jmath;
    k.iota_kappa = kappa * i1;
    k.jmath_kappa = (k.iota_kappa + 1.0) * i1 * i1 * j2 - 1.0;
    k.zeta_kappa = ((k.iota_kappa + 1.0) * d.Ubar + (k.jmath_kappa + 1.0) * d.Vbar) / j2;
    const double e2h = p.eps * p.eps / 2.0;
    k.lambda_hat_eps = d.lambda * (1.0 - e2h * d.zeta);
    k.lambda_hat_eps_kappa = d.lambda * (1.0 - e2h * k.zeta_kappa);
    k.eps_kappa = k.zeta_kappa > 0.0 ? std::sqrt(2.0 / k.zeta_kappa)
                                     : std::numeric_limits<double>::infinity();
    const double f1 = 1.0 - e2h * (1.0 + k.iota_kappa) * d.Ubar;
    const double f2 = 1.0 - e2h * (1.0 + k.jmath_kappa) * d.Vbar;
    k.ell_eps_kappa = (f1 >= 0.0 && f2 >= 0.0) ? std::sqrt(f1 * f2)
                                               : std::numeric_limits<double>::quiet_NaN();
    return k;
}

double sigma1(const ModelParams& p, double x) {
    if (x <= 0.0) return 0.0;
    return std::sqrt(x * (p.U + p.V * x * x));
}

}  // namespace riccati
