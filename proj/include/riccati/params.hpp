#pragma once

namespace riccati {

// Coefficients of the scalar Riccati diffusion
//   dX = (2*A*X + R - S*X^2) dt + eps * sqrt(X*(U + V*X^2)) dW,  X >= 0,
// plus the auxiliary noise scale eps_bar used by the coupled linear-error
// equation. R and S must be strictly positive; U, V, eps nonnegative and
// eps_bar in [0,1].
struct ModelParams {
    double A = 0.0;
    double R = 1.0;
    double S = 1.0;
    double U = 0.0;
    double V = 0.0;
    double eps = 0.0;
    double eps_bar = 0.0;
};

// Quantities derived from (A,R,S,U,V): the exponential decay rate, the drift
// equilibria, the shape parameters iota/jmath/varpi, the normalized diffusion
// weights, and the roots of the double-well potential associated with the
// drift primitive.
struct DerivedParams {
    double lambda;       // 2*sqrt(A^2 + R*S)
    double varpi_plus;   // attracting equilibrium (A + lambda/2)/S
    double varpi_minus;  // repelling equilibrium (A - lambda/2)/S
    double iota;         // jmath/sqrt(1 + jmath^2), in [-1,1]
    double jmath;        // A/sqrt(R*S)
    double varpi;        // 1 - varpi_plus/varpi_minus = 2/(1 - iota)
    double zeta;         // (iota+1)*Ubar/(jmath^2+1)
    double Ubar;         // U/R
    double Vbar;         // V/S
    double chi_minus;    // negative double-well root
    double chi_plus;     // positive double-well root
};

// kappa-indexed rate family: shifted shape parameters, the corrected decay
// rates lambda_hat, the admissible-noise threshold eps_kappa and the
// contraction factor ell_eps_kappa.
struct KappaParams {
    double kappa;
    double iota_kappa;            // kappa*(1+iota)
    double jmath_kappa;           // from (jmath_k+1)/(iota_k+1) = (1+iota)^2 (1+jmath^2)
    double zeta_kappa;            // ((iota_k+1)*Ubar + (jmath_k+1)*Vbar)/(jmath^2+1)
    double lambda_hat_eps;        // lambda*(1 - eps^2/2 * zeta)
    double lambda_hat_eps_kappa;  // lambda*(1 - eps^2/2 * zeta_kappa)
    double eps_kappa;             // sup of eps with (eps^2/2)*zeta_kappa < 1 (inf if zeta_kappa = 0)
    double ell_eps_kappa;         // sqrt([1 - eps^2/2 (1+iota_k) Ubar][1 - eps^2/2 (1+jmath_k) Vbar]), NaN if negative
};

// Validates the ModelParams domain; throws std::invalid_argument on failure.
void validate(const ModelParams& p);

DerivedParams derive(const ModelParams& p);

KappaParams kappa_derive(const ModelParams& p, double kappa);

// Drift and its derivative.
inline double drift(const ModelParams& p, double x) { return 2.0 * p.A * x + p.R - p.S * x * x; }
inline double drift_derivative(const ModelParams& p, double x) { return 2.0 * (p.A - p.S * x); }

// Unscaled diffusion shape sigma_1(x) = sqrt(x*(U + V x^2)) and the full
// coefficient sigma_eps = eps * sigma_1.
double sigma1(const ModelParams& p, double x);
inline double sigma_eps(const ModelParams& p, double x) { return p.eps * sigma1(p, x); }

}  // namespace riccati
