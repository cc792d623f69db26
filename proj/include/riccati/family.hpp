#pragma once

#include "riccati/params.hpp"

namespace riccati {

// Named transformations of a parameter set. Each yields another Riccati
// system whose deterministic flow brackets or conjugates the noisy one.
enum class FamilyVariant {
    modified,      // (R,S) + (n-1)*(eps^2/2)*(U,-V); order n may be real
    inverse,       // reciprocal flow: (-A, S + eps^2 V, R - eps^2 U), (U,V) swapped
    hat,           // (R*(1 - eps^2 (1/2+iota) Ubar), S*(1 - eps^2 (1/2-iota) Vbar))
    bar,           // (R*(1 + eps^2/2 Ubar), S*(1 - 3 eps^2/2 Vbar))
    hat_modified,  // modified transform applied on top of the hat system
};

struct ParamFamily {
    FamilyVariant variant;
    ModelParams derived;
};

// Builds the transformed parameter set. `n` is the modified-family order
// (ignored by inverse/hat/bar); `eps` overrides p.eps as the transform's
// noise amplitude so bracketing curves at several amplitudes can be formed
// from one base system. Preconditions:
//   modified, n >= 1:  (n-1)*eps^2*Vbar < 2
//   modified, n <= -1: (|n|+1)*eps^2*Ubar < 2
//   inverse:           R > eps^2*U
//   hat:               both transformed coefficients positive
//   bar:               3*eps^2/2*Vbar < 1
// Violations throw std::invalid_argument naming the failed inequality.
ParamFamily family(const ModelParams& p, FamilyVariant variant, double n, double eps);

inline ParamFamily family(const ModelParams& p, FamilyVariant variant, double n) {
    return family(p, variant, n, p.eps);
}

// Deterministic flow of the modified system, phi^(eps,n)_t(x).
double phi_modified(double t, double x, const ModelParams& p, double n, double eps);
double phi_modified(double t, double x, const ModelParams& p, double n);

// sup_t phi^(eps,n)_t(x) = max(x, varpi_plus of the modified system).
double phi_star_modified(double x, const ModelParams& p, double n, double eps);
double phi_star_modified(double x, const ModelParams& p, double n);

// Gap bound between the flows of an upper system p and a lower system pbar
// with R >= Rbar and Sbar >= S:
//   0 <= phi_t(x) - phibar_t(x) <= 2/(lambda+lambdabar) * varpibar * varpi
//        * ([R - Rbar] + [Sbar - S] * phi_star(x)^2).
double comparison_bound(const ModelParams& p, const ModelParams& pbar, double x);

}  // namespace riccati
