#pragma once

#include "riccati/params.hpp"

namespace riccati {

// Explicit envelope functions controlling the fluctuation fields of the
// stochastic flow around the deterministic semigroup:
//   v     — n-norm envelope of the first-order field (eps*V term),
//   w     — n-norm envelope of the second-order field,
//   w_bar — uniform-in-time envelope of the bias E[Phi] - phi at order eps^2,
//   rho   — prefactor of the exponential-semigroup moment bound (kappa = n).
struct BoundFunctions {
    double v;
    double w;
    double w_bar;
    double rho;
};

// All four envelopes at (x, n).  Requires the modified families of orders up
// to 12n (and the inverse system when U > 0) to be well-founded; violations
// throw std::invalid_argument naming the inequality.
BoundFunctions bound_functions(const ModelParams& p, double x, double n);

// The raw first-order envelope v^eps_n(x); bound_functions substitutes
// max(1, v) wherever the (un-computable) exact n-norm of the first-order
// field appears inside w and w_bar.
double bound_v(const ModelParams& p, double x, double n);

// Prefactor rho_{eps,kappa}(x) of the Laplace/exponential-semigroup moment
// bound: [1 + varpi_plus / (phi^{(eps,-(iota_kappa v 1))}_1(0) v x)]^{1+iota}
// * exp(3 lambda).  Decreasing in x, increasing in (eps, kappa); the
// supremum over x is attained at x = 0.
double bound_rho(const ModelParams& p, double x, double kappa);

}  // namespace riccati
