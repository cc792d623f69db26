#pragma once

#include "riccati/params.hpp"

namespace riccati {

// Closed-form flow of the deterministic Riccati equation
//   d/dt x_t = 2*A*x_t + R - S*x_t^2 = -S*(x_t - varpi_plus)*(x_t - varpi_minus)
// started at x >= 0. Evaluated with the decaying exponential factored out so
// the expression stays stable for large lambda*t; beyond lambda*t > 700 the
// value is the equilibrium varpi_plus to machine precision and is returned
// as such.
double phi(double t, double x, const ModelParams& p);

// n-th derivative of phi_t in its initial condition, n >= 1. Closed form:
//   d^n phi_t(x) = n! (-1)^(n+1) D^2 (1-e)^(n-1) e / [e*D + (1-e)*(x - varpi_minus)]^(n+1)
// with D = varpi_plus - varpi_minus and e = exp(-lambda t). For n = 1 this is
// the square of the exponential semigroup E_t(x) := sqrt(d phi_t(x)).
double phi_derivative(int n, double t, double x, const ModelParams& p);

// sup_t phi_t(x) = max(x, varpi_plus).
double phi_star(double x, const ModelParams& p);

// Supremum of the reciprocal flow 1/phi_t(x), x > 0: the reciprocal of a
// Riccati flow is again a Riccati flow with parameters
// (-A, S + eps^2 V, R - eps^2 U) and swapped diffusion weights, so the
// supremum is max(1/x, varpi_plus of that system). Requires R > eps^2 U.
double phi_minus_star(double x, const ModelParams& p);

// Uniform-in-time envelope for t >= upsilon > 0:
//   phi_upsilon(0) <= phi_t(x) <= varpi_plus + (e^(lambda*upsilon)-1)^(-1) * (varpi_plus - varpi_minus).
struct FlowEnvelope {
    double lower;
    double upper;
};
FlowEnvelope flow_envelope(double upsilon, const ModelParams& p);

}  // namespace riccati
