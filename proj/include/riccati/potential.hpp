#pragma once

#include <functional>

#include "riccati/params.hpp"

namespace riccati {

// Killing potential of the tangent process: the almost-sure decay of
// sigma1(x) * d(Phi_t)/dx is governed by exp(-integral of H along the flow).
// Requires x > 0 and U + V > 0.
double potential_H(const ModelParams& p, double x);

// Closed-form decay-rate floor: a lower bound of inf_{x>0} H(x), tight to
// O(eps^2) and exact at eps = 0.  Branches: V = 0 (needs 2R >= eps^2 U),
// U = 0 (needs 2S >= 3 eps^2 V), and a general lower bound when both are
// positive (valid when its square-root argument is nonnegative).
// Branch-condition violations throw std::invalid_argument.
double rate_lambda_eps(const ModelParams& p);

// True on the V = 0 / U = 0 branches, where the bound is an equality up to
// the O(eps^2) curvature margin (and exact at eps = 0).
bool rate_lambda_eps_is_exact(const ModelParams& p);

// Absorbing potential of the conjugate (hat-transformed) tangent process,
//   2*iota*[A - (1 + eps^2/2 iota1 Vbar) S x]
//     + iota1*([1 - eps^2/2 iota1 Ubar] R/x + [1 + eps^2/2 iota1 Vbar] S x),
// with iota1 = 1 + iota.  Its infimum over x > 0 dominates lambda_hat_eps,
// with equality to lambda at eps = 0.  Requires the hat reparametrization to
// be well-founded at (p, eps) and x > 0.
double potential_H_hat(const ModelParams& p, double x);

// Numerical infimum of f over x > 0: a 1024-point logarithmic scan of
// [1e-6, 1e6] * scale seeded into a golden-section refinement around the
// best grid point.  Returns the minimal value found.
double minimize_log_grid(const std::function<double(double)>& f, double scale);

}  // namespace riccati
