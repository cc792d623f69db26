#pragma once

#include "riccati/params.hpp"

namespace riccati {

// Weighted one-dimensional metrics of the form d(x,y) = |g(x) - g(y)| for a
// monotone transform g:
//   sigma_hat : g'(x) = x^{-(1+iota)}, i.e. d = |iota|^{-1} |x^{-iota} - y^{-iota}|
//               (log-distance when iota = 0);
//   sigma_1   : g'(x) = 1/sigma1(x) = 1/sqrt(x (U + V x^2));
//   euclid    : g = identity.
enum class MetricKind { sigma_hat, sigma_1, euclid };

// Distance between two points.  Weighted metrics require strictly positive
// arguments; sigma_1 additionally requires U + V > 0.  Closed forms are used
// for sigma_hat and for sigma_1 with V = 0 or U = 0; the mixed sigma_1 case
// integrates 1/sigma1 between the points by adaptive quadrature.
double metric_d(double x1, double x2, MetricKind which, const ModelParams& p);

// The monotone transform g itself, normalized so g(1) = 0.  Satisfies
// |g(x1) - g(x2)| = metric_d(x1, x2) up to quadrature tolerance.
double metric_transform(double x, MetricKind which, const ModelParams& p);

}  // namespace riccati
