#pragma once

#include <functional>

namespace riccati {

// Adaptive Gauss-Kronrod 15(7) quadrature on [a, b].  Splits the worst
// interval until the summed error estimate meets rel_tol (with an absolute
// floor of abs_tol) or max_intervals is hit.  Integrable endpoint
// singularities are handled by the subdivision; the integrand is never
// evaluated exactly at a or b unless a Kronrod node lands there.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14,
                 int max_intervals = 4096);

// Composite Simpson rule with n subintervals (n even, >= 2).  Used where a
// fixed evaluation grid is wanted, e.g. time integrals along a flow.
double simpson(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace riccati
