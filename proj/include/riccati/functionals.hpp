#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riccati/params.hpp"
#include "riccati/sim.hpp"

namespace riccati::sde {

// exp[ ∫_s^t (1/2) ∂Λ(X_u) du ] per path: trapezoid on the record grid,
// exponentiated. s and t must lie on the record grid with s <= t; off-grid
// times throw. The drift derivative is evaluated with drift_params (defaults
// to the ensemble's own parameters); passing a different set weights the same
// path by another system's drift, which the change-of-measure identities
// need. Multiplicativity exp[s,t]*exp[t,u] = exp[s,u] holds exactly because
// on-grid trapezoid integrals are additive. Blown-up paths yield NaN.
std::vector<double> exp_functional(const PathEnsemble& ens, double s, double t,
                                   const ModelParams& drift_params);
std::vector<double> exp_functional(const PathEnsemble& ens, double s, double t);

// A multiplicative path functional evaluated on every record instant:
// values[path*m + k] = weight(X_{t_k}) / weight(x0) * exp(-∫_0^{t_k} pot(X_s) ds).
// Paths that touch a non-positive or non-finite state are excluded (the
// potentials are singular at the origin): their rows are NaN and they are
// counted in n_excluded.
struct FunctionalField {
    std::size_t n_paths = 0;
    std::vector<double> times;
    std::vector<double> values;          // path-major, n_paths x times.size()
    std::vector<std::uint8_t> excluded;  // 1 if the path was excluded
    std::size_t n_excluded = 0;

    double at(std::size_t path, std::size_t k) const {
        return values[path * times.size() + k];
    }
};

// Stochastic analogue of the flow derivative along each path:
//   T_t = sigma1(X_t)/sigma1(x0) * exp(-∫_0^t H(X_s) ds),
// with H the balance potential of the ensemble's parameters. Requires
// x0 > 0 and U + V > 0.
FunctionalField tangent_process(const PathEnsemble& ens);

// Conjugate variant used on the right-hand side of the second
// change-of-measure identity: the ensemble holds paths of the conjugate
// (hat-transformed) system, the weight is x^{1+iota} and the potential is the
// conjugate balance potential, both built from the base parameters.
FunctionalField tangent_process_conjugate(const PathEnsemble& conj_ens,
                                          const ModelParams& base);

// Terminal values of the same functionals, one double per path (bit-identical
// to the last column of the corresponding field): the curve is never stored
// and only one exponential is taken per path, which matters for the
// million-path identity checks. Excluded paths are NaN.
std::vector<double> tangent_terminal(const PathEnsemble& ens);
std::vector<double> tangent_conjugate_terminal(const PathEnsemble& conj_ens,
                                               const ModelParams& base);

}  // namespace riccati::sde
