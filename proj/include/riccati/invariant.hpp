#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riccati/params.hpp"

namespace riccati::stationary {

// Parameter regimes with distinct closed-form invariant densities on (0, inf).
enum class Regime {
    UV_pos,     // U > 0, V > 0: polynomial (heavy) tail
    U_pos_V0,   // U > 0, V = 0, S > 0: Gaussian-type tail
    U0_V_pos,   // U = 0, V > 0: essential singularity at 0, polynomial tail
    gamma_case  // U > 0, V = 0 = S > A: Gamma(2R/(eps^2 U), 4|A|/(eps^2 U))
};

struct StationaryMeasure {
    Regime regime;
    ModelParams params;
    double log_norm = 0.0;    // log of the normalizing constant
    double mode = 0.0;        // argmax of the density
    double support_lo = 0.0;  // quadrature truncation (log-density 60 nats below max)
    double support_hi = 0.0;
    std::vector<double> cdf_x;  // strictly increasing states
    std::vector<double> cdf_p;  // CDF values, strictly increasing, spanning
                                // at least the quantile window [1e-9, 1-1e-9]
};

// Throws std::invalid_argument when no regime matches (U = V = 0, or
// V = 0, S = 0 with A >= 0).
Regime classify(const ModelParams& p);

// Assembles the measure: regime selection, normalization by adaptive
// quadrature in log coordinates, and a monotone CDF grid for sampling.
// Requires eps > 0 and eps^2 U/R < 2 (repellent origin).
StationaryMeasure build(const ModelParams& p);

// Normalized log-density / density at x > 0.
double log_density(const StationaryMeasure& msr, double x);
double density(const StationaryMeasure& msr, double x);

// Inverse-CDF sampling on the monotone-cubic interpolated grid; fully
// deterministic in (seed).
std::vector<double> sample(const StationaryMeasure& msr, std::size_t n, std::uint64_t seed);

// True for finite integral x^k pi(dx): k > -2R/(eps^2 U) at the origin when
// U > 0, and k < 2 + 2S/(eps^2 V) at infinity when V > 0. Negative k allowed.
bool moment_exists(const ModelParams& p, int k);

// k-th moment by tilted quadrature; +infinity when the predicate fails.
double moment(const StationaryMeasure& msr, int k);

// Least-squares slope of log-density against log x over the far polynomial
// tail (UV_pos and U0_V_pos regimes only): approaches -(3 + 2S/(eps^2 V)).
double tail_exponent(const StationaryMeasure& msr);

// Closed-form bracket for the stationary mean: lower end
// (A + sqrt(A^2 + RS(1-eps^2 Ubar)(1+eps^2 Vbar))) / (S(1+eps^2 Vbar)),
// upper end varpi_plus. Requires eps^2 Ubar < 1 and S > 0.
struct MeanBounds {
    double lower;
    double upper;
};
MeanBounds stationary_mean_bounds(const ModelParams& p);

// The induced bracket on the drift observable A - mean*S (used by the
// risk-sensitivity demonstrations): [A - upper*S, A - lower*S].
struct DriftBracket {
    double lower;
    double upper;
};
DriftBracket stationary_drift_bracket(const ModelParams& p);

}  // namespace riccati::stationary
