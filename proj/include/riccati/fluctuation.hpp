#pragma once

#include <cstddef>
#include <vector>

#include "riccati/params.hpp"
#include "riccati/sim.hpp"

namespace riccati::sde {

// Decomposition of the noisy flow around the deterministic one,
//   X_t = phi_t + eps*V_t + eps^2*W^eps_t,
// realized pathwise with common noise: the simulated X and the first-order
// Gaussian field V share the same Wiener increments, V being driven through
// the kernel  V_{k+1} = dphi_h(phi_{t_k}) * (V_k + sigma1(phi_{t_k}) dW_k).
struct FluctuationFields {
    ModelParams params;
    double x0 = 0.0;
    std::size_t n_paths = 0;
    std::vector<double> times;
    std::vector<double> v_eps;    // (X - phi)/eps, path-major
    std::vector<double> w_eps;    // (v_eps - v_limit)/eps, path-major
    std::vector<double> v_limit;  // first-order Gaussian field realization, path-major
    std::vector<double> w_limit;  // deterministic second-order curve, one per instant

    double v_eps_at(std::size_t path, std::size_t k) const {
        return v_eps[path * times.size() + k];
    }
    double w_eps_at(std::size_t path, std::size_t k) const {
        return w_eps[path * times.size() + k];
    }
    double v_limit_at(std::size_t path, std::size_t k) const {
        return v_limit[path * times.size() + k];
    }
};

// Deterministic second-order curve
//   W_t(x) = (1/2) ∫_0^t d2phi_{t-s}(phi_s(x)) * sigma1(phi_s(x))^2 ds,
// negative for every t > 0. Composite-Simpson quadrature.
double second_order_limit(const ModelParams& p, double x0, double t);

// Simulates the fields at the ensemble's eps (> 0 required). Paths reproduce
// simulate_riccati bit-exactly for equal (seed, path index).
FluctuationFields fluctuation_fields(const ModelParams& p, double x0, const SimConfig& cfg);

// One run per eps in eps_list (params otherwise shared, same seed so the
// runs are coupled through common increments).
std::vector<FluctuationFields> fluctuation_fields(const ModelParams& p, double x0,
                                                  const SimConfig& cfg,
                                                  const std::vector<double>& eps_list);

// Streaming scaling summary for large ensembles: never materializes the
// per-path fields. remainder_l2[k] is the Monte Carlo 2-norm of
// D_t = X_t - phi_t - eps*V_t at record instant k; the maximum over t > 0
// carries a batch-means standard error. bias_abs = |mean(D_T) - eps^2*W_T|
// measures the third-order residual of the mean at the horizon (V has zero
// mean by construction, so mean(D_T) estimates E[X_T] - phi_T with O(eps^2)
// noise instead of O(eps)).
struct FluctuationScaling {
    double eps = 0.0;
    std::size_t n_paths = 0;
    std::vector<double> times;
    std::vector<double> remainder_l2;
    double remainder_l2_max = 0.0;
    double remainder_l2_max_se = 0.0;
    double bias_abs = 0.0;
    double bias_se = 0.0;
    double w_limit_terminal = 0.0;
};

FluctuationScaling fluctuation_scaling(const ModelParams& p, double x0, const SimConfig& cfg);

}  // namespace riccati::sde
