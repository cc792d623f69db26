#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "riccati/params.hpp"
#include "riccati/sim.hpp"

namespace riccati::enkf {

// One-dimensional linear-Gaussian filtering problem
//   signal       dX_t = A X_t dt + sqrt(R) dW_t,   X_0 ~ N(m0, P0)
//   observation  dY_t = B X_t dt + sqrt(Sigma) dV_t.
struct FilterModel {
    double A = 0.0;
    double R = 1.0;
    double B = 1.0;
    double Sigma = 1.0;
    double m0 = 0.0;
    double P0 = 0.0;

    double S() const { return B * B / Sigma; }
};

// Throws std::invalid_argument on R <= 0, Sigma <= 0, B = 0 or P0 < 0.
void validate(const FilterModel& model);

struct FilterConfig {
    double dt = 1e-3;
    double horizon = 1.0;
    std::uint64_t seed = 0;
};

void validate(const FilterConfig& cfg);

// Euler-Maruyama signal path and the matching observation increments on the
// uniform step grid (last step shortened to end exactly at the horizon).
struct TruthPath {
    std::vector<double> times;   // n_steps + 1 instants
    std::vector<double> signal;  // X at each instant
    std::vector<double> dy;      // observation increment over each step
};

TruthPath simulate_truth(const FilterModel& model, const FilterConfig& cfg);

// Exact filter: the conditional variance follows the closed-form Riccati
// flow; the conditional mean integrates
//   dM = (A - S P) M dt + P B Sigma^{-1} dY
// against the given observation increments.
struct KalmanRun {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;
};

KalmanRun kalman_bucy(const FilterModel& model, const TruthPath& truth,
                      const FilterConfig& cfg);

// The three interacting-particle ensembles over N+1 members. All members
// share the run's single observation path; perturbation noises are
// member-specific independent streams.
enum class Variant { vanilla, deterministic, transport };

// Noise weights of the sample-variance diffusion for a variant:
// vanilla -> (R, S), deterministic -> (R, 0), transport -> (0, 0).
void variant_noise_weights(Variant v, const FilterModel& model, double& U, double& V);

// Parameter set of the reduced (sample-variance, recentred-error) diffusion:
// (A, R, S) from the model, (U, V) from the variant, eps = 2/sqrt(N),
// eps_bar = 1/sqrt(N+1).
ModelParams reduced_params(const FilterModel& model, Variant v, std::size_t N);

struct EnkfRun {
    Variant variant;
    std::size_t N = 1;  // ensemble carries N+1 members
    std::vector<double> times;
    std::vector<double> sample_mean;
    std::vector<double> sample_var;  // rescaled: (1 + 1/N) * (N+1)-member variance
    std::vector<double> kalman_mean;
    std::vector<double> kalman_var;
    std::vector<double> signal;
    std::vector<double> members;  // instant-major: members[k*(N+1) + i]

    double member_at(std::size_t k, std::size_t i) const { return members[k * (N + 1) + i]; }
};

// Lockstep Euler-Maruyama over the step grid. The sample statistics entering
// each step's gain (and the transport drift) are the start-of-step values.
// The transport variant divides by the sample variance: a value below 1e-12
// aborts with std::runtime_error (degeneracy).
EnkfRun run_enkf(const FilterModel& model, Variant v, std::size_t N, const FilterConfig& cfg);

// Law-equivalent surrogate of (sample variance, recentred mean error): the
// coupled scalar diffusion with the mapped parameters.
sde::CoupledXZ run_reduced(const FilterModel& model, Variant v, std::size_t N,
                           const sde::SimConfig& cfg, double x0, double z0);

}  // namespace riccati::enkf
