#include "riccati/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "riccati/potential.hpp"

namespace riccati::sde {

namespace {

std::size_t grid_index(const std::vector<double>& times, double t, const char* what) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
    }
    throw std::invalid_argument(std::string(what) + ": time not on the record grid");
}

// Fills one field row: weight(x_k)/weight(x0) * exp(-cumulative trapz of pot).
// Returns false if the path touches a non-positive or non-finite state.
template <typename Weight, typename Pot>
bool field_row(const double* states, const std::vector<double>& times, double x0,
               const Weight& weight, const Pot& pot, double* out) {
    const std::size_t m = times.size();
    for (std::size_t k = 0; k < m; ++k) {
        if (!(states[k] > 0.0) || !std::isfinite(states[k])) return false;
    }
    const double w0 = weight(x0);
    double integral = 0.0;
    double prev = pot(states[0]);
    out[0] = weight(states[0]) / w0;
    for (std::size_t k = 1; k < m; ++k) {
        const double cur = pot(states[k]);
        integral += 0.5 * (times[k] - times[k - 1]) * (prev + cur);
        prev = cur;
        out[k] = weight(states[k]) / w0 * std::exp(-integral);
    }
    return true;
}

template <typename Weight, typename Pot>
FunctionalField make_field(const PathEnsemble& ens, const Weight& weight, const Pot& pot) {
    if (!(ens.x0 > 0.0))
        throw std::invalid_argument("tangent_process: start state x0 > 0 required");
    const std::size_t m = ens.times.size();
    FunctionalField field;
    field.n_paths = ens.n_paths;
    field.times = ens.times;
    field.values.resize(ens.n_paths * m);
    field.excluded.assign(ens.n_paths, 0);
    for (std::size_t path = 0; path < ens.n_paths; ++path) {
        double* row = &field.values[path * m];
        if (!field_row(&ens.states[path * m], ens.times, ens.x0, weight, pot, row)) {
            field.excluded[path] = 1;
            ++field.n_excluded;
            for (std::size_t k = 0; k < m; ++k)
                row[k] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return field;
}

// Terminal value only: the same trapezoid accumulation and the same final
// arithmetic as field_row, but with a single exponential per path and no
// curve storage. NaN marks an excluded path.
template <typename Weight, typename Pot>
double row_terminal(const double* states, const std::vector<double>& times, double x0,
                    const Weight& weight, const Pot& pot) {
    const std::size_t m = times.size();
    for (std::size_t k = 0; k < m; ++k) {
        if (!(states[k] > 0.0) || !std::isfinite(states[k]))
            return std::numeric_limits<double>::quiet_NaN();
    }
    double integral = 0.0;
    double prev = pot(states[0]);
    for (std::size_t k = 1; k < m; ++k) {
        const double cur = pot(states[k]);
        integral += 0.5 * (times[k] - times[k - 1]) * (prev + cur);
        prev = cur;
    }
    return weight(states[m - 1]) / weight(x0) * std::exp(-integral);
}

template <typename Weight, typename Pot>
std::vector<double> make_terminal(const PathEnsemble& ens, const Weight& weight,
                                  const Pot& pot) {
    if (!(ens.x0 > 0.0))
        throw std::invalid_argument("tangent_process: start state x0 > 0 required");
    const std::size_t m = ens.times.size();
    std::vector<double> out(ens.n_paths);
    for (std::size_t path = 0; path < ens.n_paths; ++path)
        out[path] = row_terminal(&ens.states[path * m], ens.times, ens.x0, weight, pot);
    return out;
}

}  // namespace

std::vector<double> exp_functional(const PathEnsemble& ens, double s, double t,
                                   const ModelParams& drift_params) {
    if (!(s <= t)) throw std::invalid_argument("exp_functional: s <= t required");
    const std::size_t is = grid_index(ens.times, s, "exp_functional");
    const std::size_t it = grid_index(ens.times, t, "exp_functional");
    const std::size_t m = ens.times.size();
    std::vector<double> out(ens.n_paths);
    for (std::size_t path = 0; path < ens.n_paths; ++path) {
        const double* row = &ens.states[path * m];
        double integral = 0.0;
        for (std::size_t k = is; k < it; ++k) {
            const double g0 = 0.5 * drift_derivative(drift_params, row[k]);
            const double g1 = 0.5 * drift_derivative(drift_params, row[k + 1]);
            integral += 0.5 * (ens.times[k + 1] - ens.times[k]) * (g0 + g1);
        }
        out[path] = std::exp(integral);
    }
    return out;
}

std::vector<double> exp_functional(const PathEnsemble& ens, double s, double t) {
    return exp_functional(ens, s, t, ens.params);
}

FunctionalField tangent_process(const PathEnsemble& ens) {
    const ModelParams& p = ens.params;
    if (!(p.U + p.V > 0.0))
        throw std::invalid_argument("tangent_process: U + V > 0 required");
    return make_field(
        ens, [&](double x) { return sigma1(p, x); },
        [&](double x) { return potential_H(p, x); });
}

FunctionalField tangent_process_conjugate(const PathEnsemble& conj_ens,
                                          const ModelParams& base) {
    const double i1 = 1.0 + derive(base).iota;
    return make_field(
        conj_ens, [&](double x) { return std::pow(x, i1); },
        [&](double x) { return potential_H_hat(base, x); });
}

std::vector<double> tangent_terminal(const PathEnsemble& ens) {
    const ModelParams& p = ens.params;
    if (!(p.U + p.V > 0.0))
        throw std::invalid_argument("tangent_process: U + V > 0 required");
    return make_terminal(
        ens, [&](double x) { return sigma1(p, x); },
        [&](double x) { return potential_H(p, x); });
}

std::vector<double> tangent_conjugate_terminal(const PathEnsemble& conj_ens,
                                               const ModelParams& base) {
    const double i1 = 1.0 + derive(base).iota;
    return make_terminal(
        conj_ens, [&](double x) { return std::pow(x, i1); },
        [&](double x) { return potential_H_hat(base, x); });
}

}  // namespace riccati::sde
