#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "losses.hpp"
#include "prox.hpp"

namespace liprox {

struct SolverConfig {
    std::size_t max_iter = 20000;
    double rel_tol = 1e-8;     ///< relative objective-change stopping tolerance
    double step_safety = 1.0;  ///< D = step_safety * C, step = 1/D; must be >= 1
    bool record_trace = false;
};

struct FitResult {
    std::vector<double> beta;
    double objective = 0.0;  ///< smooth value + penalty at beta
    std::size_t n_iter = 0;
    bool converged = false;
    std::vector<double> trace;  ///< objective per iteration when recorded
};

inline void validate(const SolverConfig& cfg)
{
    if (cfg.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
    if (!(cfg.rel_tol > 0.0)) throw std::invalid_argument("solver: rel_tol must be positive");
    if (!(cfg.step_safety >= 1.0)) throw std::invalid_argument("solver: step_safety must be >= 1");
}

/// Full objective F(beta) = smooth(ed) loss + penalty.
inline double objective_value(const Dataset& data, const LossSpec& loss, const RegSpec& reg,
                              const std::vector<double>& beta)
{
    return loss_value(data, loss, beta) + penalty_value(reg, beta);
}

/// Momentum sequence q_{t+1} = (1 + sqrt(1 + 4 q_t^2)) / 2; q_1 = 1 gives
/// q_2 = (1 + sqrt(5)) / 2.
inline double fista_q_next(double q) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * q * q)); }

/// Accelerated proximal gradient (FISTA) for loss + penalty.
///
/// Updates, with Theta the prox-gradient map at step 1/D:
///   beta~_{t+1} = Theta(beta_t)
///   q_{t+1}     = (1 + sqrt(1 + 4 q_t^2)) / 2
///   beta_{t+1}  = beta~_{t+1} + ((q_t - 1)/q_{t+1}) (beta~_{t+1} - beta~_t)
/// starting from the warm vector (or zero). Stops when the full objective
/// satisfies |F_t - F_{t-1}| <= rel_tol * (1 + |F_t|) or at max_iter. The
/// returned iterate is the last prox output, never the extrapolated point.
///
/// `gram_mu_max`, when given, supplies mu_max((1/n) X^T X) so callers fitting
/// many problems on one design pay for power iteration once.
inline FitResult fista_solve(const Dataset& data, const LossSpec& loss, const RegSpec& reg,
                             const SolverConfig& cfg = {},
                             const std::vector<double>* warm = nullptr,
                             std::optional<double> gram_mu_max = std::nullopt)
{
    validate(cfg);
    validate(loss, data);
    validate(reg, data.p());
    if (warm && warm->size() != data.p())
        throw std::invalid_argument("fista_solve: warm start length mismatch");

    const double mu = gram_mu_max ? *gram_mu_max : spectral_norm_sq(data.X).value;
    double D = cfg.step_safety * lipschitz_constant_given_mu(loss, mu);
    if (!(D > 0.0)) D = 1.0;  // constant smooth part (e.g. zero design): any step works
    const double step = 1.0 / D;

    std::vector<double> x = warm ? *warm : std::vector<double>(data.p(), 0.0);
    std::vector<double> x_prev = x;
    std::vector<double> y = x;
    double q = 1.0;

    FitResult out;
    double F_prev = objective_value(data, loss, reg, x);
    if (!std::isfinite(F_prev))
        throw std::runtime_error("fista_solve: non-finite objective at the starting point");

    for (std::size_t t = 1; t <= cfg.max_iter; ++t) {
        const LossEval eval = loss_eval(data, loss, y);
        std::vector<double> shifted(data.p());
        for (std::size_t j = 0; j < data.p(); ++j) shifted[j] = y[j] - step * eval.gradient[j];
        std::vector<double> x_next = apply_prox(reg, shifted, step);

        const double q_next = fista_q_next(q);
        const double momentum = (q - 1.0) / q_next;
        for (std::size_t j = 0; j < data.p(); ++j)
            y[j] = x_next[j] + momentum * (x_next[j] - x[j]);

        x_prev = std::move(x);
        x = std::move(x_next);
        q = q_next;

        const double F = objective_value(data, loss, reg, x);
        if (!std::isfinite(F))
            throw std::runtime_error("fista_solve: non-finite objective at iteration " +
                                     std::to_string(t) + " (step 1/D with D = " +
                                     std::to_string(D) + "); data may be pathological");
        out.n_iter = t;
        if (cfg.record_trace) out.trace.push_back(F);
        if (std::abs(F - F_prev) <= cfg.rel_tol * (1.0 + std::abs(F))) {
            out.converged = true;
            F_prev = F;
            break;
        }
        F_prev = F;
    }

    out.beta = std::move(x);
    out.objective = F_prev;
    return out;
}

}  // namespace liprox
