#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "losses.hpp"

namespace liprox {

/// Symbols of the closed-form regularization-level recipes.
struct TheoryInputs {
    std::size_t n = 0;       ///< sample size
    std::size_t p = 0;       ///< dimension
    std::size_t k_star = 0;  ///< sparsity of the target
    std::size_t G = 0;       ///< number of groups
    std::size_t s_star = 0;  ///< number of relevant groups
    std::size_t m_star = 0;  ///< aggregate size of the relevant groups
    double gamma = 1.0;      ///< group-size balance factor, >= 1
    double alpha = 2.0;      ///< confidence amplification factor, >= 2
    double delta = 0.1;      ///< failure probability, in (0,1)
    double L = 1.0;          ///< loss Lipschitz constant
    double M = 1.0;          ///< sub-Gaussian scale of the design
    double sigma = 1.0;      ///< noise scale (least-squares recipes)
};

enum class LevelKind { l1, slope, group };
enum class LsLevelKind { lasso, group_lasso };

inline void validate_common(const TheoryInputs& inp)
{
    if (inp.n < 1) throw std::invalid_argument("theory: n must be >= 1");
    if (!(inp.delta > 0.0 && inp.delta < 1.0))
        throw std::invalid_argument("theory: delta must lie in (0,1)");
    if (!(inp.alpha >= 2.0)) throw std::invalid_argument("theory: alpha must be >= 2");
    if (!(inp.gamma >= 1.0)) throw std::invalid_argument("theory: gamma must be >= 1");
}

inline void validate_sparsity(const TheoryInputs& inp)
{
    if (inp.p < 1 || inp.k_star < 1 || inp.k_star > inp.p)
        throw std::invalid_argument("theory: need 1 <= k_star <= p");
}

inline void validate_groups(const TheoryInputs& inp)
{
    if (inp.G < 1 || inp.s_star < 1 || inp.s_star > inp.G)
        throw std::invalid_argument("theory: need 1 <= s_star <= G");
    if (inp.m_star < 1) throw std::invalid_argument("theory: m_star must be >= 1");
}

/// Sorted-penalty weight lambda_j^{(r)} = sqrt(log(2 r e / j)).
inline double slope_weight(std::size_t r, std::size_t j)
{
    if (r < 1 || j < 1) throw std::invalid_argument("slope_weight: indices start at 1");
    const double arg = 2.0 * static_cast<double>(r) * std::exp(1.0) / static_cast<double>(j);
    const double val = std::log(arg);
    if (!(val > 0.0))
        throw std::invalid_argument("slope_weight: j = " + std::to_string(j) +
                                    " exceeds 2*r*e; weight would not be positive");
    return std::sqrt(val);
}

/// Weight vector (lambda_1^{(r)}, ..., lambda_{p_len}^{(r)}); nonincreasing
/// and strictly positive as long as p_len < 2 r e.
inline std::vector<double> slope_weights(std::size_t r, std::size_t p_len)
{
    if (r < 1 || p_len < 1) throw std::invalid_argument("slope_weights: lengths must be >= 1");
    std::vector<double> w(p_len);
    for (std::size_t j = 1; j <= p_len; ++j) w[j - 1] = slope_weight(r, j);
    return w;
}

/// Base level eta = 12 alpha L M sqrt(log(2/delta)/n) of the Lipschitz-loss recipes.
inline double lipschitz_eta(const TheoryInputs& inp)
{
    validate_common(inp);
    return 12.0 * inp.alpha * inp.L * inp.M *
           std::sqrt(std::log(2.0 / inp.delta) / static_cast<double>(inp.n));
}

/// Base level eta = 24 alpha sigma sqrt(log(2/delta)/n) of the least-squares recipes.
inline double least_squares_eta(const TheoryInputs& inp)
{
    validate_common(inp);
    return 24.0 * inp.alpha * inp.sigma *
           std::sqrt(std::log(2.0 / inp.delta) / static_cast<double>(inp.n));
}

/// Regularization level of the Lipschitz-loss recipes:
///   l1:    lambda   = eta * lambda_{k*}^{(p)}
///   slope: vector     eta * lambda_j^{(p)}, j = 1..p
///   group: lambda_G = eta * lambda_{s*}^{(G)} + alpha L M sqrt(gamma m* / (s* n))
inline std::variant<double, std::vector<double>> lipschitz_loss_level(LevelKind kind,
                                                                      const TheoryInputs& inp)
{
    const double eta = lipschitz_eta(inp);
    switch (kind) {
        case LevelKind::l1:
            validate_sparsity(inp);
            return eta * slope_weight(inp.p, inp.k_star);
        case LevelKind::slope: {
            validate_sparsity(inp);
            std::vector<double> w = slope_weights(inp.p, inp.p);
            for (double& v : w) v *= eta;
            return w;
        }
        case LevelKind::group:
            validate_groups(inp);
            return eta * slope_weight(inp.G, inp.s_star) +
                   inp.alpha * inp.L * inp.M *
                       std::sqrt(inp.gamma * static_cast<double>(inp.m_star) /
                                 (static_cast<double>(inp.s_star) * static_cast<double>(inp.n)));
    }
    throw std::invalid_argument("lipschitz_loss_level: unknown kind");
}

/// Regularization level of the least-squares recipes:
///   lasso:       lambda   = eta * lambda_{k*}^{(p)}
///   group_lasso: lambda_G = eta * lambda_{s*}^{(G)} + alpha sigma sqrt(gamma m* / (s* n))
inline double least_squares_level(LsLevelKind kind, const TheoryInputs& inp)
{
    const double eta = least_squares_eta(inp);
    switch (kind) {
        case LsLevelKind::lasso:
            validate_sparsity(inp);
            return eta * slope_weight(inp.p, inp.k_star);
        case LsLevelKind::group_lasso:
            validate_groups(inp);
            return eta * slope_weight(inp.G, inp.s_star) +
                   inp.alpha * inp.sigma *
                       std::sqrt(inp.gamma * static_cast<double>(inp.m_star) /
                                 (static_cast<double>(inp.s_star) * static_cast<double>(inp.n)));
    }
    throw std::invalid_argument("least_squares_level: unknown kind");
}

enum class RateKind { sparse, group };

/// Error-rate expression without unknown constants, used for empirical
/// log-log slope checks:
///   sparse: sqrt(k* log(p/k*) / n)   with log(p/k*) := 0 when k* = p
///   group:  sqrt((s* log(G/s*) + m*) / n)   with log(G/s*) := 0 when s* = G
inline double predicted_rate(RateKind kind, std::size_t n, std::size_t p, std::size_t k_star,
                             std::size_t G, std::size_t s_star, std::size_t m_star)
{
    if (n < 1) throw std::invalid_argument("predicted_rate: n must be >= 1");
    const double dn = static_cast<double>(n);
    if (kind == RateKind::sparse) {
        if (k_star < 1 || k_star > p) throw std::invalid_argument("predicted_rate: need k* <= p");
        const double lg =
            k_star == p ? 0.0
                        : std::log(static_cast<double>(p) / static_cast<double>(k_star));
        return std::sqrt(static_cast<double>(k_star) * lg / dn);
    }
    if (s_star < 1 || s_star > G) throw std::invalid_argument("predicted_rate: need s* <= G");
    const double lg =
        s_star == G ? 0.0 : std::log(static_cast<double>(G) / static_cast<double>(s_star));
    return std::sqrt((static_cast<double>(s_star) * lg + static_cast<double>(m_star)) / dn);
}

/// Loss Lipschitz constants used as defaults: hinge 1, logistic 1,
/// quantile max(theta, 1-theta).
inline double loss_lipschitz_L(LossKind kind, double theta)
{
    switch (kind) {
        case LossKind::smoothed_hinge:
        case LossKind::logistic: return 1.0;
        case LossKind::smoothed_quantile: return std::max(theta, 1.0 - theta);
        case LossKind::least_squares:
            throw std::invalid_argument("loss_lipschitz_L: least squares is not Lipschitz");
    }
    throw std::invalid_argument("loss_lipschitz_L: unknown kind");
}

}  // namespace liprox
