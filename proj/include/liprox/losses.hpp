#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"

namespace liprox {

enum class LossKind { smoothed_hinge, logistic, smoothed_quantile, least_squares };

/// Smooth(ed) loss description.
///
/// The smoothed kinds replace the nonsmooth hinge / quantile losses by their
/// Nesterov-smoothed surrogates at level tau; `l2_ridge` adds
/// l2_ridge * ||beta||^2 to the smooth part (gradient 2 * l2_ridge * beta).
struct LossSpec {
    LossKind kind = LossKind::least_squares;
    double tau = 0.2;      ///< smoothing level, required > 0 for smoothed kinds
    double theta = 0.5;    ///< quantile level, strictly inside (0,1)
    double l2_ridge = 0.0; ///< coefficient of the ridge term added to the smooth part

    bool is_classification() const
    {
        return kind == LossKind::smoothed_hinge || kind == LossKind::logistic;
    }
};

struct LossEval {
    double value = 0.0;
    std::vector<double> gradient;
};

inline void validate(const LossSpec& spec, const Dataset& data)
{
    if (spec.l2_ridge < 0.0) throw std::invalid_argument("loss: l2_ridge must be nonnegative");
    if (spec.kind == LossKind::smoothed_hinge || spec.kind == LossKind::smoothed_quantile) {
        if (!(spec.tau > 0.0)) throw std::invalid_argument("loss: tau must be positive");
    }
    if (spec.kind == LossKind::smoothed_quantile) {
        if (!(spec.theta > 0.0 && spec.theta < 1.0))
            throw std::invalid_argument("loss: theta must lie strictly inside (0,1)");
    }
    if (spec.is_classification()) data.require_binary_labels();
}

namespace detail {

/// clamp(z / (2 tau)) onto [-1, 1]; the maximizing dual weight of the
/// smoothed hinge/quantile losses.
inline double smoothing_weight(double z, double tau)
{
    return std::clamp(z / (2.0 * tau), -1.0, 1.0);
}

/// Overflow-safe log(1 + exp(t)).
inline double softplus(double t)
{
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

/// Logistic sigmoid, computed from the stable softplus branch.
inline double sigmoid(double t)
{
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace detail

/// Per-sample smoothed hinge in closed form, z = 1 - y <x, beta>:
///   z - tau/2        for z >= 2 tau
///   -tau/2           for z <= -2 tau
///   z/2 + z^2/(8 tau) otherwise
inline double smoothed_hinge_sample(double z, double tau)
{
    if (z >= 2.0 * tau) return z - 0.5 * tau;
    if (z <= -2.0 * tau) return -0.5 * tau;
    return 0.5 * z + z * z / (8.0 * tau);
}

/// Per-sample smoothed quantile in closed form, z = y - <x, beta>:
///   rho_theta(z) - tau/2           for |z| >= 2 tau
///   (theta - 1/2) z + z^2/(8 tau)  otherwise
inline double smoothed_quantile_sample(double z, double tau, double theta)
{
    if (std::abs(z) >= 2.0 * tau) {
        const double pinball = std::max(theta * z, (theta - 1.0) * z);
        return pinball - 0.5 * tau;
    }
    return (theta - 0.5) * z + z * z / (8.0 * tau);
}

/// Value and gradient of the smoothed hinge loss
///   g^tau(beta) = (1/2n) sum_i (z_i + w_i z_i) - (tau/2n) sum_i w_i^2,
/// with z_i = 1 - y_i <x_i, beta>, w_i = min(1, |z_i|/(2 tau)) sign(z_i),
/// and gradient -(1/2n) sum_i (1 + w_i) y_i x_i.
inline LossEval smoothed_hinge_eval(const Dataset& data, const std::vector<double>& beta,
                                    double tau)
{
    if (!(tau > 0.0)) throw std::invalid_argument("smoothed_hinge_eval: tau must be positive");
    data.require_binary_labels();
    const std::size_t n = data.n();
    const std::vector<double> u = matvec(data.X, beta);
    double value = 0.0;
    std::vector<double> coef(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - data.y[i] * u[i];
        const double w = detail::smoothing_weight(z, tau);
        value += 0.5 * (z + w * z) - 0.5 * tau * w * w;
        coef[i] = -0.5 * (1.0 + w) * data.y[i];
    }
    LossEval out;
    out.value = value / static_cast<double>(n);
    out.gradient = matvec_transpose(data.X, coef);
    for (double& g : out.gradient) g /= static_cast<double>(n);
    return out;
}

/// Value and gradient of the average logistic loss
/// (1/n) sum_i log(1 + exp(-y_i <x_i, beta>)).
inline LossEval logistic_eval(const Dataset& data, const std::vector<double>& beta)
{
    data.require_binary_labels();
    const std::size_t n = data.n();
    const std::vector<double> u = matvec(data.X, beta);
    double value = 0.0;
    std::vector<double> coef(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = data.y[i] * u[i];
        value += detail::softplus(-m);
        coef[i] = -detail::sigmoid(-m) * data.y[i];
    }
    LossEval out;
    out.value = value / static_cast<double>(n);
    out.gradient = matvec_transpose(data.X, coef);
    for (double& g : out.gradient) g /= static_cast<double>(n);
    return out;
}

/// Value and gradient of the smoothed quantile loss
///   g_theta^tau(beta) = (1/2n) sum_i ((2 theta - 1) z_i + w_i z_i) - (tau/2n) sum_i w_i^2,
/// with z_i = y_i - <x_i, beta> and gradient -(1/2n) sum_i (2 theta - 1 + w_i) x_i.
inline LossEval smoothed_quantile_eval(const Dataset& data, const std::vector<double>& beta,
                                       double tau, double theta)
{
    if (!(tau > 0.0)) throw std::invalid_argument("smoothed_quantile_eval: tau must be positive");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("smoothed_quantile_eval: theta must lie inside (0,1)");
    const std::size_t n = data.n();
    const std::vector<double> u = matvec(data.X, beta);
    double value = 0.0;
    std::vector<double> coef(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = data.y[i] - u[i];
        const double w = detail::smoothing_weight(z, tau);
        value += 0.5 * ((2.0 * theta - 1.0) * z + w * z) - 0.5 * tau * w * w;
        coef[i] = -0.5 * (2.0 * theta - 1.0 + w);
    }
    LossEval out;
    out.value = value / static_cast<double>(n);
    out.gradient = matvec_transpose(data.X, coef);
    for (double& g : out.gradient) g /= static_cast<double>(n);
    return out;
}

/// Value and gradient of (1/n) ||y - X beta||^2.
inline LossEval least_squares_eval(const Dataset& data, const std::vector<double>& beta)
{
    const std::size_t n = data.n();
    const std::vector<double> u = matvec(data.X, beta);
    double value = 0.0;
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = data.y[i] - u[i];
        value += r * r;
        resid[i] = -2.0 * r;
    }
    LossEval out;
    out.value = value / static_cast<double>(n);
    out.gradient = matvec_transpose(data.X, resid);
    for (double& g : out.gradient) g /= static_cast<double>(n);
    return out;
}

/// Dispatch on LossSpec, adding the ridge term when present.
inline LossEval loss_eval(const Dataset& data, const LossSpec& spec,
                          const std::vector<double>& beta)
{
    LossEval out;
    switch (spec.kind) {
        case LossKind::smoothed_hinge: out = smoothed_hinge_eval(data, beta, spec.tau); break;
        case LossKind::logistic: out = logistic_eval(data, beta); break;
        case LossKind::smoothed_quantile:
            out = smoothed_quantile_eval(data, beta, spec.tau, spec.theta);
            break;
        case LossKind::least_squares: out = least_squares_eval(data, beta); break;
    }
    if (spec.l2_ridge > 0.0) {
        double sq = 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) {
            sq += beta[j] * beta[j];
            out.gradient[j] += 2.0 * spec.l2_ridge * beta[j];
        }
        out.value += spec.l2_ridge * sq;
    }
    return out;
}

/// Loss value only (same formulas as loss_eval, skipping the gradient pass).
inline double loss_value(const Dataset& data, const LossSpec& spec,
                         const std::vector<double>& beta)
{
    const std::size_t n = data.n();
    const std::vector<double> u = matvec(data.X, beta);
    double value = 0.0;
    switch (spec.kind) {
        case LossKind::smoothed_hinge:
            data.require_binary_labels();
            if (!(spec.tau > 0.0)) throw std::invalid_argument("loss_value: tau must be positive");
            for (std::size_t i = 0; i < n; ++i)
                value += smoothed_hinge_sample(1.0 - data.y[i] * u[i], spec.tau);
            break;
        case LossKind::logistic:
            data.require_binary_labels();
            for (std::size_t i = 0; i < n; ++i) value += detail::softplus(-data.y[i] * u[i]);
            break;
        case LossKind::smoothed_quantile:
            if (!(spec.tau > 0.0)) throw std::invalid_argument("loss_value: tau must be positive");
            for (std::size_t i = 0; i < n; ++i)
                value += smoothed_quantile_sample(data.y[i] - u[i], spec.tau, spec.theta);
            break;
        case LossKind::least_squares:
            for (std::size_t i = 0; i < n; ++i) {
                const double r = data.y[i] - u[i];
                value += r * r;
            }
            break;
    }
    value /= static_cast<double>(n);
    if (spec.l2_ridge > 0.0) value += spec.l2_ridge * norm2_sq(beta);
    return value;
}

/// Exact (unsmoothed) empirical counterpart of the loss: average hinge,
/// logistic, pinball, or squared error. Used by the smoothing-sandwich
/// property g - tau/2 <= g^tau <= g and for raw-objective reporting.
inline double exact_loss_value(const Dataset& data, const LossSpec& spec,
                               const std::vector<double>& beta)
{
    const std::size_t n = data.n();
    const std::vector<double> u = matvec(data.X, beta);
    double value = 0.0;
    switch (spec.kind) {
        case LossKind::smoothed_hinge:
            data.require_binary_labels();
            for (std::size_t i = 0; i < n; ++i) value += std::max(0.0, 1.0 - data.y[i] * u[i]);
            break;
        case LossKind::logistic:
            data.require_binary_labels();
            for (std::size_t i = 0; i < n; ++i) value += detail::softplus(-data.y[i] * u[i]);
            break;
        case LossKind::smoothed_quantile:
            for (std::size_t i = 0; i < n; ++i) {
                const double z = data.y[i] - u[i];
                value += std::max(spec.theta * z, (spec.theta - 1.0) * z);
            }
            break;
        case LossKind::least_squares:
            for (std::size_t i = 0; i < n; ++i) {
                const double r = data.y[i] - u[i];
                value += r * r;
            }
            break;
    }
    value /= static_cast<double>(n);
    if (spec.l2_ridge > 0.0) value += spec.l2_ridge * norm2_sq(beta);
    return value;
}

/// Gradient-Lipschitz constant given mu = mu_max((1/n) X^T X):
///   smoothed hinge/quantile -> mu / (4 tau)
///   logistic                -> mu / 4   (standard sigmoid curvature bound)
///   least squares           -> 2 mu
/// plus 2 * l2_ridge for the ridge term.
inline double lipschitz_constant_given_mu(const LossSpec& spec, double gram_mu_max)
{
    double c = 0.0;
    switch (spec.kind) {
        case LossKind::smoothed_hinge:
        case LossKind::smoothed_quantile:
            if (!(spec.tau > 0.0))
                throw std::invalid_argument("lipschitz_constant: tau must be positive");
            c = gram_mu_max / (4.0 * spec.tau);
            break;
        case LossKind::logistic: c = gram_mu_max / 4.0; break;
        case LossKind::least_squares: c = 2.0 * gram_mu_max; break;
    }
    return c + 2.0 * spec.l2_ridge;
}

/// Gradient-Lipschitz constant, estimating mu_max((1/n) X^T X) by power
/// iteration (best estimate is used even if the iteration hit its cap).
inline double lipschitz_constant(const LossSpec& spec, const DenseMatrix& X)
{
    return lipschitz_constant_given_mu(spec, spectral_norm_sq(X).value);
}

}  // namespace liprox
