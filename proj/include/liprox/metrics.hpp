#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dataset.hpp"
#include "solver.hpp"

namespace liprox {

/// Empirically-estimated theoretical minimizer on a large test set.
struct OracleBeta {
    std::vector<double> beta_star;   ///< length p, zero off support
    std::vector<std::size_t> support;
    double objective = 0.0;
    std::size_t n_iter = 0;
    bool converged = false;
};

/// Fit the (ridge_eps-regularized, otherwise unpenalized) loss on the
/// support-restricted columns of `test` and embed the result in a length-p
/// vector. `ridge_eps` stabilizes the unpenalized fit.
inline OracleBeta estimate_beta_star(const Dataset& test, const std::vector<std::size_t>& support,
                                     const LossSpec& loss, double ridge_eps = 1e-6,
                                     const SolverConfig& cfg = {})
{
    if (support.empty()) throw std::invalid_argument("estimate_beta_star: empty support");
    for (std::size_t j : support)
        if (j >= test.p()) throw std::invalid_argument("estimate_beta_star: support out of range");
    if (ridge_eps < 0.0) throw std::invalid_argument("estimate_beta_star: ridge_eps must be >= 0");

    Dataset restricted{select_columns(test.X, support), test.y, std::nullopt};
    LossSpec oracle_loss = loss;
    oracle_loss.l2_ridge += ridge_eps;
    RegSpec none{RegKind::none, 0.0, {}, {}};
    FitResult fit = fista_solve(restricted, oracle_loss, none, cfg);

    OracleBeta out;
    out.support = support;
    out.beta_star.assign(test.p(), 0.0);
    for (std::size_t k = 0; k < support.size(); ++k) out.beta_star[support[k]] = fit.beta[k];
    out.objective = fit.objective;
    out.n_iter = fit.n_iter;
    out.converged = fit.converged;
    return out;
}

/// || beta_hat/||beta_hat|| - beta_star/||beta_star|| ||_2; empty when
/// beta_hat is exactly zero (undefined direction - callers treat the fit
/// as failed), invalid_argument when the oracle itself is zero.
inline std::optional<double> l2_estimation_error(const std::vector<double>& beta_hat,
                                                 const std::vector<double>& beta_star)
{
    if (beta_hat.size() != beta_star.size())
        throw std::invalid_argument("l2_estimation_error: length mismatch");
    const double scale_star = norm2(beta_star);
    if (scale_star == 0.0)
        throw std::invalid_argument("l2_estimation_error: reference vector is zero");
    const double scale_hat = norm2(beta_hat);
    if (scale_hat == 0.0) return std::nullopt;
    double s = 0.0;
    for (std::size_t j = 0; j < beta_hat.size(); ++j) {
        const double d = beta_hat[j] / scale_hat - beta_star[j] / scale_star;
        s += d * d;
    }
    return std::sqrt(s);
}

inline std::optional<double> l2_estimation_error(const std::vector<double>& beta_hat,
                                                 const OracleBeta& oracle)
{
    return l2_estimation_error(beta_hat, oracle.beta_star);
}

/// Fraction of samples with sign(<x_i, beta>) != y_i, with the convention
/// sign(0) = +1 (a zero estimator therefore misclassifies every -1 label).
inline double misclassification(const std::vector<double>& beta, const Dataset& test)
{
    if (test.n() == 0) throw std::invalid_argument("misclassification: empty test set");
    test.require_binary_labels();
    const std::vector<double> scores = matvec(test.X, beta);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < test.n(); ++i) {
        const double sign = scores[i] < 0.0 ? -1.0 : 1.0;
        if (sign != test.y[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(test.n());
}

/// (1/n_test) || X (beta_hat - beta_star) ||_2.
inline double prediction_error(const std::vector<double>& beta_hat,
                               const std::vector<double>& beta_star, const DenseMatrix& X_test)
{
    if (beta_hat.size() != beta_star.size() || beta_hat.size() != X_test.cols())
        throw std::invalid_argument("prediction_error: dimension mismatch");
    std::vector<double> diff(beta_hat.size());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = beta_hat[j] - beta_star[j];
    return norm2(matvec(X_test, diff)) / static_cast<double>(X_test.rows());
}

inline double prediction_error(const std::vector<double>& beta_hat, const OracleBeta& oracle,
                               const DenseMatrix& X_test)
{
    return prediction_error(beta_hat, oracle.beta_star, X_test);
}

/// (1/n) sum rho_theta(y_i - <x_i, beta>), the exact (unsmoothed) quantile loss.
inline double pinball_loss(const std::vector<double>& beta, const Dataset& test, double theta)
{
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("pinball_loss: theta must lie in (0,1)");
    if (test.n() == 0) return 0.0;
    const std::vector<double> pred = matvec(test.X, beta);
    double s = 0.0;
    for (std::size_t i = 0; i < test.n(); ++i) {
        const double t = test.y[i] - pred[i];
        s += std::max(theta * t, (theta - 1.0) * t);
    }
    return s / static_cast<double>(test.n());
}

}  // namespace liprox
