#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "metrics.hpp"
#include "solver.hpp"

namespace liprox {

/// How the top of the regularization grid is computed from the data.
enum class Eta0Rule {
    l1_colsum,        ///< max_j sum_i |x_ij|            (L1 with hinge/logistic/quantile)
    row_norm_sq,      ///< max_i ||x_i||_2^2             (L2/ridge on classification)
    group_linf_rule,  ///< max_g sum_{j in I_g} sum_i |x_ij|   (group L1-Linf)
    lasso_xty,        ///< ||X^T y||_inf                 (least-squares Lasso)
    ridge_spectral,   ///< mu_max(X^T X), unnormalized   (least-squares ridge)
    explicit_value,   ///< caller-provided eta0
};

/// Geometric-grid description. The grid has n_points values
/// eta_0 > ... > eta_M with eta_M / eta_0 = min_ratio (default just under
/// 1e-4 so the documented strict bound eta_M < 1e-4 eta_0 holds).
struct PathSpec {
    std::size_t n_points = 50;
    double min_ratio = 9.999e-5;
    Eta0Rule eta0_rule = Eta0Rule::l1_colsum;
    double eta0_explicit = 0.0;  ///< used only with Eta0Rule::explicit_value
    bool ridge_on_grid = false;  ///< eta drives the smooth l2_ridge term instead of the penalty
};

struct PathResult {
    std::vector<double> etas;
    std::vector<FitResult> fits;               ///< aligned with etas
    std::optional<std::size_t> selected_index; ///< set by select_by_validation callers
    bool truncated = false;                    ///< a grid point failed; path cut short
    std::string truncation_message;
};

inline void validate(const PathSpec& path)
{
    if (path.n_points < 1) throw std::invalid_argument("path: n_points must be >= 1");
    if (!(path.min_ratio > 0.0 && path.min_ratio < 1.0))
        throw std::invalid_argument("path: min_ratio must lie in (0,1)");
    if (path.eta0_rule == Eta0Rule::explicit_value && !(path.eta0_explicit > 0.0))
        throw std::invalid_argument("path: explicit eta0 must be positive");
}

/// Largest useful regularization level for the given rule.
inline double eta0(Eta0Rule rule, const Dataset& data)
{
    const DenseMatrix& X = data.X;
    switch (rule) {
        case Eta0Rule::l1_colsum: {
            double best = 0.0;
            for (std::size_t j = 0; j < X.cols(); ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < X.rows(); ++i) s += std::abs(X(i, j));
                best = std::max(best, s);
            }
            return best;
        }
        case Eta0Rule::row_norm_sq: {
            double best = 0.0;
            for (std::size_t i = 0; i < X.rows(); ++i) {
                const double* r = X.row(i);
                double s = 0.0;
                for (std::size_t j = 0; j < X.cols(); ++j) s += r[j] * r[j];
                best = std::max(best, s);
            }
            return best;
        }
        case Eta0Rule::group_linf_rule: {
            if (!data.groups)
                throw std::invalid_argument("eta0: group rule requires dataset groups");
            double best = 0.0;
            for (const auto& g : *data.groups) {
                double s = 0.0;
                for (std::size_t j : g)
                    for (std::size_t i = 0; i < X.rows(); ++i) s += std::abs(X(i, j));
                best = std::max(best, s);
            }
            return best;
        }
        case Eta0Rule::lasso_xty: {
            const std::vector<double> xty = matvec_transpose(X, data.y);
            return norm_inf(xty);
        }
        case Eta0Rule::ridge_spectral:
            // spectral_norm_sq is normalized by n; this rule wants mu_max(X^T X)
            return static_cast<double>(X.rows()) * spectral_norm_sq(X).value;
        case Eta0Rule::explicit_value:
            throw std::invalid_argument("eta0: explicit rule carries its own value");
    }
    throw std::invalid_argument("eta0: unknown rule");
}

/// The exact geometric grid eta_0, eta_0*r, ..., built by repeated
/// multiplication with r = min_ratio^(1/(n_points-1)).
inline std::vector<double> path_grid(double eta_start, std::size_t n_points, double min_ratio)
{
    if (!(eta_start > 0.0)) throw std::invalid_argument("path_grid: eta0 must be positive");
    std::vector<double> etas(n_points);
    etas[0] = eta_start;
    if (n_points == 1) return etas;
    const double ratio = std::pow(min_ratio, 1.0 / static_cast<double>(n_points - 1));
    for (std::size_t i = 1; i < n_points; ++i) etas[i] = etas[i - 1] * ratio;
    return etas;
}

/// Fit the full regularization path with warm starts.
///
/// `reg_template` fixes the penalty kind; the grid drives it as follows:
///   l1, group_l1l2, group_l1linf : lambda = eta_i
///   slope                        : weights = eta_i * template weights
///   none with ridge_on_grid      : loss.l2_ridge = eta_i (penalty stays none)
///   none otherwise               : single fit (the path collapses)
/// A solver failure truncates the path at the failing grid point and records
/// a diagnostic instead of throwing.
inline PathResult fit_path(const Dataset& data, const LossSpec& loss, const RegSpec& reg_template,
                           const PathSpec& path = {}, const SolverConfig& cfg = {})
{
    validate(path);
    validate(reg_template, data.p());
    if (path.ridge_on_grid && reg_template.kind != RegKind::none)
        throw std::invalid_argument("fit_path: ridge_on_grid expects penalty kind none");

    PathResult out;
    const double gram_mu_max = spectral_norm_sq(data.X).value;

    if (reg_template.kind == RegKind::none && !path.ridge_on_grid) {
        out.etas = {path.eta0_rule == Eta0Rule::explicit_value ? path.eta0_explicit
                                                               : eta0(path.eta0_rule, data)};
        out.fits.push_back(fista_solve(data, loss, reg_template, cfg, nullptr, gram_mu_max));
        return out;
    }

    const double eta_start = path.eta0_rule == Eta0Rule::explicit_value
                                 ? path.eta0_explicit
                                 : eta0(path.eta0_rule, data);
    out.etas = path_grid(eta_start, path.n_points, path.min_ratio);

    const std::vector<double>* warm = nullptr;
    for (std::size_t i = 0; i < out.etas.size(); ++i) {
        LossSpec loss_i = loss;
        RegSpec reg_i = reg_template;
        if (path.ridge_on_grid) {
            loss_i.l2_ridge = out.etas[i];
        } else if (reg_template.kind == RegKind::slope) {
            for (double& w : reg_i.weights) w *= out.etas[i];
        } else {
            reg_i.lambda = out.etas[i];
        }
        try {
            out.fits.push_back(fista_solve(data, loss_i, reg_i, cfg, warm, gram_mu_max));
        } catch (const std::exception& e) {
            out.truncated = true;
            out.truncation_message = "grid point " + std::to_string(i) +
                                     " (eta=" + std::to_string(out.etas[i]) + "): " + e.what();
            out.etas.resize(i);
            break;
        }
        warm = &out.fits.back().beta;
    }
    return out;
}

enum class SelectionMetric { misclassification, prediction_error, pinball };

/// Index of the grid point minimizing the metric on validation data; ties
/// break toward the earlier index, i.e. larger eta and the sparser model.
/// prediction_error scores against `beta_ref` (the known target coefficients);
/// pinball uses quantile level `theta`.
inline std::size_t select_by_validation(const PathResult& path, const Dataset& val_data,
                                        SelectionMetric metric, double theta = 0.5,
                                        const std::vector<double>* beta_ref = nullptr)
{
    if (path.fits.empty()) throw std::invalid_argument("select_by_validation: empty path");
    if (metric == SelectionMetric::prediction_error && beta_ref == nullptr)
        throw std::invalid_argument("select_by_validation: prediction_error needs beta_ref");

    std::size_t best_index = 0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
        const std::vector<double>& beta = path.fits[i].beta;
        double score = 0.0;
        switch (metric) {
            case SelectionMetric::misclassification:
                score = misclassification(beta, val_data);
                break;
            case SelectionMetric::prediction_error: {
                std::vector<double> diff(beta.size());
                for (std::size_t j = 0; j < beta.size(); ++j) diff[j] = beta[j] - (*beta_ref)[j];
                score = norm2(matvec(val_data.X, diff)) / static_cast<double>(val_data.n());
                break;
            }
            case SelectionMetric::pinball:
                score = pinball_loss(beta, val_data, theta);
                break;
        }
        if (i == 0 || score < best_score) {
            best_index = i;
            best_score = score;
        }
    }
    return best_index;
}

}  // namespace liprox
