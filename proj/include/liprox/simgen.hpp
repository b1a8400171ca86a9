#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dataset.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace liprox {

enum class ExampleKind { sparse_classification, group_classification, heteroscedastic_regression };

/// Synthetic-benchmark description. Classification examples use delta
/// (class separation) and rho; the group example replaces k_star with
/// (s_star relevant groups, g_star variables per group); the regression
/// example uses snr and an AR(1) design with parameter rho.
struct ExperimentConfig {
    ExampleKind example = ExampleKind::sparse_classification;
    std::size_t n = 100;
    std::size_t p = 500;
    std::size_t k_star = 10;
    std::size_t s_star = 10;
    std::size_t g_star = 20;
    double delta = 0.5;
    double rho = 0.1;
    double snr = 1.0;
    double theta = 0.5;  ///< quantile level carried to the fitters
    std::uint64_t seed = 0;
    std::size_t n_val = 10000;
    std::size_t n_test = 10000;
};

struct GeneratedProblem {
    Dataset train;
    Dataset validation;
    Dataset test;
    std::vector<double> beta_true;          ///< mu_plus (classification) or beta* (regression)
    std::vector<std::size_t> support_true;  ///< indices carrying signal
};

inline void validate(const ExperimentConfig& cfg)
{
    if (cfg.n < 1 || cfg.p < 1 || cfg.n_val < 1 || cfg.n_test < 1)
        throw std::invalid_argument("simgen: sizes must be positive");
    if (!(cfg.rho >= 0.0 && cfg.rho < 1.0))
        throw std::invalid_argument("simgen: rho must lie in [0,1)");
    switch (cfg.example) {
        case ExampleKind::sparse_classification:
            if (cfg.k_star < 1 || cfg.k_star > cfg.p)
                throw std::invalid_argument("simgen: need 1 <= k_star <= p");
            if (cfg.delta < 0.0) throw std::invalid_argument("simgen: delta must be >= 0");
            break;
        case ExampleKind::group_classification:
            if (cfg.g_star < 1 || cfg.p % cfg.g_star != 0)
                throw std::invalid_argument("simgen: p must be divisible by g_star");
            if (cfg.s_star < 1 || cfg.s_star * cfg.g_star > cfg.p)
                throw std::invalid_argument("simgen: need 1 <= s_star*g_star <= p");
            if (cfg.delta < 0.0) throw std::invalid_argument("simgen: delta must be >= 0");
            break;
        case ExampleKind::heteroscedastic_regression:
            if (cfg.k_star < 1 || cfg.k_star > cfg.p)
                throw std::invalid_argument("simgen: need 1 <= k_star <= p");
            if (!(cfg.snr > 0.0)) throw std::invalid_argument("simgen: snr must be positive");
            if (!(cfg.theta > 0.0 && cfg.theta < 1.0))
                throw std::invalid_argument("simgen: theta must lie in (0,1)");
            break;
    }
}

/// mean + chol * z with z i.i.d. standard normal.
inline std::vector<double> sample_mvn(const std::vector<double>& mean, const DenseMatrix& chol,
                                      SplitMix64& rng)
{
    if (chol.rows() != chol.cols() || chol.rows() != mean.size())
        throw std::invalid_argument("sample_mvn: dimension mismatch");
    const std::vector<double> z = rng.gaussian_vector(mean.size());
    std::vector<double> out = mean;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += chol(i, j) * z[j];
        out[i] += s;
    }
    return out;
}

namespace detail {

/// One classification split: labels +1 on the first ceil(m/2) rows (mean
/// mu_plus), -1 on the rest (mean -mu_plus); noise is unit-variance with
/// correlation rho inside each listed block (rank-one equicorrelated form
/// sqrt(rho) z0 + sqrt(1-rho) z_j) and independent elsewhere; columns are
/// standardized to unit L2 norm afterwards.
inline Dataset classification_split(std::size_t m, const std::vector<double>& mu_plus,
                                    const std::vector<std::vector<std::size_t>>& corr_blocks,
                                    double rho, SplitMix64 stream,
                                    std::optional<GroupPartition> groups)
{
    const std::size_t p = mu_plus.size();
    std::vector<char> in_block(p, 0);
    for (const auto& b : corr_blocks)
        for (std::size_t j : b) in_block[j] = 1;

    const std::size_t n_plus = (m + 1) / 2;
    std::vector<double> values(m * p);
    std::vector<double> y(m);
    const double root_rho = std::sqrt(rho);
    const double root_rest = std::sqrt(1.0 - rho);
    for (std::size_t i = 0; i < m; ++i) {
        const double label = i < n_plus ? 1.0 : -1.0;
        y[i] = label;
        double* row = values.data() + i * p;
        for (const auto& b : corr_blocks) {
            const double z0 = stream.gaussian();
            for (std::size_t j : b)
                row[j] = label * mu_plus[j] + root_rho * z0 + root_rest * stream.gaussian();
        }
        for (std::size_t j = 0; j < p; ++j)
            if (!in_block[j]) row[j] = label * mu_plus[j] + stream.gaussian();
    }
    DenseMatrix X(m, p, std::move(values));
    return Dataset{standardize_columns(X), std::move(y), std::move(groups)};
}

/// One regression split: AR(1) rows with parameter rho, columns standardized,
/// y = X beta + noise where exactly floor(m/2) entries (drawn without
/// replacement) are N(0, sigma^2) with sigma^2 = ||X beta||^2 / (m * snr) and
/// the rest are exactly zero.
inline Dataset regression_split(std::size_t m, const std::vector<double>& beta, double rho,
                                double snr, SplitMix64 stream)
{
    const std::size_t p = beta.size();
    std::vector<double> values(m * p);
    const double innov = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < m; ++i) {
        double* row = values.data() + i * p;
        row[0] = stream.gaussian();
        for (std::size_t j = 1; j < p; ++j) row[j] = rho * row[j - 1] + innov * stream.gaussian();
    }
    DenseMatrix X = standardize_columns(DenseMatrix(m, p, std::move(values)));

    std::vector<double> y = matvec(X, beta);
    // Per-sample convention: snr = (mean-square signal) / (noise variance), so
    // sigma^2 = ||X beta*||^2 / (m * snr). Tying sigma to the total signal norm
    // instead would drive the per-sample signal-to-noise to zero as m grows
    // (unit-norm columns keep ||X beta*|| roughly constant in m) and no
    // estimator could improve with sample size.
    const double sigma = std::sqrt(norm2_sq(y) / (static_cast<double>(m) * snr));
    const std::vector<std::size_t> noisy = stream.sample_without_replacement(m, m / 2);
    for (std::size_t i : noisy) y[i] += sigma * stream.gaussian();
    return Dataset{std::move(X), std::move(y), std::nullopt};
}

}  // namespace detail

/// Sparse binary classification: class means +/- (delta_{k*}, 0_{p-k*}),
/// correlation rho among the first k* coordinates.
inline GeneratedProblem gen_sparse_classification(const ExperimentConfig& cfg)
{
    validate(cfg);
    if (cfg.example != ExampleKind::sparse_classification)
        throw std::invalid_argument("gen_sparse_classification: wrong example kind");

    std::vector<double> mu_plus(cfg.p, 0.0);
    for (std::size_t j = 0; j < cfg.k_star; ++j) mu_plus[j] = cfg.delta;
    std::vector<std::vector<std::size_t>> blocks;
    if (cfg.k_star > 1) {
        blocks.emplace_back(cfg.k_star);
        for (std::size_t j = 0; j < cfg.k_star; ++j) blocks[0][j] = j;
    }

    const SplitMix64 root(cfg.seed);
    GeneratedProblem out;
    out.train = detail::classification_split(cfg.n, mu_plus, blocks, cfg.rho, root.split(0),
                                             std::nullopt);
    out.validation = detail::classification_split(cfg.n_val, mu_plus, blocks, cfg.rho,
                                                  root.split(1), std::nullopt);
    out.test = detail::classification_split(cfg.n_test, mu_plus, blocks, cfg.rho, root.split(2),
                                            std::nullopt);
    out.beta_true = std::move(mu_plus);
    out.support_true.resize(cfg.k_star);
    for (std::size_t j = 0; j < cfg.k_star; ++j) out.support_true[j] = j;
    return out;
}

/// Group-sparse binary classification: G = p/g* groups of size g*, the first
/// s* carrying mean delta per coordinate; correlation rho within every group,
/// none across groups; the partition is attached to each split.
inline GeneratedProblem gen_group_classification(const ExperimentConfig& cfg)
{
    validate(cfg);
    if (cfg.example != ExampleKind::group_classification)
        throw std::invalid_argument("gen_group_classification: wrong example kind");

    const std::size_t G = cfg.p / cfg.g_star;
    GroupPartition groups = contiguous_groups(cfg.p, cfg.g_star);
    std::vector<double> mu_plus(cfg.p, 0.0);
    for (std::size_t g = 0; g < cfg.s_star; ++g)
        for (std::size_t j : groups[g]) mu_plus[j] = cfg.delta;
    std::vector<std::vector<std::size_t>> blocks;
    if (cfg.g_star > 1)
        for (std::size_t g = 0; g < G; ++g) blocks.push_back(groups[g]);

    const SplitMix64 root(cfg.seed);
    GeneratedProblem out;
    out.train =
        detail::classification_split(cfg.n, mu_plus, blocks, cfg.rho, root.split(0), groups);
    out.validation =
        detail::classification_split(cfg.n_val, mu_plus, blocks, cfg.rho, root.split(1), groups);
    out.test =
        detail::classification_split(cfg.n_test, mu_plus, blocks, cfg.rho, root.split(2), groups);
    out.beta_true = std::move(mu_plus);
    out.support_true.resize(cfg.s_star * cfg.g_star);
    for (std::size_t j = 0; j < out.support_true.size(); ++j) out.support_true[j] = j;
    return out;
}

/// Sparse regression with heteroscedastic noise: AR(1) design sigma_ij =
/// rho^|i-j|, beta* = (delta-free) unit signal (delta_{k*} per the class-mean
/// convention), noise on exactly half the rows with variance set by the SNR.
inline GeneratedProblem gen_heteroscedastic_regression(const ExperimentConfig& cfg)
{
    validate(cfg);
    if (cfg.example != ExampleKind::heteroscedastic_regression)
        throw std::invalid_argument("gen_heteroscedastic_regression: wrong example kind");

    std::vector<double> beta(cfg.p, 0.0);
    for (std::size_t j = 0; j < cfg.k_star; ++j) beta[j] = cfg.delta;

    const SplitMix64 root(cfg.seed);
    GeneratedProblem out;
    out.train = detail::regression_split(cfg.n, beta, cfg.rho, cfg.snr, root.split(0));
    out.validation = detail::regression_split(cfg.n_val, beta, cfg.rho, cfg.snr, root.split(1));
    out.test = detail::regression_split(cfg.n_test, beta, cfg.rho, cfg.snr, root.split(2));
    out.beta_true = std::move(beta);
    out.support_true.resize(cfg.k_star);
    for (std::size_t j = 0; j < cfg.k_star; ++j) out.support_true[j] = j;
    return out;
}

/// Dispatch on cfg.example.
inline GeneratedProblem generate(const ExperimentConfig& cfg)
{
    switch (cfg.example) {
        case ExampleKind::sparse_classification: return gen_sparse_classification(cfg);
        case ExampleKind::group_classification: return gen_group_classification(cfg);
        case ExampleKind::heteroscedastic_regression: return gen_heteroscedastic_regression(cfg);
    }
    throw std::invalid_argument("generate: unknown example kind");
}

inline std::string example_name(ExampleKind kind)
{
    switch (kind) {
        case ExampleKind::sparse_classification: return "sparse_classification";
        case ExampleKind::group_classification: return "group_classification";
        case ExampleKind::heteroscedastic_regression: return "heteroscedastic_regression";
    }
    return "unknown";
}

inline ExampleKind example_from_name(const std::string& name)
{
    if (name == "sparse_classification") return ExampleKind::sparse_classification;
    if (name == "group_classification") return ExampleKind::group_classification;
    if (name == "heteroscedastic_regression") return ExampleKind::heteroscedastic_regression;
    throw std::invalid_argument("unknown example kind '" + name + "'");
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg)
{
    return nlohmann::json{{"example", example_name(cfg.example)},
                          {"n", cfg.n},
                          {"p", cfg.p},
                          {"k_star", cfg.k_star},
                          {"s_star", cfg.s_star},
                          {"g_star", cfg.g_star},
                          {"delta", cfg.delta},
                          {"rho", cfg.rho},
                          {"snr", cfg.snr},
                          {"theta", cfg.theta},
                          {"seed", cfg.seed},
                          {"n_val", cfg.n_val},
                          {"n_test", cfg.n_test}};
}

/// Write train/val/test CSVs plus a JSON sidecar (config echo, 0-based
/// groups, true support, true coefficients) under `prefix`.
inline void export_problem(const GeneratedProblem& problem, const ExperimentConfig& cfg,
                           const std::string& prefix)
{
    save_csv(prefix + "_train.csv", problem.train);
    save_csv(prefix + "_val.csv", problem.validation);
    save_csv(prefix + "_test.csv", problem.test);

    nlohmann::json meta;
    meta["schema_version"] = 1;
    meta["config"] = config_to_json(cfg);
    meta["support_true"] = problem.support_true;
    meta["beta_true"] = problem.beta_true;
    if (problem.train.groups) meta["groups"] = *problem.train.groups;

    std::ofstream out(prefix + "_meta.json");
    if (!out) throw std::runtime_error("export_problem: cannot write " + prefix + "_meta.json");
    out << meta.dump(2) << '\n';
}

}  // namespace liprox
