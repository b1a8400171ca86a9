#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dataset.hpp"
#include "metrics.hpp"
#include "path.hpp"
#include "simgen.hpp"
#include "solver.hpp"
#include "theory.hpp"

namespace liprox {

/// The nine competing estimators of the synthetic studies. a/b/c are the
/// sparse-classification methods (L1, Slope, L2 on the smoothed hinge), d/e
/// add the group penalties, l1_lad/slope_lad are their quantile-loss
/// counterparts, and lasso/ridge are the least-squares baselines.
enum class MethodLabel {
    a_l1,
    b_slope,
    c_l2,
    d_group_l1l2,
    e_group_l1linf,
    lasso,
    ridge,
    l1_lad,
    slope_lad,
};

inline std::string method_name(MethodLabel label)
{
    switch (label) {
        case MethodLabel::a_l1: return "a_l1";
        case MethodLabel::b_slope: return "b_slope";
        case MethodLabel::c_l2: return "c_l2";
        case MethodLabel::d_group_l1l2: return "d_group_l1l2";
        case MethodLabel::e_group_l1linf: return "e_group_l1linf";
        case MethodLabel::lasso: return "lasso";
        case MethodLabel::ridge: return "ridge";
        case MethodLabel::l1_lad: return "l1_lad";
        case MethodLabel::slope_lad: return "slope_lad";
    }
    return "unknown";
}

inline MethodLabel method_from_name(const std::string& name)
{
    for (MethodLabel label :
         {MethodLabel::a_l1, MethodLabel::b_slope, MethodLabel::c_l2, MethodLabel::d_group_l1l2,
          MethodLabel::e_group_l1linf, MethodLabel::lasso, MethodLabel::ridge, MethodLabel::l1_lad,
          MethodLabel::slope_lad})
        if (method_name(label) == name) return label;
    throw std::invalid_argument("unknown method '" + name + "'");
}

/// A method's loss, penalty template, and grid rule, fixed by its label.
struct MethodBinding {
    MethodLabel label;
    LossSpec loss;
    RegSpec reg_template;
    Eta0Rule eta0_rule;
    bool ridge_on_grid = false;
};

/// Bind a method at a concrete dimension (Slope needs the weight sequence
/// lambda_1..lambda_p; quantile methods pick up cfg.theta).
inline MethodBinding make_method(MethodLabel label, const ExperimentConfig& cfg)
{
    MethodBinding b;
    b.label = label;
    const double tau = 0.2;
    switch (label) {
        case MethodLabel::a_l1:
            b.loss = {LossKind::smoothed_hinge, tau, 0.5, 0.0};
            b.reg_template = {RegKind::l1, 0.0, {}, {}};
            b.eta0_rule = Eta0Rule::l1_colsum;
            break;
        case MethodLabel::b_slope:
            b.loss = {LossKind::smoothed_hinge, tau, 0.5, 0.0};
            b.reg_template = {RegKind::slope, 0.0, slope_weights(cfg.p, cfg.p), {}};
            b.eta0_rule = Eta0Rule::l1_colsum;
            break;
        case MethodLabel::c_l2:
            b.loss = {LossKind::smoothed_hinge, tau, 0.5, 0.0};
            b.reg_template = {RegKind::none, 0.0, {}, {}};
            b.eta0_rule = Eta0Rule::row_norm_sq;
            b.ridge_on_grid = true;
            break;
        case MethodLabel::d_group_l1l2:
            b.loss = {LossKind::smoothed_hinge, tau, 0.5, 0.0};
            b.reg_template = {RegKind::group_l1l2, 0.0, {}, contiguous_groups(cfg.p, cfg.g_star)};
            b.eta0_rule = Eta0Rule::l1_colsum;
            break;
        case MethodLabel::e_group_l1linf:
            b.loss = {LossKind::smoothed_hinge, tau, 0.5, 0.0};
            b.reg_template = {RegKind::group_l1linf, 0.0, {},
                              contiguous_groups(cfg.p, cfg.g_star)};
            b.eta0_rule = Eta0Rule::group_linf_rule;
            break;
        case MethodLabel::lasso:
            b.loss = {LossKind::least_squares, tau, 0.5, 0.0};
            b.reg_template = {RegKind::l1, 0.0, {}, {}};
            b.eta0_rule = Eta0Rule::lasso_xty;
            break;
        case MethodLabel::ridge:
            b.loss = {LossKind::least_squares, tau, 0.5, 0.0};
            b.reg_template = {RegKind::none, 0.0, {}, {}};
            b.eta0_rule = Eta0Rule::ridge_spectral;
            b.ridge_on_grid = true;
            break;
        case MethodLabel::l1_lad:
            b.loss = {LossKind::smoothed_quantile, tau, cfg.theta, 0.0};
            b.reg_template = {RegKind::l1, 0.0, {}, {}};
            b.eta0_rule = Eta0Rule::l1_colsum;
            break;
        case MethodLabel::slope_lad:
            b.loss = {LossKind::smoothed_quantile, tau, cfg.theta, 0.0};
            b.reg_template = {RegKind::slope, 0.0, slope_weights(cfg.p, cfg.p), {}};
            b.eta0_rule = Eta0Rule::l1_colsum;
            break;
    }
    return b;
}

inline bool method_fits_example(MethodLabel label, ExampleKind example)
{
    switch (example) {
        case ExampleKind::sparse_classification:
            return label == MethodLabel::a_l1 || label == MethodLabel::b_slope ||
                   label == MethodLabel::c_l2;
        case ExampleKind::group_classification:
            return label == MethodLabel::a_l1 || label == MethodLabel::b_slope ||
                   label == MethodLabel::d_group_l1l2 || label == MethodLabel::e_group_l1linf;
        case ExampleKind::heteroscedastic_regression:
            return label == MethodLabel::l1_lad || label == MethodLabel::slope_lad ||
                   label == MethodLabel::lasso || label == MethodLabel::ridge;
    }
    return false;
}

/// One (p, seed, method) result row.
struct RunRecord {
    std::string example;
    std::size_t p = 0;
    std::size_t n = 0;
    std::string method;
    std::uint64_t seed = 0;
    double eta_selected = std::numeric_limits<double>::quiet_NaN();
    double l2_error = std::numeric_limits<double>::quiet_NaN();
    /// ||beta_hat - beta_ref||_2 / ||beta_ref||_2: the raw (unnormalized-
    /// direction) estimation error whose n-scaling the oracle inequalities
    /// bound. Kept out of the CSV artifact, which carries the normalized
    /// metric above.
    double rel_l2_error = std::numeric_limits<double>::quiet_NaN();
    double task_metric = std::numeric_limits<double>::quiet_NaN();
    std::size_t iters = 0;    ///< total solver iterations across the path
    double wall_ms = 0.0;
    bool failed = false;
    std::string failure_message;
};

/// Full description of a simulation sweep.
struct SimulateSpec {
    ExperimentConfig base;
    std::vector<std::size_t> p_sweep;
    std::size_t n_seeds = 10;
    std::vector<MethodLabel> methods;
    SolverConfig solver{2000, 1e-6, 1.0, false};
    std::size_t path_points = 50;
    double min_ratio = 9.999e-5;
    double ridge_eps = 1e-6;
    std::size_t jobs = 0;  ///< 0 = hardware concurrency
};

inline void validate(const SimulateSpec& spec)
{
    if (spec.p_sweep.empty()) throw std::invalid_argument("simulate: empty p sweep");
    if (spec.n_seeds < 1) throw std::invalid_argument("simulate: n_seeds must be >= 1");
    if (spec.methods.empty()) throw std::invalid_argument("simulate: no methods");
    for (MethodLabel m : spec.methods)
        if (!method_fits_example(m, spec.base.example))
            throw std::invalid_argument("simulate: method " + method_name(m) +
                                        " does not apply to example " +
                                        example_name(spec.base.example));
    validate(spec.solver);
    if (spec.path_points < 2) throw std::invalid_argument("simulate: path_points must be >= 2");
}

namespace detail {

/// Run every method of `spec` on one generated cell.
inline std::vector<RunRecord> run_cell(const SimulateSpec& spec, std::size_t p,
                                       std::size_t seed_index)
{
    ExperimentConfig cfg = spec.base;
    cfg.p = p;
    cfg.seed = spec.base.seed + seed_index;

    std::vector<RunRecord> out;
    RunRecord proto;
    proto.example = example_name(cfg.example);
    proto.p = p;
    proto.n = cfg.n;
    proto.seed = cfg.seed;

    GeneratedProblem problem;
    try {
        problem = generate(cfg);
    } catch (const std::exception& e) {
        for (MethodLabel m : spec.methods) {
            RunRecord rec = proto;
            rec.method = method_name(m);
            rec.failed = true;
            rec.failure_message = std::string("generation: ") + e.what();
            out.push_back(std::move(rec));
        }
        return out;
    }

    const bool regression = cfg.example == ExampleKind::heteroscedastic_regression;
    // Theoretical-minimizer reference: exact coefficients for the regression
    // example, test-set oracle fit (per distinct loss) for classification.
    std::map<std::pair<int, double>, std::vector<double>> oracle_cache;
    auto reference_beta = [&](const LossSpec& loss) -> const std::vector<double>& {
        if (regression) return problem.beta_true;
        const std::pair<int, double> key{static_cast<int>(loss.kind), loss.theta};
        auto it = oracle_cache.find(key);
        if (it == oracle_cache.end()) {
            OracleBeta oracle = estimate_beta_star(problem.test, problem.support_true, loss,
                                                   spec.ridge_eps, spec.solver);
            it = oracle_cache.emplace(key, std::move(oracle.beta_star)).first;
        }
        return it->second;
    };

    for (MethodLabel m : spec.methods) {
        RunRecord rec = proto;
        rec.method = method_name(m);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const MethodBinding binding = make_method(m, cfg);
            PathSpec path_spec;
            path_spec.n_points = spec.path_points;
            path_spec.min_ratio = spec.min_ratio;
            path_spec.eta0_rule = binding.eta0_rule;
            path_spec.ridge_on_grid = binding.ridge_on_grid;

            PathResult path =
                fit_path(problem.train, binding.loss, binding.reg_template, path_spec, spec.solver);
            if (path.fits.empty())
                throw std::runtime_error("empty path: " + path.truncation_message);

            const std::vector<double>& beta_ref = reference_beta(binding.loss);
            const std::size_t sel =
                regression
                    ? select_by_validation(path, problem.validation,
                                           SelectionMetric::prediction_error, cfg.theta, &beta_ref)
                    : select_by_validation(path, problem.validation,
                                           SelectionMetric::misclassification);
            const std::vector<double>& beta_hat = path.fits[sel].beta;

            rec.eta_selected = path.etas[sel];
            for (const FitResult& fit : path.fits) rec.iters += fit.n_iter;
            const std::optional<double> l2 = l2_estimation_error(beta_hat, beta_ref);
            rec.l2_error = l2 ? *l2 : std::numeric_limits<double>::quiet_NaN();
            double diff_sq = 0.0, ref_sq = 0.0;
            for (std::size_t j = 0; j < beta_ref.size(); ++j) {
                const double d = beta_hat[j] - beta_ref[j];
                diff_sq += d * d;
                ref_sq += beta_ref[j] * beta_ref[j];
            }
            if (ref_sq > 0.0) rec.rel_l2_error = std::sqrt(diff_sq / ref_sq);
            rec.task_metric = regression
                                  ? prediction_error(beta_hat, beta_ref, problem.test.X)
                                  : misclassification(beta_hat, problem.test);
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.failure_message = e.what();
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                t0)
                          .count();
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace detail

/// Run the full sweep: one cell per (p, seed), methods sharing each cell's
/// data; cells execute on a small work pool and results come back in
/// deterministic (p, seed, method) order. Failures stay per-cell.
inline std::vector<RunRecord> run_example(const SimulateSpec& spec)
{
    validate(spec);
    struct Cell {
        std::size_t p;
        std::size_t seed_index;
    };
    std::vector<Cell> cells;
    for (std::size_t p : spec.p_sweep)
        for (std::size_t s = 0; s < spec.n_seeds; ++s) cells.push_back({p, s});

    std::vector<std::vector<RunRecord>> slots(cells.size());
    std::atomic<std::size_t> next{0};
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min(cells.size(), spec.jobs == 0 ? hw : spec.jobs);

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            slots[i] = detail::run_cell(spec, cells[i].p, cells[i].seed_index);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::vector<RunRecord> out;
    out.reserve(cells.size() * spec.methods.size());
    for (auto& slot : slots)
        for (auto& rec : slot) out.push_back(std::move(rec));
    return out;
}

/// Aggregated mean / sample standard deviation per (method, p), skipping
/// failed or undefined entries (counts reported alongside).
struct SummaryRow {
    std::string example;
    std::string method;
    std::size_t p = 0;
    std::size_t n = 0;
    std::size_t n_records = 0;
    std::size_t n_failed = 0;
    std::size_t l2_count = 0;
    double l2_mean = std::numeric_limits<double>::quiet_NaN();
    double l2_std = std::numeric_limits<double>::quiet_NaN();
    std::size_t task_count = 0;
    double task_mean = std::numeric_limits<double>::quiet_NaN();
    double task_std = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void mean_and_std(const std::vector<double>& values, double& mean, double& sd)
{
    mean = std::numeric_limits<double>::quiet_NaN();
    sd = std::numeric_limits<double>::quiet_NaN();
    if (values.empty()) return;
    double s = 0.0;
    for (double v : values) s += v;
    mean = s / static_cast<double>(values.size());
    if (values.size() == 1) {
        sd = 0.0;  // convention for size-1 samples
        return;
    }
    double q = 0.0;
    for (double v : values) q += (v - mean) * (v - mean);
    sd = std::sqrt(q / static_cast<double>(values.size() - 1));
}

}  // namespace detail

inline std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& records)
{
    if (records.empty()) throw std::invalid_argument("aggregate: no records");
    std::map<std::tuple<std::string, std::string, std::size_t, std::size_t>,
             std::vector<const RunRecord*>>
        groups;
    for (const RunRecord& rec : records)
        groups[{rec.example, rec.method, rec.p, rec.n}].push_back(&rec);

    std::vector<SummaryRow> out;
    for (const auto& [key, members] : groups) {
        SummaryRow row;
        row.example = std::get<0>(key);
        row.method = std::get<1>(key);
        row.p = std::get<2>(key);
        row.n = std::get<3>(key);
        row.n_records = members.size();
        std::vector<double> l2, task;
        for (const RunRecord* rec : members) {
            if (rec->failed) {
                ++row.n_failed;
                continue;
            }
            if (std::isfinite(rec->l2_error)) l2.push_back(rec->l2_error);
            if (std::isfinite(rec->task_metric)) task.push_back(rec->task_metric);
        }
        row.l2_count = l2.size();
        row.task_count = task.size();
        detail::mean_and_std(l2, row.l2_mean, row.l2_std);
        detail::mean_and_std(task, row.task_mean, row.task_std);
        out.push_back(std::move(row));
    }
    return out;
}

/// Least-squares slope of log(y) against log(x); inputs must be positive.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 aligned points");
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::invalid_argument("loglog_slope: values must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) throw std::invalid_argument("loglog_slope: degenerate x sweep");
    return num / den;
}

/// Empirical error-rate exponent: sweep n, average the selected estimator's
/// relative L2 error ||beta_hat - beta*|| / ||beta*|| over seeds, and return
/// the log-log slope against n (theory predicts about -1/2). The raw error is
/// the quantity the oracle inequalities bound; the normalized-direction
/// metric cancels the shrinkage bias and decays measurably faster than -1/2
/// over desk-scale sweeps.
inline double rate_check(MethodLabel label, const std::vector<std::size_t>& n_sweep,
                         const ExperimentConfig& base_cfg, std::size_t n_seeds,
                         const SolverConfig& solver = {2000, 1e-6, 1.0, false},
                         std::size_t jobs = 0)
{
    if (n_sweep.size() < 4) throw std::invalid_argument("rate_check: need >= 4 values of n");
    std::vector<double> xs, ys;
    for (std::size_t n : n_sweep) {
        SimulateSpec spec;
        spec.base = base_cfg;
        spec.base.n = n;
        spec.p_sweep = {base_cfg.p};
        spec.n_seeds = n_seeds;
        spec.methods = {label};
        spec.solver = solver;
        spec.jobs = jobs;
        const std::vector<RunRecord> records = run_example(spec);
        std::vector<double> errors;
        for (const RunRecord& rec : records)
            if (!rec.failed && std::isfinite(rec.rel_l2_error)) errors.push_back(rec.rel_l2_error);
        if (errors.empty())
            throw std::runtime_error("rate_check: no usable records at n = " + std::to_string(n));
        double mean = 0.0, sd = 0.0;
        detail::mean_and_std(errors, mean, sd);
        xs.push_back(static_cast<double>(n));
        ys.push_back(mean);
    }
    return loglog_slope(xs, ys);
}

namespace detail {

inline std::string csv_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Results table: one comment line carrying the schema version, a header
/// row, then one row per record (doubles at 17 significant digits).
inline void write_records_csv(const std::vector<RunRecord>& records, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_records_csv: cannot open " + path);
    out << "# liprox-results schema_version=1\n";
    out << "example,p,n,method,seed,eta_selected,l2_error,task_metric,iters,wall_ms\n";
    for (const RunRecord& rec : records) {
        out << rec.example << ',' << rec.p << ',' << rec.n << ',' << rec.method << ',' << rec.seed
            << ',' << detail::csv_number(rec.eta_selected) << ','
            << detail::csv_number(rec.l2_error) << ',' << detail::csv_number(rec.task_metric)
            << ',' << rec.iters << ',' << detail::csv_number(rec.wall_ms) << '\n';
    }
    if (!out) throw std::runtime_error("write_records_csv: write failed for " + path);
}

inline nlohmann::json summary_to_json(const std::vector<SummaryRow>& summary,
                                      const ExperimentConfig& base)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const SummaryRow& row : summary) {
        rows.push_back({{"example", row.example},
                        {"method", row.method},
                        {"p", row.p},
                        {"n", row.n},
                        {"n_records", row.n_records},
                        {"n_failed", row.n_failed},
                        {"l2_count", row.l2_count},
                        {"l2_mean", row.l2_mean},
                        {"l2_std", row.l2_std},
                        {"task_count", row.task_count},
                        {"task_mean", row.task_mean},
                        {"task_std", row.task_std}});
    }
    return nlohmann::json{
        {"schema_version", 1}, {"config", config_to_json(base)}, {"summary", rows}};
}

inline void write_summary_json(const std::vector<SummaryRow>& summary,
                               const ExperimentConfig& base, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_summary_json: cannot open " + path);
    out << summary_to_json(summary, base).dump(2) << '\n';
    if (!out) throw std::runtime_error("write_summary_json: write failed for " + path);
}

}  // namespace liprox
