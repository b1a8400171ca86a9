// liprox command-line interface: fit single models, compute regularization
// paths, run simulation sweeps, export LP formulations, and print the
// closed-form theory parameters.
//
// Exit codes: 0 success, 1 usage/data error, 2 solver stopped at max_iter.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liprox/experiments.hpp"
#include "liprox/lp.hpp"
#include "liprox/theory.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxIter = 2;

// ---------------------------------------------------------------------------
// Name maps

liprox::LossKind loss_from_flag(const std::string& name)
{
    if (name == "hinge") return liprox::LossKind::smoothed_hinge;
    if (name == "logistic") return liprox::LossKind::logistic;
    if (name == "quantile") return liprox::LossKind::smoothed_quantile;
    if (name == "least_squares") return liprox::LossKind::least_squares;
    throw std::invalid_argument("unknown loss '" + name +
                                "' (valid: hinge, logistic, quantile, least_squares)");
}

liprox::RegKind reg_from_flag(const std::string& name)
{
    if (name == "none") return liprox::RegKind::none;
    if (name == "l1") return liprox::RegKind::l1;
    if (name == "slope") return liprox::RegKind::slope;
    if (name == "group_l1l2") return liprox::RegKind::group_l1l2;
    if (name == "group_linf") return liprox::RegKind::group_l1linf;
    throw std::invalid_argument("unknown penalty '" + name +
                                "' (valid: none, l1, slope, group_l1l2, group_linf)");
}

liprox::Eta0Rule eta0_rule_from_flag(const std::string& name)
{
    if (name == "l1_colsum") return liprox::Eta0Rule::l1_colsum;
    if (name == "row_norm_sq") return liprox::Eta0Rule::row_norm_sq;
    if (name == "group_linf_rule") return liprox::Eta0Rule::group_linf_rule;
    if (name == "lasso_xty") return liprox::Eta0Rule::lasso_xty;
    if (name == "ridge_spectral") return liprox::Eta0Rule::ridge_spectral;
    if (name == "explicit") return liprox::Eta0Rule::explicit_value;
    throw std::invalid_argument("unknown eta0 rule '" + name +
                                "' (valid: l1_colsum, row_norm_sq, group_linf_rule, "
                                "lasso_xty, ridge_spectral, explicit)");
}

liprox::SelectionMetric metric_from_flag(const std::string& name)
{
    if (name == "misclassification") return liprox::SelectionMetric::misclassification;
    if (name == "prediction_error") return liprox::SelectionMetric::prediction_error;
    if (name == "pinball") return liprox::SelectionMetric::pinball;
    throw std::invalid_argument("unknown metric '" + name +
                                "' (valid: misclassification, prediction_error, pinball)");
}

// ---------------------------------------------------------------------------
// Small IO helpers

liprox::Dataset load_dataset(const std::string& path)
{
    std::ifstream probe(path);
    if (!probe) throw std::runtime_error("cannot open dataset file: " + path);
    probe.close();
    return liprox::load_csv(path);
}

std::vector<double> load_column(const std::string& path, const std::string& what)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + what + " file: " + path);
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (values.empty()) throw std::runtime_error(what + " file is empty: " + path);
    return values;
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for: " + path);
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::size_t count_nonzero(const std::vector<double>& beta)
{
    std::size_t nnz = 0;
    for (double b : beta)
        if (b != 0.0) ++nnz;
    return nnz;
}

// ---------------------------------------------------------------------------
// Shared flag bundles

struct LossFlags {
    std::string loss = "least_squares";
    double tau = 0.2;
    double theta = 0.5;
    double ridge = 0.0;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--loss", loss, "Loss kind: hinge, logistic, quantile, least_squares")
            ->capture_default_str();
        cmd->add_option("--tau", tau, "Smoothing level for hinge/quantile losses")
            ->capture_default_str();
        cmd->add_option("--theta", theta, "Quantile level in (0,1)")->capture_default_str();
        cmd->add_option("--ridge", ridge, "Coefficient of an L2 ridge term added to the loss")
            ->capture_default_str();
    }

    liprox::LossSpec build() const
    {
        liprox::LossSpec spec;
        spec.kind = loss_from_flag(loss);
        spec.tau = tau;
        spec.theta = theta;
        spec.l2_ridge = ridge;
        return spec;
    }
};

struct RegFlags {
    std::string reg = "none";
    double lambda = 0.0;
    std::string weights_file;
    std::size_t group_size = 0;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--reg", reg, "Penalty kind: none, l1, slope, group_l1l2, group_linf")
            ->capture_default_str();
        cmd->add_option("--lambda", lambda, "Penalty level for l1/group kinds")
            ->capture_default_str();
        cmd->add_option("--weights-file", weights_file,
                        "Slope weights, one per line (default: closed-form theory weights)");
        cmd->add_option("--group-size", group_size,
                        "Contiguous group size for group penalties (0 = unset)")
            ->capture_default_str();
    }

    liprox::RegSpec build(std::size_t p) const
    {
        liprox::RegSpec spec;
        spec.kind = reg_from_flag(reg);
        spec.lambda = lambda;
        if (spec.kind == liprox::RegKind::slope) {
            if (!weights_file.empty()) {
                spec.weights = load_column(weights_file, "slope weights");
            } else {
                spec.weights = liprox::slope_weights(p, p);
                std::cerr << "liprox: no slope weights given; using the closed-form "
                             "theory weights lambda_j = sqrt(log(2pe/j)) for p = "
                          << p << "\n";
            }
        }
        if (spec.kind == liprox::RegKind::group_l1l2 || spec.kind == liprox::RegKind::group_l1linf) {
            if (group_size == 0)
                throw std::invalid_argument(
                    "group penalties need --group-size (contiguous groups)");
            spec.groups = liprox::contiguous_groups(p, group_size);
        }
        return spec;
    }
};

struct SolverFlags {
    std::size_t max_iter = 20000;
    double rel_tol = 1e-8;
    double step_safety = 1.0;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--max-iter", max_iter, "Iteration cap per solve")->capture_default_str();
        cmd->add_option("--rel-tol", rel_tol, "Relative objective-change stopping tolerance")
            ->capture_default_str();
        cmd->add_option("--step-safety", step_safety, "Step-size safety factor (>= 1)")
            ->capture_default_str();
    }

    liprox::SolverConfig build() const { return {max_iter, rel_tol, step_safety, false}; }
};

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
    std::string data_path;
    std::string out = "-";
    LossFlags loss;
    RegFlags reg;
    SolverFlags solver;
};

int run_fit(const FitArgs& args)
{
    const liprox::Dataset data = load_dataset(args.data_path);
    const liprox::LossSpec loss = args.loss.build();
    const liprox::RegSpec reg = args.reg.build(data.p());
    const liprox::SolverConfig solver = args.solver.build();

    const liprox::FitResult fit = liprox::fista_solve(data, loss, reg, solver);

    json out{{"schema_version", 1},
             {"beta", fit.beta},
             {"objective", fit.objective},
             {"iters", fit.n_iter},
             {"converged", fit.converged},
             {"loss", args.loss.loss},
             {"reg", args.reg.reg}};
    write_text(args.out, out.dump(2) + "\n");
    return fit.converged ? kExitOk : kExitMaxIter;
}

// ---------------------------------------------------------------------------
// path

struct PathArgs {
    std::string data_path;
    std::string out = "-";
    LossFlags loss;
    RegFlags reg;
    SolverFlags solver;
    std::size_t points = 50;
    double min_ratio = 9.999e-5;
    std::string eta0_rule = "l1_colsum";
    double eta0 = 0.0;
    bool ridge_on_grid = false;
    bool select = false;
    std::string val_path;
    std::string metric = "misclassification";
    std::string beta_ref_path;
};

int run_path(const PathArgs& args)
{
    const liprox::Dataset data = load_dataset(args.data_path);
    const liprox::LossSpec loss = args.loss.build();
    const liprox::RegSpec reg = args.reg.build(data.p());
    const liprox::SolverConfig solver = args.solver.build();

    liprox::PathSpec path_spec;
    path_spec.n_points = args.points;
    path_spec.min_ratio = args.min_ratio;
    path_spec.eta0_rule = eta0_rule_from_flag(args.eta0_rule);
    path_spec.eta0_explicit = args.eta0;
    path_spec.ridge_on_grid = args.ridge_on_grid;

    liprox::PathResult path = liprox::fit_path(data, loss, reg, path_spec, solver);
    if (path.truncated)
        std::cerr << "liprox: path truncated at " << path.truncation_message << "\n";
    if (path.fits.empty()) {
        std::cerr << "liprox: no grid point could be solved\n";
        return kExitError;
    }

    std::optional<liprox::Dataset> val;
    std::optional<std::vector<double>> beta_ref;
    if (args.select || !args.val_path.empty()) {
        if (args.val_path.empty())
            throw std::invalid_argument("--select needs --val <dataset>");
        val = load_dataset(args.val_path);
        if (val->p() != data.p())
            throw std::invalid_argument("validation dataset has a different number of columns");
    }
    const liprox::SelectionMetric metric = metric_from_flag(args.metric);
    if (val && metric == liprox::SelectionMetric::prediction_error) {
        if (args.beta_ref_path.empty())
            throw std::invalid_argument("metric prediction_error needs --beta-ref <file>");
        beta_ref = load_column(args.beta_ref_path, "reference coefficients");
        if (beta_ref->size() != data.p())
            throw std::invalid_argument("reference coefficients length must equal p");
    }

    std::optional<std::size_t> selected;
    if (args.select)
        selected = liprox::select_by_validation(path, *val, metric, args.loss.theta,
                                                beta_ref ? &*beta_ref : nullptr);

    std::ostringstream csv;
    csv << "eta,objective,nnz,metric";
    if (selected) csv << ",selected";
    csv << "\n";
    for (std::size_t i = 0; i < path.etas.size(); ++i) {
        double metric_value = std::numeric_limits<double>::quiet_NaN();
        if (val) {
            switch (metric) {
                case liprox::SelectionMetric::misclassification:
                    metric_value = liprox::misclassification(path.fits[i].beta, *val);
                    break;
                case liprox::SelectionMetric::prediction_error:
                    metric_value = liprox::prediction_error(path.fits[i].beta, *beta_ref, val->X);
                    break;
                case liprox::SelectionMetric::pinball:
                    metric_value = liprox::pinball_loss(path.fits[i].beta, *val, args.loss.theta);
                    break;
            }
        }
        csv << format_double(path.etas[i]) << ',' << format_double(path.fits[i].objective) << ','
            << count_nonzero(path.fits[i].beta) << ',' << format_double(metric_value);
        if (selected) csv << ',' << (*selected == i ? 1 : 0);
        csv << "\n";
    }
    write_text(args.out, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string config_path;
    std::string out_csv = "results.csv";
    std::string out_json = "summary.json";
    bool paper_scale = false;

    std::string example = "sparse_classification";
    std::size_t n = 100;
    std::vector<std::size_t> p_sweep{500};
    std::size_t k_star = 10;
    std::size_t s_star = 2;
    std::size_t g_star = 5;
    double delta = 0.5;
    double rho = 0.1;
    double snr = 1.0;
    double theta = 0.5;
    std::uint64_t seed = 1;
    std::size_t n_val = 10000;
    std::size_t n_test = 10000;
    std::size_t n_seeds = 2;
    std::vector<std::string> methods{"a_l1", "b_slope", "c_l2"};
    std::size_t path_points = 50;
    double min_ratio = 9.999e-5;
    double ridge_eps = 1e-6;
    std::size_t max_iter = 2000;
    double rel_tol = 1e-6;
    double step_safety = 1.0;
    std::size_t jobs = 0;

    CLI::App* cmd = nullptr;
    std::vector<std::size_t> p_sweep_paper;
};

// Config file schema: every key has a flag of the same meaning; flags override
// file values; unknown keys are rejected.
const std::map<std::string, std::string>& simulate_schema()
{
    static const std::map<std::string, std::string> schema{
        {"example", "--example"},       {"n", "--n"},
        {"p_sweep", "--p-sweep"},       {"p_sweep_paper", "--paper-scale"},
        {"k_star", "--k-star"},         {"s_star", "--s-star"},
        {"g_star", "--g-star"},         {"delta", "--delta"},
        {"rho", "--rho"},               {"snr", "--snr"},
        {"theta", "--theta"},           {"seed", "--seed"},
        {"n_val", "--n-val"},           {"n_test", "--n-test"},
        {"n_seeds", "--seeds"},         {"methods", "--methods"},
        {"path_points", "--path-points"}, {"min_ratio", "--min-ratio"},
        {"ridge_eps", "--ridge-eps"},   {"max_iter", "--max-iter"},
        {"rel_tol", "--rel-tol"},       {"step_safety", "--step-safety"},
        {"jobs", "--jobs"}};
    return schema;
}

void apply_config_file(SimulateArgs& args)
{
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + args.config_path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw std::runtime_error("config root must be a JSON object");

    const auto& schema = simulate_schema();
    for (const auto& [key, value] : cfg.items()) {
        if (schema.find(key) == schema.end())
            throw std::runtime_error("unknown config key '" + key + "'");
        // flags override file values
        const std::string& flag = schema.at(key);
        if (args.cmd->count(flag) > 0 && key != "p_sweep_paper") continue;

        if (key == "example") args.example = value.get<std::string>();
        else if (key == "n") args.n = value.get<std::size_t>();
        else if (key == "p_sweep") args.p_sweep = value.get<std::vector<std::size_t>>();
        else if (key == "p_sweep_paper") args.p_sweep_paper = value.get<std::vector<std::size_t>>();
        else if (key == "k_star") args.k_star = value.get<std::size_t>();
        else if (key == "s_star") args.s_star = value.get<std::size_t>();
        else if (key == "g_star") args.g_star = value.get<std::size_t>();
        else if (key == "delta") args.delta = value.get<double>();
        else if (key == "rho") args.rho = value.get<double>();
        else if (key == "snr") args.snr = value.get<double>();
        else if (key == "theta") args.theta = value.get<double>();
        else if (key == "seed") args.seed = value.get<std::uint64_t>();
        else if (key == "n_val") args.n_val = value.get<std::size_t>();
        else if (key == "n_test") args.n_test = value.get<std::size_t>();
        else if (key == "n_seeds") args.n_seeds = value.get<std::size_t>();
        else if (key == "methods") args.methods = value.get<std::vector<std::string>>();
        else if (key == "path_points") args.path_points = value.get<std::size_t>();
        else if (key == "min_ratio") args.min_ratio = value.get<double>();
        else if (key == "ridge_eps") args.ridge_eps = value.get<double>();
        else if (key == "max_iter") args.max_iter = value.get<std::size_t>();
        else if (key == "rel_tol") args.rel_tol = value.get<double>();
        else if (key == "step_safety") args.step_safety = value.get<double>();
        else if (key == "jobs") args.jobs = value.get<std::size_t>();
    }
}

int run_simulate(SimulateArgs& args)
{
    // precedence: flag > config file > LIPROX_SEED > built-in default
    if (args.cmd->count("--seed") == 0) {
        if (const char* env = std::getenv("LIPROX_SEED")) {
            char* end = nullptr;
            const unsigned long long parsed = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0')
                throw std::runtime_error("LIPROX_SEED is not an unsigned integer: " +
                                         std::string(env));
            args.seed = parsed;
        }
    }
    if (!args.config_path.empty()) apply_config_file(args);

    liprox::SimulateSpec spec;
    spec.base.example = liprox::example_from_name(args.example);
    spec.base.n = args.n;
    spec.base.p = args.p_sweep.empty() ? 0 : args.p_sweep.front();
    spec.base.k_star = args.k_star;
    spec.base.s_star = args.s_star;
    spec.base.g_star = args.g_star;
    spec.base.delta = args.delta;
    spec.base.rho = args.rho;
    spec.base.snr = args.snr;
    spec.base.theta = args.theta;
    spec.base.seed = args.seed;
    spec.base.n_val = args.n_val;
    spec.base.n_test = args.n_test;
    spec.p_sweep = args.p_sweep;
    if (args.paper_scale) {
        spec.p_sweep = args.p_sweep_paper.empty()
                           ? std::vector<std::size_t>{2000, 10000, 50000, 100000}
                           : args.p_sweep_paper;
    }
    spec.n_seeds = args.n_seeds;
    for (const std::string& m : args.methods)
        spec.methods.push_back(liprox::method_from_name(m));
    spec.solver = {args.max_iter, args.rel_tol, args.step_safety, false};
    spec.path_points = args.path_points;
    spec.min_ratio = args.min_ratio;
    spec.ridge_eps = args.ridge_eps;
    spec.jobs = args.jobs;
    liprox::validate(spec);

    const std::vector<liprox::RunRecord> records = liprox::run_example(spec);
    std::size_t failed = 0;
    for (const liprox::RunRecord& rec : records) {
        if (rec.failed) {
            ++failed;
            std::cerr << "liprox: warning: " << rec.example << " p=" << rec.p
                      << " seed=" << rec.seed << " method=" << rec.method
                      << " failed: " << rec.failure_message << "\n";
        }
    }
    if (failed == records.size()) {
        std::cerr << "liprox: all " << failed << " records failed\n";
        return kExitError;
    }

    liprox::write_records_csv(records, args.out_csv);
    liprox::write_summary_json(liprox::aggregate(records), spec.base, args.out_json);
    std::cerr << "liprox: wrote " << records.size() << " records to " << args.out_csv << " and "
              << args.out_json;
    if (failed > 0) std::cerr << " (" << failed << " failed)";
    std::cerr << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// export-lp

struct ExportLpArgs {
    std::string data_path;
    std::string form;
    double lambda = 1.0;
    std::size_t group_size = 0;
    std::string out = "-";
};

int run_export_lp(const ExportLpArgs& args)
{
    const liprox::Dataset data = load_dataset(args.data_path);
    liprox::LpModel model;
    if (args.form == "l1svm") {
        model = liprox::build_l1_svm_lp(data, args.lambda);
    } else if (args.form == "grouplinfsvm") {
        if (args.group_size == 0) {
            std::cerr << "liprox: form grouplinfsvm needs --group-size\n";
            return kExitError;
        }
        liprox::Dataset grouped = data;
        grouped.groups = liprox::contiguous_groups(data.p(), args.group_size);
        model = liprox::build_group_linf_svm_lp(grouped, args.lambda);
    } else if (args.form == "l1lad") {
        model = liprox::build_l1_lad_lp(data, args.lambda);
    } else {
        std::cerr << "liprox: unknown form '" << args.form
                  << "' (valid forms: l1svm, grouplinfsvm, l1lad)\n";
        return kExitError;
    }
    write_text(args.out, liprox::lp_to_string(model));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// theory

struct TheoryArgs {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t k_star = 0;
    std::size_t G = 0;
    std::size_t s_star = 0;
    std::size_t m_star = 0;
    double gamma = 1.0;
    double alpha = 2.0;
    double delta = 0.1;
    double L = 1.0;
    double M = 1.0;
    double sigma = 0.0;
    std::string out = "-";
};

int run_theory(const TheoryArgs& args)
{
    liprox::TheoryInputs inp;
    inp.n = args.n;
    inp.p = args.p;
    inp.k_star = args.k_star;
    inp.G = args.G;
    inp.s_star = args.s_star;
    inp.m_star = args.m_star;
    inp.gamma = args.gamma;
    inp.alpha = args.alpha;
    inp.delta = args.delta;
    inp.L = args.L;
    inp.M = args.M;
    inp.sigma = args.sigma > 0.0 ? args.sigma : 1.0;

    json out{{"schema_version", 1}};
    out["eta"] = liprox::lipschitz_eta(inp);
    out["lambda_l1"] =
        std::get<double>(liprox::lipschitz_loss_level(liprox::LevelKind::l1, inp));
    out["slope_weights"] = liprox::slope_weights(inp.p, inp.p);
    if (inp.G > 0 && inp.s_star > 0 && inp.m_star > 0)
        out["lambda_group"] =
            std::get<double>(liprox::lipschitz_loss_level(liprox::LevelKind::group, inp));
    if (args.sigma > 0.0) {
        out["eta_least_squares"] = liprox::least_squares_eta(inp);
        out["lambda_lasso"] = liprox::least_squares_level(liprox::LsLevelKind::lasso, inp);
        if (inp.G > 0 && inp.s_star > 0 && inp.m_star > 0)
            out["lambda_group_lasso"] =
                liprox::least_squares_level(liprox::LsLevelKind::group_lasso, inp);
    }
    write_text(args.out, out.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv)
{
    CLI::App app{"liprox: sparse Lipschitz-loss estimators via smoothed proximal gradient"};
    app.require_subcommand(1);

    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "Fit a single model and write the result as JSON");
    fit->add_option("data", fit_args.data_path, "Dataset CSV (features..., response)")->required();
    fit->add_option("--out", fit_args.out, "Output JSON path ('-' = stdout)")
        ->capture_default_str();
    fit_args.loss.attach(fit);
    fit_args.reg.attach(fit);
    fit_args.solver.attach(fit);

    PathArgs path_args;
    CLI::App* path =
        app.add_subcommand("path", "Fit a regularization path and write it as CSV");
    path->add_option("data", path_args.data_path, "Dataset CSV (features..., response)")
        ->required();
    path->add_option("--out", path_args.out, "Output CSV path ('-' = stdout)")
        ->capture_default_str();
    path_args.loss.attach(path);
    path_args.reg.attach(path);
    path_args.solver.attach(path);
    path->add_option("--points", path_args.points, "Number of grid points")
        ->capture_default_str();
    path->add_option("--min-ratio", path_args.min_ratio, "eta_last / eta_first ratio")
        ->capture_default_str();
    path->add_option("--eta0-rule", path_args.eta0_rule,
                     "Grid top rule: l1_colsum, row_norm_sq, group_linf_rule, lasso_xty, "
                     "ridge_spectral, explicit")
        ->capture_default_str();
    path->add_option("--eta0", path_args.eta0, "Grid top value for rule 'explicit'")
        ->capture_default_str();
    path->add_flag("--ridge-on-grid", path_args.ridge_on_grid,
                   "Grid drives the loss-side ridge coefficient (penalty must be 'none')");
    path->add_flag("--select", path_args.select,
                   "Mark the grid point with the best validation metric");
    path->add_option("--val", path_args.val_path, "Validation dataset CSV");
    path->add_option("--metric", path_args.metric,
                     "Validation metric: misclassification, prediction_error, pinball")
        ->capture_default_str();
    path->add_option("--beta-ref", path_args.beta_ref_path,
                     "Reference coefficients file for prediction_error (one value per line)");

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Run a simulation sweep and write a results CSV plus a JSON summary");
    sim_args.cmd = sim;
    sim->add_option("--config", sim_args.config_path,
                    "JSON config file (flags override file values; unknown keys rejected)");
    sim->add_option("--out-csv", sim_args.out_csv, "Results CSV path")->capture_default_str();
    sim->add_option("--out-json", sim_args.out_json, "Summary JSON path")->capture_default_str();
    sim->add_flag("--paper-scale", sim_args.paper_scale,
                  "Use the paper-scale p sweep (config key p_sweep_paper, or the built-in "
                  "{2000, 10000, 50000, 100000})");
    sim->add_option("--example", sim_args.example,
                    "Generator: sparse_classification, group_classification, "
                    "heteroscedastic_regression")
        ->capture_default_str();
    sim->add_option("--n", sim_args.n, "Training sample size")->capture_default_str();
    sim->add_option("--p-sweep", sim_args.p_sweep, "Dimensions to sweep")->capture_default_str();
    sim->add_option("--k-star", sim_args.k_star, "Sparsity (examples 1 and 3)")
        ->capture_default_str();
    sim->add_option("--s-star", sim_args.s_star, "Relevant group count (example 2)")
        ->capture_default_str();
    sim->add_option("--g-star", sim_args.g_star, "Group size (example 2)")->capture_default_str();
    sim->add_option("--delta", sim_args.delta, "Class separation (classification)")
        ->capture_default_str();
    sim->add_option("--rho", sim_args.rho, "Correlation parameter")->capture_default_str();
    sim->add_option("--snr", sim_args.snr, "Per-sample signal-to-noise ratio (example 3)")
        ->capture_default_str();
    sim->add_option("--theta", sim_args.theta, "Quantile level for the LAD methods")
        ->capture_default_str();
    sim->add_option("--seed", sim_args.seed, "Base RNG seed (env LIPROX_SEED supplies the default)")
        ->capture_default_str();
    sim->add_option("--n-val", sim_args.n_val, "Validation split size")->capture_default_str();
    sim->add_option("--n-test", sim_args.n_test, "Test split size")->capture_default_str();
    sim->add_option("--seeds", sim_args.n_seeds, "Number of seeds (replications)")
        ->capture_default_str();
    sim->add_option("--methods", sim_args.methods,
                    "Methods: a_l1, b_slope, c_l2, d_group_l1l2, e_group_l1linf, lasso, ridge, "
                    "l1_lad, slope_lad")
        ->capture_default_str();
    sim->add_option("--path-points", sim_args.path_points, "Grid points per path")
        ->capture_default_str();
    sim->add_option("--min-ratio", sim_args.min_ratio, "eta_last / eta_first ratio")
        ->capture_default_str();
    sim->add_option("--ridge-eps", sim_args.ridge_eps,
                    "Small ridge used by the oracle reference fit")
        ->capture_default_str();
    sim->add_option("--max-iter", sim_args.max_iter, "Iteration cap per solve")
        ->capture_default_str();
    sim->add_option("--rel-tol", sim_args.rel_tol, "Solver stopping tolerance")
        ->capture_default_str();
    sim->add_option("--step-safety", sim_args.step_safety, "Step-size safety factor (>= 1)")
        ->capture_default_str();
    sim->add_option("--jobs", sim_args.jobs, "Work-pool size (0 = logical cores)")
        ->capture_default_str();

    ExportLpArgs lp_args;
    CLI::App* lp = app.add_subcommand("export-lp", "Write an LP-format file for a tiny instance");
    lp->add_option("data", lp_args.data_path, "Dataset CSV (features..., response)")->required();
    lp->add_option("--form", lp_args.form, "Formulation: l1svm, grouplinfsvm, l1lad")->required();
    lp->add_option("--lambda", lp_args.lambda, "LP-scale penalty level")->capture_default_str();
    lp->add_option("--group-size", lp_args.group_size,
                   "Contiguous group size (grouplinfsvm only)")
        ->capture_default_str();
    lp->add_option("--out", lp_args.out, "Output LP path ('-' = stdout)")->capture_default_str();

    TheoryArgs th_args;
    CLI::App* th = app.add_subcommand(
        "theory", "Print the closed-form regularization levels and Slope weights as JSON");
    th->add_option("--n", th_args.n, "Sample size")->required();
    th->add_option("--p", th_args.p, "Dimension")->required();
    th->add_option("--kstar", th_args.k_star, "Sparsity of the target")->required();
    th->add_option("--G", th_args.G, "Number of groups (group level)")->capture_default_str();
    th->add_option("--sstar", th_args.s_star, "Relevant group count (group level)")
        ->capture_default_str();
    th->add_option("--mstar", th_args.m_star, "Aggregate relevant group size (group level)")
        ->capture_default_str();
    th->add_option("--gamma", th_args.gamma, "Group-size balance factor (>= 1)")
        ->capture_default_str();
    th->add_option("--alpha", th_args.alpha, "Confidence amplification factor (>= 2)")
        ->capture_default_str();
    th->add_option("--delta", th_args.delta, "Failure probability in (0,1)")
        ->capture_default_str();
    th->add_option("--L", th_args.L, "Loss Lipschitz constant")->capture_default_str();
    th->add_option("--M", th_args.M, "Sub-Gaussian design scale")->capture_default_str();
    th->add_option("--sigma", th_args.sigma,
                   "Noise scale; set > 0 to also print the least-squares levels")
        ->capture_default_str();
    th->add_option("--out", th_args.out, "Output JSON path ('-' = stdout)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;
    }

    try {
        if (fit->parsed()) return run_fit(fit_args);
        if (path->parsed()) return run_path(path_args);
        if (sim->parsed()) return run_simulate(sim_args);
        if (lp->parsed()) return run_export_lp(lp_args);
        if (th->parsed()) return run_theory(th_args);
    } catch (const std::exception& e) {
        std::cerr << "liprox: " << e.what() << "\n";
        return kExitError;
    }
    std::cerr << "liprox: no subcommand\n";
    return kExitError;
}
