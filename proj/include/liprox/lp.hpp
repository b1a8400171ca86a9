#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace liprox {

enum class Sense { ge, le, eq };

struct LpVariable {
    std::string name;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool operator==(const LpVariable&) const = default;
};

struct LpConstraint {
    std::string name;
    std::vector<std::pair<std::size_t, double>> terms;  ///< (variable index, coefficient), sorted
    Sense sense = Sense::ge;
    double rhs = 0.0;
    bool operator==(const LpConstraint&) const = default;
};

/// A linear program min c^T x subject to the rows and variable bounds.
struct LpModel {
    std::vector<LpVariable> variables;
    std::vector<double> objective;  ///< dense, aligned with variables
    std::vector<LpConstraint> constraints;
    bool operator==(const LpModel&) const = default;
};

namespace detail {

inline std::string lp_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void append_terms(std::string& line, const std::vector<std::pair<std::size_t, double>>& terms,
                         const std::vector<LpVariable>& vars)
{
    bool first = true;
    for (const auto& [j, coef] : terms) {
        if (coef == 0.0) continue;
        if (first) {
            if (coef < 0.0) line += "- ";
            first = false;
        } else {
            line += coef < 0.0 ? " - " : " + ";
        }
        line += lp_number(std::abs(coef));
        line += ' ';
        line += vars[j].name;
    }
}

}  // namespace detail

/// L1-regularized soft-margin SVM as a linear program:
///   min sum_i xi_i + lambda sum_j bp_j + lambda sum_j bm_j
///   s.t. xi_i + y_i x_i^T bp - y_i x_i^T bm >= 1,  all variables >= 0
/// (objective deliberately unnormalized, matching the LP reformulation; the
/// proximal objective divides the loss by n, so lambda here = n * eta there).
inline LpModel build_l1_svm_lp(const Dataset& data, double lambda)
{
    data.require_binary_labels();
    if (lambda < 0.0) throw std::invalid_argument("build_l1_svm_lp: lambda must be >= 0");
    const std::size_t n = data.n(), p = data.p();

    LpModel model;
    model.variables.reserve(n + 2 * p);
    for (std::size_t i = 0; i < n; ++i) model.variables.push_back({"xi_" + std::to_string(i + 1)});
    for (std::size_t j = 0; j < p; ++j) model.variables.push_back({"bp_" + std::to_string(j + 1)});
    for (std::size_t j = 0; j < p; ++j) model.variables.push_back({"bm_" + std::to_string(j + 1)});

    model.objective.assign(n + 2 * p, 0.0);
    for (std::size_t i = 0; i < n; ++i) model.objective[i] = 1.0;
    for (std::size_t j = 0; j < 2 * p; ++j) model.objective[n + j] = lambda;

    for (std::size_t i = 0; i < n; ++i) {
        LpConstraint row;
        row.name = "margin_" + std::to_string(i + 1);
        row.terms.emplace_back(i, 1.0);
        const double* x = data.X.row(i);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + j, data.y[i] * x[j]);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + p + j, -data.y[i] * x[j]);
        row.sense = Sense::ge;
        row.rhs = 1.0;
        model.constraints.push_back(std::move(row));
    }
    return model;
}

/// Group L1-Linf SVM as a linear program:
///   min sum_i xi_i + lambda sum_g v_g
///   s.t. xi_i + y_i x_i^T bp - y_i x_i^T bm >= 1
///        v_g - bp_j - bm_j >= 0 for j in I_g,  all variables >= 0
inline LpModel build_group_linf_svm_lp(const Dataset& data, double lambda)
{
    data.require_binary_labels();
    if (!data.groups) throw std::invalid_argument("build_group_linf_svm_lp: dataset has no groups");
    if (lambda < 0.0) throw std::invalid_argument("build_group_linf_svm_lp: lambda must be >= 0");
    const std::size_t n = data.n(), p = data.p(), G = data.groups->size();

    LpModel model;
    model.variables.reserve(n + 2 * p + G);
    for (std::size_t i = 0; i < n; ++i) model.variables.push_back({"xi_" + std::to_string(i + 1)});
    for (std::size_t j = 0; j < p; ++j) model.variables.push_back({"bp_" + std::to_string(j + 1)});
    for (std::size_t j = 0; j < p; ++j) model.variables.push_back({"bm_" + std::to_string(j + 1)});
    for (std::size_t g = 0; g < G; ++g) model.variables.push_back({"v_" + std::to_string(g + 1)});

    model.objective.assign(n + 2 * p + G, 0.0);
    for (std::size_t i = 0; i < n; ++i) model.objective[i] = 1.0;
    for (std::size_t g = 0; g < G; ++g) model.objective[n + 2 * p + g] = lambda;

    for (std::size_t i = 0; i < n; ++i) {
        LpConstraint row;
        row.name = "margin_" + std::to_string(i + 1);
        row.terms.emplace_back(i, 1.0);
        const double* x = data.X.row(i);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + j, data.y[i] * x[j]);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + p + j, -data.y[i] * x[j]);
        row.sense = Sense::ge;
        row.rhs = 1.0;
        model.constraints.push_back(std::move(row));
    }
    for (std::size_t g = 0; g < G; ++g)
        for (std::size_t j : (*data.groups)[g]) {
            LpConstraint row;
            row.name = "link_" + std::to_string(j + 1);
            row.terms.emplace_back(n + j, -1.0);
            row.terms.emplace_back(n + p + j, -1.0);
            row.terms.emplace_back(n + 2 * p + g, 1.0);
            row.sense = Sense::ge;
            row.rhs = 0.0;
            model.constraints.push_back(std::move(row));
        }
    return model;
}

/// L1-regularized least-angle deviation regression as a linear program:
///   min sum_i xi_i + lambda sum_j bp_j + lambda sum_j bm_j
///   s.t. xi_i + x_i^T bp - x_i^T bm >= y_i
///        xi_i - x_i^T bp + x_i^T bm >= -y_i,  all variables >= 0
/// (the unsmoothed loss here is sum |y_i - x_i^T beta|, i.e. 2n times the
/// normalized quantile objective at theta = 1/2, so lambda = 2n * eta).
inline LpModel build_l1_lad_lp(const Dataset& data, double lambda)
{
    if (lambda < 0.0) throw std::invalid_argument("build_l1_lad_lp: lambda must be >= 0");
    const std::size_t n = data.n(), p = data.p();

    LpModel model;
    model.variables.reserve(n + 2 * p);
    for (std::size_t i = 0; i < n; ++i) model.variables.push_back({"xi_" + std::to_string(i + 1)});
    for (std::size_t j = 0; j < p; ++j) model.variables.push_back({"bp_" + std::to_string(j + 1)});
    for (std::size_t j = 0; j < p; ++j) model.variables.push_back({"bm_" + std::to_string(j + 1)});

    model.objective.assign(n + 2 * p, 0.0);
    for (std::size_t i = 0; i < n; ++i) model.objective[i] = 1.0;
    for (std::size_t j = 0; j < 2 * p; ++j) model.objective[n + j] = lambda;

    for (std::size_t i = 0; i < n; ++i) {
        LpConstraint row;
        row.name = "abs_pos_" + std::to_string(i + 1);
        row.terms.emplace_back(i, 1.0);
        const double* x = data.X.row(i);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + j, x[j]);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + p + j, -x[j]);
        row.sense = Sense::ge;
        row.rhs = data.y[i];
        model.constraints.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < n; ++i) {
        LpConstraint row;
        row.name = "abs_neg_" + std::to_string(i + 1);
        row.terms.emplace_back(i, 1.0);
        const double* x = data.X.row(i);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + j, -x[j]);
        for (std::size_t j = 0; j < p; ++j)
            if (x[j] != 0.0) row.terms.emplace_back(n + p + j, x[j]);
        row.sense = Sense::ge;
        row.rhs = -data.y[i];
        model.constraints.push_back(std::move(row));
    }
    return model;
}

/// Unsmoothed LP-scale objectives at a primal coefficient vector (used to
/// compare proximal solutions against LP optima).
inline double l1_svm_lp_objective(const Dataset& data, double lambda,
                                  const std::vector<double>& beta)
{
    const std::vector<double> scores = matvec(data.X, beta);
    double s = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i)
        s += std::max(0.0, 1.0 - data.y[i] * scores[i]);
    return s + lambda * norm1(beta);
}

inline double group_linf_lp_objective(const Dataset& data, double lambda,
                                      const std::vector<double>& beta)
{
    if (!data.groups) throw std::invalid_argument("group_linf_lp_objective: no groups");
    const std::vector<double> scores = matvec(data.X, beta);
    double s = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i)
        s += std::max(0.0, 1.0 - data.y[i] * scores[i]);
    double pen = 0.0;
    for (const auto& g : *data.groups) {
        double m = 0.0;
        for (std::size_t j : g) m = std::max(m, std::abs(beta[j]));
        pen += m;
    }
    return s + lambda * pen;
}

inline double l1_lad_lp_objective(const Dataset& data, double lambda,
                                  const std::vector<double>& beta)
{
    const std::vector<double> pred = matvec(data.X, beta);
    double s = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) s += std::abs(data.y[i] - pred[i]);
    return s + lambda * norm1(beta);
}

/// Deterministic LP-format text: Minimize / Subject To / Bounds / End,
/// coefficients at 17 significant digits, variables and rows in model order.
inline std::string lp_to_string(const LpModel& model)
{
    std::string out = "Minimize\n obj:";
    std::vector<std::pair<std::size_t, double>> obj_terms;
    for (std::size_t j = 0; j < model.objective.size(); ++j)
        if (model.objective[j] != 0.0) obj_terms.emplace_back(j, model.objective[j]);
    if (!obj_terms.empty()) {
        out += ' ';
        detail::append_terms(out, obj_terms, model.variables);
    }
    out += "\nSubject To\n";
    for (const auto& row : model.constraints) {
        out += ' ';
        out += row.name;
        out += ": ";
        detail::append_terms(out, row.terms, model.variables);
        switch (row.sense) {
            case Sense::ge: out += " >= "; break;
            case Sense::le: out += " <= "; break;
            case Sense::eq: out += " = "; break;
        }
        out += detail::lp_number(row.rhs);
        out += '\n';
    }
    out += "Bounds\n";
    for (const auto& v : model.variables) {
        out += ' ';
        out += detail::lp_number(v.lower);
        out += " <= ";
        out += v.name;
        if (std::isfinite(v.upper)) {
            out += " <= ";
            out += detail::lp_number(v.upper);
        }
        out += '\n';
    }
    out += "End\n";
    return out;
}

inline void write_lp_file(const LpModel& model, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_lp_file: cannot open " + path);
    out << lp_to_string(model);
    if (!out) throw std::runtime_error("write_lp_file: write failed for " + path);
}

/// Parser for the exact grammar emitted by lp_to_string (round-trip checks
/// and golden-file verification only, not a general LP-format reader).
inline LpModel read_lp_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_lp_file: cannot open " + path);
    std::vector<std::string> obj_lines, cons_lines, bound_lines;
    std::string line, section;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line == "Minimize" || line == "Subject To" || line == "Bounds" || line == "End") {
            section = line;
            continue;
        }
        if (section == "Minimize") obj_lines.push_back(line);
        else if (section == "Subject To") cons_lines.push_back(line);
        else if (section == "Bounds") bound_lines.push_back(line);
        else throw std::runtime_error("read_lp_file: content outside any section: " + line);
    }

    LpModel model;
    for (const std::string& b : bound_lines) {
        std::istringstream ss(b);
        LpVariable v;
        std::string le1, le2;
        if (!(ss >> v.lower >> le1 >> v.name) || le1 != "<=")
            throw std::runtime_error("read_lp_file: bad bound line: " + b);
        if (ss >> le2 >> v.upper) {
            if (le2 != "<=") throw std::runtime_error("read_lp_file: bad bound line: " + b);
        }
        model.variables.push_back(std::move(v));
    }
    auto var_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t j = 0; j < model.variables.size(); ++j)
            if (model.variables[j].name == name) return j;
        throw std::runtime_error("read_lp_file: unknown variable " + name);
    };
    // expression grammar: ["-"] coef name { ("+"|"-") coef name }
    auto parse_terms = [&](std::istringstream& ss, const std::string& stop_at,
                           std::vector<std::pair<std::size_t, double>>& terms) -> std::string {
        std::string tok;
        double sign = 1.0;
        bool expect_coef = true;
        double coef = 0.0;
        while (ss >> tok) {
            if (tok == stop_at || tok == "<=" || tok == ">=" || tok == "=") return tok;
            if (tok == "+") { sign = 1.0; expect_coef = true; continue; }
            if (tok == "-") { sign = -1.0; expect_coef = true; continue; }
            if (expect_coef) {
                coef = sign * std::stod(tok);
                expect_coef = false;
            } else {
                terms.emplace_back(var_index(tok), coef);
                sign = 1.0;
                expect_coef = true;
            }
        }
        return "";
    };

    std::string joined_obj;
    for (const std::string& l : obj_lines) joined_obj += l + ' ';
    {
        std::istringstream ss(joined_obj);
        std::string head;
        ss >> head;
        if (head != "obj:") throw std::runtime_error("read_lp_file: objective must start with obj:");
        std::vector<std::pair<std::size_t, double>> terms;
        parse_terms(ss, "", terms);
        model.objective.assign(model.variables.size(), 0.0);
        for (const auto& [j, c] : terms) model.objective[j] = c;
    }

    for (const std::string& l : cons_lines) {
        std::istringstream ss(l);
        LpConstraint row;
        ss >> row.name;
        if (row.name.empty() || row.name.back() != ':')
            throw std::runtime_error("read_lp_file: constraint needs 'name:': " + l);
        row.name.pop_back();
        const std::string sense = parse_terms(ss, "", row.terms);
        if (sense == ">=") row.sense = Sense::ge;
        else if (sense == "<=") row.sense = Sense::le;
        else if (sense == "=") row.sense = Sense::eq;
        else throw std::runtime_error("read_lp_file: missing sense in: " + l);
        if (!(ss >> row.rhs)) throw std::runtime_error("read_lp_file: missing rhs in: " + l);
        model.constraints.push_back(std::move(row));
    }
    return model;
}

enum class LpStatus { optimal, infeasible, unbounded };

struct TinyLpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

namespace detail {

/// Gaussian elimination with partial pivoting; false on (near-)singularity.
inline bool solve_square(std::vector<double> A, std::vector<double> b, std::size_t d,
                         std::vector<double>& x)
{
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(A[r * d + col]) > std::abs(A[pivot * d + col])) pivot = r;
        if (std::abs(A[pivot * d + col]) < 1e-11) return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < d; ++c) std::swap(A[pivot * d + c], A[col * d + c]);
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < d; ++r) {
            const double f = A[r * d + col] / A[col * d + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < d; ++c) A[r * d + c] -= f * A[col * d + c];
            b[r] -= f * b[col];
        }
    }
    x.assign(d, 0.0);
    for (std::size_t r = d; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < d; ++c) s -= A[r * d + c] * x[c];
        x[r] = s / A[r * d + r];
    }
    return true;
}

struct DenseRow {
    std::vector<double> a;
    Sense sense;
    double rhs;
};

/// Enumerate vertices of {x : rows hold} by intersecting every d-subset of
/// rows at equality; returns the best feasible objective, or nothing feasible.
inline bool enumerate_vertices(const std::vector<DenseRow>& rows, const std::vector<double>& c,
                               std::size_t d, double& best, std::vector<double>& best_x)
{
    const std::size_t m = rows.size();
    if (m < d) return false;
    std::vector<std::size_t> pick(d);
    for (std::size_t k = 0; k < d; ++k) pick[k] = k;
    bool found = false;
    std::vector<double> A(d * d), b(d), x;
    while (true) {
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t j = 0; j < d; ++j) A[k * d + j] = rows[pick[k]].a[j];
            b[k] = rows[pick[k]].rhs;
        }
        if (solve_square(A, b, d, x)) {
            bool feasible = true;
            for (const DenseRow& row : rows) {
                double lhs = 0.0;
                for (std::size_t j = 0; j < d; ++j) lhs += row.a[j] * x[j];
                const double slack = lhs - row.rhs;
                const double tol = 1e-8 * (1.0 + std::abs(row.rhs));
                if ((row.sense == Sense::ge && slack < -tol) ||
                    (row.sense == Sense::le && slack > tol) ||
                    (row.sense == Sense::eq && std::abs(slack) > tol)) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                double obj = 0.0;
                for (std::size_t j = 0; j < d; ++j) obj += c[j] * x[j];
                if (!found || obj < best) {
                    best = obj;
                    best_x = x;
                }
                found = true;
            }
        }
        // next combination in lexicographic order
        std::size_t k = d;
        bool advanced = false;
        while (k-- > 0) {
            if (pick[k] < m - d + k) {
                ++pick[k];
                for (std::size_t r = k + 1; r < d; ++r) pick[r] = pick[r - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) return found;
    }
}

}  // namespace detail

/// Exhaustive basic-solution LP oracle for desk-scale instances. Enumerates
/// all intersections of d active rows (constraints plus bounds), filters by
/// feasibility, and returns the best vertex. Exponential; test use only.
inline TinyLpResult solve_tiny_lp(const LpModel& model, std::size_t max_dim = 12)
{
    const std::size_t d = model.variables.size();
    if (d == 0 || d > max_dim)
        throw std::invalid_argument("solve_tiny_lp: variable count out of range");

    std::vector<detail::DenseRow> rows;
    for (const auto& con : model.constraints) {
        detail::DenseRow row{std::vector<double>(d, 0.0), con.sense, con.rhs};
        for (const auto& [j, coefficient] : con.terms) row.a[j] = coefficient;
        rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < d; ++j) {
        detail::DenseRow lo{std::vector<double>(d, 0.0), Sense::ge, model.variables[j].lower};
        lo.a[j] = 1.0;
        rows.push_back(std::move(lo));
        if (std::isfinite(model.variables[j].upper)) {
            detail::DenseRow hi{std::vector<double>(d, 0.0), Sense::le, model.variables[j].upper};
            hi.a[j] = 1.0;
            rows.push_back(std::move(hi));
        }
    }

    TinyLpResult out;
    double best = 0.0;
    std::vector<double> best_x;
    if (!detail::enumerate_vertices(rows, model.objective, d, best, best_x)) {
        out.status = LpStatus::infeasible;
        return out;
    }

    // Unboundedness: scan the recession cone (homogeneous rows, directions in
    // the unit box) for a descent ray. Objectives with all-nonnegative
    // coefficients over nonnegative variables are always bounded; skip then.
    bool maybe_unbounded = false;
    for (std::size_t j = 0; j < d; ++j)
        if (model.objective[j] < 0.0 && !std::isfinite(model.variables[j].upper))
            maybe_unbounded = true;
    if (maybe_unbounded) {
        std::vector<detail::DenseRow> cone;
        for (const auto& con : model.constraints) {
            detail::DenseRow row{std::vector<double>(d, 0.0), con.sense, 0.0};
            for (const auto& [j, coefficient] : con.terms) row.a[j] = coefficient;
            cone.push_back(std::move(row));
        }
        for (std::size_t j = 0; j < d; ++j) {
            detail::DenseRow lo{std::vector<double>(d, 0.0), Sense::ge, 0.0};
            lo.a[j] = 1.0;
            cone.push_back(lo);
            detail::DenseRow hi{std::vector<double>(d, 0.0), Sense::le,
                                std::isfinite(model.variables[j].upper) ? 0.0 : 1.0};
            hi.a[j] = 1.0;
            cone.push_back(std::move(hi));
        }
        double ray_best = 0.0;
        std::vector<double> ray;
        if (detail::enumerate_vertices(cone, model.objective, d, ray_best, ray) &&
            ray_best < -1e-9) {
            out.status = LpStatus::unbounded;
            return out;
        }
    }

    out.status = LpStatus::optimal;
    out.objective = best;
    out.x = std::move(best_x);
    return out;
}

}  // namespace liprox
