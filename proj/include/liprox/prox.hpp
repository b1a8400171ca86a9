#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dataset.hpp"
#include "matrix.hpp"

namespace liprox {

enum class RegKind { none, l1, slope, group_l1l2, group_l1linf };

/// Penalty description. `lambda` scales the l1 / group kinds; `weights` is
/// the nonincreasing positive sequence of the Slope norm (already including
/// any global level); group kinds carry their partition here.
struct RegSpec {
    RegKind kind = RegKind::none;
    double lambda = 0.0;
    std::vector<double> weights;
    GroupPartition groups;
};

inline void validate(const RegSpec& reg, std::size_t p)
{
    switch (reg.kind) {
        case RegKind::none: break;
        case RegKind::l1:
            if (reg.lambda < 0.0) throw std::invalid_argument("reg: lambda must be nonnegative");
            break;
        case RegKind::slope: {
            if (reg.weights.size() != p)
                throw std::invalid_argument("reg: slope weights length must equal p");
            for (std::size_t j = 0; j < p; ++j) {
                if (!(reg.weights[j] > 0.0))
                    throw std::invalid_argument("reg: slope weights must be strictly positive");
                if (j > 0 && reg.weights[j] > reg.weights[j - 1])
                    throw std::invalid_argument("reg: slope weights must be nonincreasing");
            }
            break;
        }
        case RegKind::group_l1l2:
        case RegKind::group_l1linf:
            if (reg.lambda < 0.0) throw std::invalid_argument("reg: lambda must be nonnegative");
            if (reg.groups.empty())
                throw std::invalid_argument("reg: group penalty requires a group partition");
            validate_partition(reg.groups, p);
            break;
    }
}

/// Componentwise soft-thresholding: out_j = sign(eta_j) max(|eta_j| - t, 0).
inline std::vector<double> prox_l1(const std::vector<double>& eta, double t)
{
    if (t < 0.0) throw std::invalid_argument("prox_l1: threshold must be nonnegative");
    std::vector<double> out(eta.size());
    for (std::size_t j = 0; j < eta.size(); ++j) {
        const double a = std::abs(eta[j]) - t;
        out[j] = a > 0.0 ? std::copysign(a, eta[j]) : 0.0;
    }
    return out;
}

/// Prox of the Slope (sorted-L1) norm mu * sum_j weights_j |beta|_(j).
///
/// Reduction: the minimizer keeps the signs of eta and, after sorting
/// magnitudes decreasingly, solves
///   min_u 1/2 ||u - eta_sorted||^2 + mu <weights, u>  s.t. u_1 >= ... >= u_p >= 0,
/// i.e. the isotonic (nonincreasing) regression of (eta_sorted_j - mu w_j)
/// clamped at zero, computed by stack-based pool-adjacent-violators.
/// Ties in |eta| are broken by original index (stable sort) for determinism.
inline std::vector<double> prox_slope(const std::vector<double>& eta,
                                      const std::vector<double>& weights, double mu)
{
    const std::size_t p = eta.size();
    if (weights.size() != p) throw std::invalid_argument("prox_slope: weights length mismatch");
    if (mu < 0.0) throw std::invalid_argument("prox_slope: mu must be nonnegative");
    for (std::size_t j = 1; j < p; ++j)
        if (weights[j] > weights[j - 1])
            throw std::invalid_argument("prox_slope: weights must be nonincreasing");

    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(eta[a]) > std::abs(eta[b]);
    });

    struct Block {
        double sum;
        std::size_t count;
    };
    std::vector<Block> stack;
    stack.reserve(p);
    for (std::size_t r = 0; r < p; ++r) {
        stack.push_back({std::abs(eta[order[r]]) - mu * weights[r], 1});
        while (stack.size() >= 2) {
            const Block& last = stack[stack.size() - 1];
            const Block& prev = stack[stack.size() - 2];
            if (last.sum * static_cast<double>(prev.count) <=
                prev.sum * static_cast<double>(last.count))
                break;  // block means already nonincreasing
            Block merged{prev.sum + last.sum, prev.count + last.count};
            stack.pop_back();
            stack.back() = merged;
        }
    }

    std::vector<double> out(p, 0.0);
    std::size_t r = 0;
    for (const Block& b : stack) {
        const double value = std::max(0.0, b.sum / static_cast<double>(b.count));
        for (std::size_t k = 0; k < b.count; ++k, ++r)
            out[order[r]] = std::copysign(value, eta[order[r]]);
    }
    return out;
}

/// Block soft-thresholding per group: out_g = (1 - t/||eta_g||_2)_+ eta_g.
inline std::vector<double> prox_group_l2(const std::vector<double>& eta,
                                         const GroupPartition& groups, double t)
{
    if (t < 0.0) throw std::invalid_argument("prox_group_l2: threshold must be nonnegative");
    validate_partition(groups, eta.size());
    std::vector<double> out(eta.size(), 0.0);
    for (const auto& g : groups) {
        double nrm = 0.0;
        for (std::size_t j : g) nrm += eta[j] * eta[j];
        nrm = std::sqrt(nrm);
        if (nrm > t) {
            const double scale = 1.0 - t / nrm;
            for (std::size_t j : g) out[j] = scale * eta[j];
        }
    }
    return out;
}

/// Euclidean projection onto {v : ||v||_1 <= radius} (sort-and-threshold).
inline std::vector<double> project_l1_ball(const std::vector<double>& eta, double radius)
{
    if (radius < 0.0) throw std::invalid_argument("project_l1_ball: radius must be nonnegative");
    if (norm1(eta) <= radius) return eta;
    if (radius == 0.0) return std::vector<double>(eta.size(), 0.0);
    std::vector<double> mags(eta.size());
    for (std::size_t j = 0; j < eta.size(); ++j) mags[j] = std::abs(eta[j]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double cumsum = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < mags.size(); ++j) {
        cumsum += mags[j];
        const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
        if (mags[j] - candidate > 0.0)
            theta = candidate;
        else
            break;
    }
    std::vector<double> out(eta.size());
    for (std::size_t j = 0; j < eta.size(); ++j) {
        const double a = std::abs(eta[j]) - theta;
        out[j] = a > 0.0 ? std::copysign(a, eta[j]) : 0.0;
    }
    return out;
}

/// Prox of t * ||.||_inf per group via the Moreau identity
/// prox_{t ||.||_inf}(eta) = eta - project_l1_ball(eta, t).
inline std::vector<double> prox_group_linf(const std::vector<double>& eta,
                                           const GroupPartition& groups, double t)
{
    if (t < 0.0) throw std::invalid_argument("prox_group_linf: threshold must be nonnegative");
    validate_partition(groups, eta.size());
    std::vector<double> out(eta.size(), 0.0);
    for (const auto& g : groups) {
        std::vector<double> sub(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) sub[k] = eta[g[k]];
        const std::vector<double> proj = project_l1_ball(sub, t);
        for (std::size_t k = 0; k < g.size(); ++k) out[g[k]] = sub[k] - proj[k];
    }
    return out;
}

/// Penalty value Omega(beta) for a RegSpec (lambda/weights included).
inline double penalty_value(const RegSpec& reg, const std::vector<double>& beta)
{
    switch (reg.kind) {
        case RegKind::none: return 0.0;
        case RegKind::l1: return reg.lambda * norm1(beta);
        case RegKind::slope: {
            if (reg.weights.size() != beta.size())
                throw std::invalid_argument("penalty_value: slope weights length mismatch");
            std::vector<double> mags(beta.size());
            for (std::size_t j = 0; j < beta.size(); ++j) mags[j] = std::abs(beta[j]);
            std::sort(mags.begin(), mags.end(), std::greater<double>());
            double s = 0.0;
            for (std::size_t j = 0; j < mags.size(); ++j) s += reg.weights[j] * mags[j];
            return s;
        }
        case RegKind::group_l1l2: {
            validate_partition(reg.groups, beta.size());
            double s = 0.0;
            for (const auto& g : reg.groups) {
                double nrm = 0.0;
                for (std::size_t j : g) nrm += beta[j] * beta[j];
                s += std::sqrt(nrm);
            }
            return reg.lambda * s;
        }
        case RegKind::group_l1linf: {
            validate_partition(reg.groups, beta.size());
            double s = 0.0;
            for (const auto& g : reg.groups) {
                double m = 0.0;
                for (std::size_t j : g) m = std::max(m, std::abs(beta[j]));
                s += m;
            }
            return reg.lambda * s;
        }
    }
    return 0.0;
}

/// Proximal map S_{step * Omega}(eta), dispatching on the penalty kind.
inline std::vector<double> apply_prox(const RegSpec& reg, const std::vector<double>& eta,
                                      double step)
{
    if (!(step > 0.0)) throw std::invalid_argument("apply_prox: step must be positive");
    switch (reg.kind) {
        case RegKind::none: return eta;
        case RegKind::l1: return prox_l1(eta, step * reg.lambda);
        case RegKind::slope: return prox_slope(eta, reg.weights, step);
        case RegKind::group_l1l2: return prox_group_l2(eta, reg.groups, step * reg.lambda);
        case RegKind::group_l1linf: return prox_group_linf(eta, reg.groups, step * reg.lambda);
    }
    return eta;
}

}  // namespace liprox
