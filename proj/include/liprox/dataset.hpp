#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace liprox {

/// Disjoint index sets covering {0, ..., p-1}.
using GroupPartition = std::vector<std::vector<std::size_t>>;

/// Throws unless `groups` is a partition of {0, ..., p-1} with nonempty parts.
inline void validate_partition(const GroupPartition& groups, std::size_t p)
{
    std::vector<char> seen(p, 0);
    std::size_t covered = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty())
            throw std::invalid_argument("groups: group " + std::to_string(g) + " is empty");
        for (std::size_t j : groups[g]) {
            if (j >= p)
                throw std::invalid_argument("groups: index " + std::to_string(j) +
                                            " out of range for p=" + std::to_string(p));
            if (seen[j])
                throw std::invalid_argument("groups: index " + std::to_string(j) +
                                            " appears in more than one group");
            seen[j] = 1;
            ++covered;
        }
    }
    if (covered != p)
        throw std::invalid_argument("groups: indices cover " + std::to_string(covered) +
                                    " of " + std::to_string(p) + " variables");
}

/// Contiguous equal-size partition: {0..size-1}, {size..2*size-1}, ...
inline GroupPartition contiguous_groups(std::size_t p, std::size_t group_size)
{
    if (group_size == 0 || p % group_size != 0)
        throw std::invalid_argument("contiguous_groups: p must be a positive multiple of group_size");
    GroupPartition groups(p / group_size);
    for (std::size_t j = 0; j < p; ++j) groups[j / group_size].push_back(j);
    return groups;
}

/// A design matrix with responses and an optional group structure.
struct Dataset {
    DenseMatrix X;
    std::vector<double> y;
    std::optional<GroupPartition> groups;

    Dataset() = default;
    Dataset(DenseMatrix X_, std::vector<double> y_,
            std::optional<GroupPartition> groups_ = std::nullopt)
        : X(std::move(X_)), y(std::move(y_)), groups(std::move(groups_))
    {
        if (y.size() != X.rows())
            throw std::invalid_argument("Dataset: y has " + std::to_string(y.size()) +
                                        " entries for " + std::to_string(X.rows()) + " rows");
        for (double v : y)
            if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite response");
        if (groups) validate_partition(*groups, X.cols());
    }

    std::size_t n() const { return X.rows(); }
    std::size_t p() const { return X.cols(); }

    /// Throws unless every response is exactly +1 or -1.
    void require_binary_labels() const
    {
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] != 1.0 && y[i] != -1.0)
                throw std::invalid_argument("labels must be +1/-1; row " + std::to_string(i) +
                                            " has " + std::to_string(y[i]));
    }
};

/// Load a dataset from headerless CSV where the last column is the response.
inline Dataset load_csv(const std::string& path,
                        std::optional<GroupPartition> groups = std::nullopt)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);
    std::vector<double> values;
    std::vector<double> y;
    std::size_t p = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                fields.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("load_csv: " + path + " line " +
                                         std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (fields.size() < 2)
            throw std::runtime_error("load_csv: " + path + " line " + std::to_string(line_no) +
                                     ": need at least one feature and a response");
        if (p == 0)
            p = fields.size() - 1;
        else if (fields.size() - 1 != p)
            throw std::runtime_error("load_csv: " + path + " line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(p + 1) + " columns, got " +
                                     std::to_string(fields.size()));
        values.insert(values.end(), fields.begin(), fields.end() - 1);
        y.push_back(fields.back());
    }
    if (y.empty()) throw std::runtime_error("load_csv: " + path + " is empty");
    DenseMatrix X(y.size(), p, std::move(values));
    return Dataset(std::move(X), std::move(y), std::move(groups));
}

/// Write a dataset as headerless CSV, features then response, %.17g each.
inline void save_csv(const std::string& path, const Dataset& data)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path);
    char buf[64];
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (std::size_t j = 0; j < data.p(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", data.X(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", data.y[i]);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("save_csv: write failed for " + path);
}

}  // namespace liprox
