#pragma once

#include <vector>

#include "liprox/dataset.hpp"
#include "liprox/matrix.hpp"
#include "liprox/rng.hpp"

namespace testutil {

inline std::vector<double> random_vector(liprox::SplitMix64& rng, std::size_t len,
                                         double scale = 1.0)
{
    std::vector<double> v(len);
    for (double& x : v) x = scale * rng.gaussian();
    return v;
}

inline liprox::DenseMatrix random_matrix(liprox::SplitMix64& rng, std::size_t n, std::size_t p,
                                         double scale = 1.0)
{
    return liprox::DenseMatrix(n, p, random_vector(rng, n * p, scale));
}

inline std::vector<double> random_labels(liprox::SplitMix64& rng, std::size_t n)
{
    std::vector<double> y(n);
    for (double& v : y) v = rng.uniform() < 0.5 ? 1.0 : -1.0;
    return y;
}

inline liprox::Dataset random_classification(liprox::SplitMix64& rng, std::size_t n,
                                             std::size_t p)
{
    return liprox::Dataset(random_matrix(rng, n, p), random_labels(rng, n));
}

inline liprox::Dataset random_regression(liprox::SplitMix64& rng, std::size_t n, std::size_t p)
{
    return liprox::Dataset(random_matrix(rng, n, p), random_vector(rng, n));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testutil
