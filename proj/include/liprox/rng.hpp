#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace liprox {

/// Splittable counter-based 64-bit generator (SplitMix64 core).
///
/// Stream-split convention: `split(k)` hashes the *current* state together
/// with the stream tag k through the SplitMix64 finalizer and seeds a child
/// generator, without advancing the parent. Children with distinct tags (or
/// taken at distinct parent states) produce independent-looking streams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Next raw 64-bit output.
    std::uint64_t next_u64()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        return finalize(z);
    }

    /// Child generator for stream `tag`; the parent state is untouched.
    SplitMix64 split(std::uint64_t tag) const
    {
        return SplitMix64(finalize(state_ + 0x9E3779B97F4A7C15ull * (tag + 1)));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, n) by rejection.
    std::uint64_t uniform_index(std::uint64_t n)
    {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal draw via the polar (Marsaglia) method; pairs are
    /// generated together and the spare is cached.
    double gaussian()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Vector of i.i.d. standard normals.
    std::vector<double> gaussian_vector(std::size_t count)
    {
        std::vector<double> out(count);
        for (double& x : out) x = gaussian();
        return out;
    }

    /// k distinct indices drawn uniformly from {0,...,n-1} (partial
    /// Fisher-Yates), returned sorted ascending.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k)
    {
        if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform_index(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        std::sort(idx.begin(), idx.end());
        return idx;
    }

private:
    static std::uint64_t finalize(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace liprox
