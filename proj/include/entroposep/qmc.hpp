#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "entroposep/errors.hpp"
#include "entroposep/rng.hpp"

namespace entroposep {

/// Generalized (digit-permuted) Halton sequence mapped through the inverse
/// normal CDF. Optional variance-reduction mode for the MC integrators; plain
/// pseudo-random sampling stays the default and the test oracle.
class ScrambledGaussianSequence {
public:
    ScrambledGaussianSequence(std::size_t dimensions, std::uint64_t seed) {
        static constexpr std::array<int, 64> primes = {
            2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
            59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
            137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
            227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};
        if (dimensions > primes.size())
            throw usage_error("ScrambledGaussianSequence: at most 64 dimensions supported");
        bases_.assign(primes.begin(), primes.begin() + static_cast<long>(dimensions));
        auto engine = make_engine(seed, SeedStream::qmc_scramble, 0);
        perms_.resize(dimensions);
        for (std::size_t d = 0; d < dimensions; ++d) {
            int b = bases_[d];
            perms_[d].resize(static_cast<std::size_t>(b));
            for (int i = 0; i < b; ++i) perms_[d][static_cast<std::size_t>(i)] = i;
            // Fisher-Yates over digits 1..b-1; digit 0 stays fixed so the
            // radical inverse keeps its leading-zero structure and u < 1.
            for (int i = b - 1; i > 1; --i) {
                std::uniform_int_distribution<int> pick(1, i);
                std::swap(perms_[d][static_cast<std::size_t>(i)],
                          perms_[d][static_cast<std::size_t>(pick(engine))]);
            }
        }
    }

    std::size_t dimensions() const { return bases_.size(); }

    /// Standard-normal coordinates of sequence point `index` (0-based; the
    /// all-zero Halton point is skipped internally).
    void gaussian_point(std::uint64_t index, double* out) const {
        for (std::size_t d = 0; d < bases_.size(); ++d)
            out[d] = inverse_normal_cdf(radical_inverse(index + 1, d));
    }

    /// Rational approximation of the standard normal quantile (Acklam),
    /// |relative error| < 1.2e-9 over (0,1).
    static double inverse_normal_cdf(double p) {
        static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                       -2.759285104469687e+02, 1.383577518672690e+02,
                                       -3.066479806614716e+01, 2.506628277459239e+00};
        static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                       -1.556989798598866e+02, 6.680131188771972e+01,
                                       -1.328068155288572e+01};
        static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                       -2.400758277161838e+00, -2.549732539343734e+00,
                                       4.374664141464968e+00,  2.938163982698783e+00};
        static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                       2.445134137142996e+00, 3.754408661907416e+00};
        constexpr double p_low = 0.02425;
        if (p <= 0.0) p = 1e-300;
        if (p >= 1.0) p = 1.0 - 1e-16;
        if (p < p_low) {
            double q = std::sqrt(-2.0 * std::log(p));
            return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                   ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
        }
        if (p <= 1.0 - p_low) {
            double q = p - 0.5;
            double r = q * q;
            return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
                   (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
        }
        double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

private:
    double radical_inverse(std::uint64_t index, std::size_t dim) const {
        const std::uint64_t b = static_cast<std::uint64_t>(bases_[dim]);
        const auto& perm = perms_[dim];
        double inv_base = 1.0 / static_cast<double>(b);
        double factor = inv_base;
        double value = 0.0;
        while (index > 0) {
            value += factor * static_cast<double>(perm[index % b]);
            index /= b;
            factor *= inv_base;
        }
        return value;
    }

    std::vector<int> bases_;
    std::vector<std::vector<int>> perms_;
};

} // namespace entroposep
