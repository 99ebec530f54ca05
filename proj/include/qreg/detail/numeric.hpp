#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qreg::detail {

// Pairwise (cascade) summation. Error grows as O(log n) instead of O(n),
// which matters for mode sums with 10^4+ terms of mixed magnitude.
inline double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t block = 16;
    if (values.size() <= block) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// SplitMix64 finaliser; used to derive independent per-sample seeds from
// (base seed, sample index) so parallel schedules give identical results.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// (1 - cos x), accurate for small x.
inline double one_minus_cos(double x) {
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

// (x - sin x), accurate for small x (series below 1e-2).
inline double x_minus_sin(double x) {
    if (std::abs(x) < 1e-2) {
        const double x2 = x * x;
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return x - std::sin(x);
}

}  // namespace qreg::detail
