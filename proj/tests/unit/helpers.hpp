#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "mobiq/config.hpp"
#include "mobiq/geometry.hpp"
#include "mobiq/rng.hpp"

namespace testutil {

inline double mean(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double variance(std::span<const double> xs) {
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

// Pearson statistic against equal expected counts. Conditional on the total,
// Poisson counts over equal cells are multinomial-uniform, so this is the
// standard goodness-of-fit statistic with cells-1 degrees of freedom.
inline double chi_square_uniform(std::span<const std::int64_t> counts) {
    const double total = static_cast<double>(
        std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
    const double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

// 99.9% chi-square quantile for 99 dof (10x10 grid). A single fixed-seed draw
// is asserted against a far tail so the test only trips on real defects.
inline constexpr double kChi2_99dof_q999 = 148.230;

// Baseline experiment block shared by many tests: 100x100 torus, intensity
// 0.1, link distance 0.3, bounded exponent-4 path loss, unit-mean Rayleigh
// fades, truncated Shannon policy at threshold 8, Bernoulli rate 1.2.
inline mobiq::ExperimentConfig base_config() {
    return mobiq::ExperimentConfig{};
}

}  // namespace testutil
