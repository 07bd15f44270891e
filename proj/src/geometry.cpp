#include "mobiq/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mobiq {

PointConfiguration::PointConfiguration(Arena arena, std::vector<Vec2> points)
    : arena_(arena), points_(std::move(points)) {
    if (!(arena_.side > 0.0) || !std::isfinite(arena_.side))
        throw std::invalid_argument("arena side must be positive and finite");
}

double torus_distance(const Vec2& a, const Vec2& b, const Arena& arena) {
    // remainder() maps arbitrary reals into [-side/2, side/2], so this stays
    // correct even for unwrapped inputs.
    const double dx = std::remainder(a.x - b.x, arena.side);
    const double dy = std::remainder(a.y - b.y, arena.side);
    return std::sqrt(dx * dx + dy * dy);
}

std::int64_t sample_poisson(double mean, Rng& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("Poisson mean must be nonnegative and finite");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        // Inversion by uniform products.
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double prod = rng.uniform();
        while (prod > limit) {
            prod *= rng.uniform();
            ++k;
        }
        return k;
    }
    // Hoermann's PTRS transformed rejection.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = rng.uniform() - 0.5;
        double v = rng.uniform();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(kf);
    }
}

PointConfiguration sample_ppp(double intensity, Arena arena, Rng& rng) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
        throw std::invalid_argument("intensity must be nonnegative and finite");
    if (!(arena.side > 0.0) || !std::isfinite(arena.side))
        throw std::invalid_argument("arena side must be positive and finite");
    const double mean = intensity * arena.side * arena.side;
    const std::int64_t n = sample_poisson(mean, rng);
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
        p.x = rng.uniform() * arena.side;
        p.y = rng.uniform() * arena.side;
    }
    return {arena, std::move(pts)};
}

std::vector<std::int64_t> box_counts(const PointConfiguration& config, int grid) {
    if (grid <= 0) throw std::invalid_argument("grid must be positive");
    const double side = config.arena().side;
    const double scale = static_cast<double>(grid) / side;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(grid) * grid, 0);
    for (const auto& p : config.points()) {
        int ix = static_cast<int>(p.x * scale);
        int iy = static_cast<int>(p.y * scale);
        if (ix >= grid) ix = grid - 1;  // x == side after rounding at the seam
        if (iy >= grid) iy = grid - 1;
        if (ix < 0) ix = 0;
        if (iy < 0) iy = 0;
        counts[static_cast<std::size_t>(iy) * grid + ix] += 1;
    }
    return counts;
}

}  // namespace mobiq
