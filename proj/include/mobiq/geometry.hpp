#pragma once

#include <cstdint>
#include <vector>

#include "mobiq/rng.hpp"

namespace mobiq {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Square torus of the given side length; the fundamental domain is
// [0, side) x [0, side) and all stored coordinates live there.
struct Arena {
    double side = 100.0;

    bool operator==(const Arena&) const = default;
};

// Wraps a coordinate into [0, side). Exact for inputs within one period of
// the domain, which is all the motion code ever produces.
inline double wrap_coordinate(double x, double side) {
    if (x >= side) x -= side;
    if (x < 0.0) x += side;
    if (x >= side || x < 0.0) x -= side * std::floor(x / side);  // arbitrary input
    return x;
}

// Minimum-image displacement from a to b (per-axis, valid for wrapped inputs).
inline Vec2 torus_delta(const Vec2& a, const Vec2& b, const Arena& arena) {
    const double half = 0.5 * arena.side;
    double dx = b.x - a.x;
    double dy = b.y - a.y;
    if (dx > half) dx -= arena.side;
    if (dx < -half) dx += arena.side;
    if (dy > half) dy -= arena.side;
    if (dy < -half) dy += arena.side;
    return {dx, dy};
}

double torus_distance(const Vec2& a, const Vec2& b, const Arena& arena);

class PointConfiguration {
  public:
    PointConfiguration(Arena arena, std::vector<Vec2> points);

    const Arena& arena() const { return arena_; }
    const std::vector<Vec2>& points() const { return points_; }
    std::vector<Vec2>& points() { return points_; }
    std::size_t size() const { return points_.size(); }
    const Vec2& operator[](std::size_t i) const { return points_[i]; }

  private:
    Arena arena_;
    std::vector<Vec2> points_;
};

// Poisson draw with the given mean; inversion for small means, transformed
// rejection (PTRS) otherwise.
std::int64_t sample_poisson(double mean, Rng& rng);

// Homogeneous Poisson process of the given intensity on the torus.
// Throws std::invalid_argument for negative or non-finite intensity.
PointConfiguration sample_ppp(double intensity, Arena arena, Rng& rng);

// Counts points in a grid x grid partition of the arena, row-major.
std::vector<std::int64_t> box_counts(const PointConfiguration& config, int grid);

}  // namespace mobiq
