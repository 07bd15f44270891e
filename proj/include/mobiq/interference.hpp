#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mobiq/channel.hpp"
#include "mobiq/geometry.hpp"

namespace mobiq {

// One instant of the interferer field as seen by the receiver at the origin
// of the arena's coordinate frame. The tagged transmitter is not part of the
// configuration; it enters only through LinkParams.
struct Snapshot {
    PointConfiguration config;
    std::vector<double> fades;          // per-point power fades F_j
    std::vector<std::uint8_t> activity; // per-point on/off mask; empty = all on
    double signal_fade = 1.0;           // F_0

    Snapshot(PointConfiguration cfg, std::vector<double> f, std::vector<std::uint8_t> act = {},
             double sig = 1.0);
};

struct LinkParams {
    double distance = 0.3;  // transmitter-receiver separation R
    double noise = 0.0;     // thermal noise power
    PathLoss pathloss = PathLoss::bounded(4.0);
};

// Aggregate interference power at the origin: sum of l(|x_j|) * F_j over
// active points, compensated summation in point-index order (bit-stable for
// a fixed snapshot regardless of thread count).
double shot_noise(const Snapshot& snap, const LinkParams& lp);

// Same sum over raw arrays; activity may be null (all on). The simulation
// tick loop uses this directly so its interference matches shot_noise bit
// for bit on the equivalent snapshot.
inline double shot_noise_raw(const Vec2* pts, const double* fades, const std::uint8_t* activity,
                             std::size_t n, const PathLoss& pathloss, double side) {
    const double half = 0.5 * side;
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (activity && activity[i] == 0) continue;
        double dx = pts[i].x;
        double dy = pts[i].y;
        if (dx > half) dx -= side;
        if (dx < -half) dx += side;
        if (dy > half) dy -= side;
        if (dy < -half) dy += side;
        const double r = std::sqrt(dx * dx + dy * dy);
        const double term = path_gain_fast(pathloss, r) * fades[i];
        // Kahan step; the order over i is part of the contract.
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// l(R) * F_0 / (shot noise + noise). Returns +infinity when the denominator
// is zero with a positive numerator; throws std::domain_error on 0/0.
double sinr(const Snapshot& snap, const LinkParams& lp);

}  // namespace mobiq
