#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mobiq/geometry.hpp"
#include "mobiq/rng.hpp"

namespace mobiq {

enum class MotionKind { Static, RandomDirection, RandomWaypoint, Brownian };

// Per-point motion law. Every model preserves the Poisson law of a sampled
// configuration because displacements are independent of the point positions.
struct MobilityModel {
    MotionKind kind = MotionKind::Static;
    double speed = 0.0;              // RandomDirection / RandomWaypoint
    double resample_interval = 1.0;  // RandomWaypoint heading lifetime
    double sigma = 0.0;              // Brownian per-axis std over one time unit

    static MobilityModel statics() { return {}; }
    static MobilityModel random_direction(double speed);
    static MobilityModel random_waypoint(double speed, double resample_interval = 1.0);
    static MobilityModel brownian(double sigma);

    bool operator==(const MobilityModel&) const = default;
};

// Per-step sigma such that the mean per-step displacement norm of the
// isotropic 2-D Gaussian equals speed * dt: sigma = speed * dt * sqrt(2/pi).
double calibrate_brownian(double speed, double dt);

// Brownian model whose per-tick displacement norm matches a mover of the
// given speed at tick length dt; stores sigma per unit time.
MobilityModel brownian_matching_speed(double speed, double dt);

// Headings and heading lifetimes; entries parallel the point configuration.
// Static and Brownian motion carry no state (vectors stay empty).
struct MotionState {
    std::vector<double> heading;
    std::vector<double> until_resample;
    // (cos, sin) of each heading, refreshed whenever the heading is; caching
    // keeps the per-tick advance free of trig without changing any value.
    std::vector<Vec2> direction;
};

MotionState init_motion(const PointConfiguration& config, const MobilityModel& model, Rng& rng);

// Advances every point by dt on the torus, mutating positions and state.
// RandomWaypoint subdivides dt at heading-resample boundaries. Draw order is
// point-index order, so runs replay exactly for a fixed stream.
void advance_in_place(std::vector<Vec2>& points, MotionState& state, const MobilityModel& model,
                      double dt, const Arena& arena, Rng& rng);

std::pair<PointConfiguration, MotionState> advance(const PointConfiguration& config,
                                                   const MotionState& state,
                                                   const MobilityModel& model, double dt,
                                                   Rng& rng);

struct KernelOptions {
    double rel_tol = 1e-9;
    int angle_nodes_init = 16;
    int angle_nodes_max = 4096;
    int radial_nodes = 64;        // Brownian radial quadrature
    int mc_samples = 1024;        // RandomWaypoint displacement sample
    std::uint64_t mc_seed = 0x51a2b3c4d5e6f708ULL;
};

struct KernelAverage {
    double value = 0.0;
    double std_error = 0.0;  // 0 for deterministic quadrature
};

// Average of f over the one-step displacement distribution of the model at
// the given horizon, started from x on the plane (no torus wrap): RD
// angle-averages on the circle of radius speed*horizon, Brownian integrates
// the isotropic Gaussian radially, RandomWaypoint uses a fixed-seed Monte
// Carlo displacement sample (split-half standard error), Static evaluates f.
KernelAverage kernel_average(const MobilityModel& model, double horizon, const Vec2& x,
                             const std::function<double(const Vec2&)>& f,
                             const KernelOptions& options = {});

// Displacement radii sampled from the RandomWaypoint kernel with common
// random numbers (the sample for a given seed is a deterministic function of
// the horizon); exposed for the analytic integrals that reuse one sample
// across quadrature nodes.
std::vector<double> rwp_displacement_sample(const MobilityModel& model, double horizon,
                                            int samples, std::uint64_t seed);

}  // namespace mobiq
