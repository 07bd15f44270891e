#include "mobiq/mobility.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace mobiq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_speed(double speed) {
    if (!(speed >= 0.0) || !std::isfinite(speed))
        throw std::invalid_argument("speed must be nonnegative and finite");
}

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on the recurrence.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    return gl;
}

// Unit directions at angles 2pi(k + phase)/n, cached per (n, phase): the
// angle grids repeat across millions of kernel calls, so the trig cost is
// paid once per distinct grid.
const std::vector<Vec2>& unit_directions(int n, double phase) {
    struct Entry {
        int n;
        double phase;
        std::vector<Vec2> dirs;
    };
    thread_local std::deque<Entry> cache;  // stable references under growth
    for (const auto& e : cache) {
        if (e.n == n && e.phase == phase) return e.dirs;
    }
    Entry e;
    e.n = n;
    e.phase = phase;
    e.dirs.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double a = kTwoPi * (k + phase) / n;
        e.dirs[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
    }
    cache.push_back(std::move(e));
    return cache.back().dirs;
}

// Mean of f over the circle of radius rho around x, trapezoid with node
// doubling; exact node reuse keeps the cost linear in the final node count.
double angle_average(const std::function<double(const Vec2&)>& f, const Vec2& x, double rho,
                     const KernelOptions& opt) {
    if (rho == 0.0) return f(x);
    int n = opt.angle_nodes_init;
    double sum = 0.0;
    for (const Vec2& d : unit_directions(n, 0.0)) {
        sum += f({x.x + rho * d.x, x.y + rho * d.y});
    }
    double prev = sum / n;
    while (n < opt.angle_nodes_max) {
        double mid = 0.0;
        for (const Vec2& d : unit_directions(n, 0.5)) {
            mid += f({x.x + rho * d.x, x.y + rho * d.y});
        }
        sum += mid;
        n *= 2;
        const double cur = sum / n;
        if (std::fabs(cur - prev) <= opt.rel_tol * std::fabs(cur) + 1e-300) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

MobilityModel MobilityModel::random_direction(double speed) {
    check_speed(speed);
    MobilityModel m;
    m.kind = MotionKind::RandomDirection;
    m.speed = speed;
    return m;
}

MobilityModel MobilityModel::random_waypoint(double speed, double resample_interval) {
    check_speed(speed);
    if (!(resample_interval > 0.0) || !std::isfinite(resample_interval))
        throw std::invalid_argument("resample interval must be positive and finite");
    MobilityModel m;
    m.kind = MotionKind::RandomWaypoint;
    m.speed = speed;
    m.resample_interval = resample_interval;
    return m;
}

MobilityModel MobilityModel::brownian(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be nonnegative and finite");
    MobilityModel m;
    m.kind = MotionKind::Brownian;
    m.sigma = sigma;
    return m;
}

double calibrate_brownian(double speed, double dt) {
    check_speed(speed);
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    // E|N(0, sigma^2 I_2)| = sigma * sqrt(pi/2); match to speed * dt.
    return speed * dt * std::sqrt(2.0 / M_PI);
}

MobilityModel brownian_matching_speed(double speed, double dt) {
    return MobilityModel::brownian(calibrate_brownian(speed, dt) / std::sqrt(dt));
}

MotionState init_motion(const PointConfiguration& config, const MobilityModel& model, Rng& rng) {
    MotionState st;
    switch (model.kind) {
        case MotionKind::Static:
        case MotionKind::Brownian:
            break;
        case MotionKind::RandomDirection: {
            st.heading.resize(config.size());
            for (auto& h : st.heading) h = kTwoPi * rng.uniform();
            break;
        }
        case MotionKind::RandomWaypoint: {
            st.heading.resize(config.size());
            st.until_resample.assign(config.size(), model.resample_interval);
            for (auto& h : st.heading) h = kTwoPi * rng.uniform();
            break;
        }
    }
    st.direction.resize(st.heading.size());
    for (std::size_t i = 0; i < st.heading.size(); ++i) {
        st.direction[i] = {std::cos(st.heading[i]), std::sin(st.heading[i])};
    }
    return st;
}

void advance_in_place(std::vector<Vec2>& points, MotionState& state, const MobilityModel& model,
                      double dt, const Arena& arena, Rng& rng) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be nonnegative");
    if (dt == 0.0) return;
    if (state.direction.size() != state.heading.size()) {
        state.direction.resize(state.heading.size());
        for (std::size_t i = 0; i < state.heading.size(); ++i) {
            state.direction[i] = {std::cos(state.heading[i]), std::sin(state.heading[i])};
        }
    }
    const double side = arena.side;
    switch (model.kind) {
        case MotionKind::Static:
            return;
        case MotionKind::RandomDirection: {
            const double step = model.speed * dt;
            for (std::size_t i = 0; i < points.size(); ++i) {
                points[i].x = wrap_coordinate(points[i].x + step * state.direction[i].x, side);
                points[i].y = wrap_coordinate(points[i].y + step * state.direction[i].y, side);
            }
            return;
        }
        case MotionKind::Brownian: {
            const double step = model.sigma * std::sqrt(dt);
            for (auto& p : points) {
                p.x = wrap_coordinate(p.x + step * rng.normal(), side);
                p.y = wrap_coordinate(p.y + step * rng.normal(), side);
            }
            return;
        }
        case MotionKind::RandomWaypoint: {
            for (std::size_t i = 0; i < points.size(); ++i) {
                double remaining = dt;
                double x = points[i].x, y = points[i].y;
                while (remaining > 0.0) {
                    const double leg = remaining < state.until_resample[i]
                                           ? remaining
                                           : state.until_resample[i];
                    x += model.speed * leg * state.direction[i].x;
                    y += model.speed * leg * state.direction[i].y;
                    state.until_resample[i] -= leg;
                    remaining -= leg;
                    if (state.until_resample[i] <= 0.0) {
                        state.heading[i] = kTwoPi * rng.uniform();
                        state.direction[i] = {std::cos(state.heading[i]),
                                              std::sin(state.heading[i])};
                        state.until_resample[i] = model.resample_interval;
                    }
                }
                points[i].x = wrap_coordinate(x, side);
                points[i].y = wrap_coordinate(y, side);
            }
            return;
        }
    }
}

std::pair<PointConfiguration, MotionState> advance(const PointConfiguration& config,
                                                   const MotionState& state,
                                                   const MobilityModel& model, double dt,
                                                   Rng& rng) {
    std::vector<Vec2> pts = config.points();
    MotionState st = state;
    advance_in_place(pts, st, model, dt, config.arena(), rng);
    return {PointConfiguration(config.arena(), std::move(pts)), std::move(st)};
}

std::vector<double> rwp_displacement_sample(const MobilityModel& model, double horizon,
                                            int samples, std::uint64_t seed) {
    if (model.kind != MotionKind::RandomWaypoint)
        throw std::invalid_argument("displacement sample is only defined for RandomWaypoint");
    std::vector<double> radii(static_cast<std::size_t>(samples));
    for (int m = 0; m < samples; ++m) {
        Rng rng = derive_stream(seed, "rwp-kernel", static_cast<std::uint64_t>(m));
        double dx = 0.0, dy = 0.0;
        double remaining = horizon;
        double until = model.resample_interval;  // timers start synchronized
        double h = kTwoPi * rng.uniform();
        while (remaining > 0.0) {
            const double leg = remaining < until ? remaining : until;
            dx += model.speed * leg * std::cos(h);
            dy += model.speed * leg * std::sin(h);
            until -= leg;
            remaining -= leg;
            if (until <= 0.0) {
                h = kTwoPi * rng.uniform();
                until = model.resample_interval;
            }
        }
        radii[static_cast<std::size_t>(m)] = std::sqrt(dx * dx + dy * dy);
    }
    return radii;
}

KernelAverage kernel_average(const MobilityModel& model, double horizon, const Vec2& x,
                             const std::function<double(const Vec2&)>& f,
                             const KernelOptions& options) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be nonnegative and finite");
    switch (model.kind) {
        case MotionKind::Static:
            return {f(x), 0.0};
        case MotionKind::RandomDirection:
            return {angle_average(f, x, model.speed * horizon, options), 0.0};
        case MotionKind::Brownian: {
            const double sigma = model.sigma * std::sqrt(horizon);
            if (sigma == 0.0) return {f(x), 0.0};
            // Radius is Rayleigh(sigma); substitute u = 1 - exp(-rho^2/2sigma^2)
            // so the radial weight becomes uniform on (0, 1).
            static thread_local int cached_n = 0;
            static thread_local GaussLegendre cached;
            if (cached_n != options.radial_nodes) {
                cached = gauss_legendre(options.radial_nodes);
                cached_n = options.radial_nodes;
            }
            double acc = 0.0;
            for (int i = 0; i < options.radial_nodes; ++i) {
                const double u = 0.5 * (cached.nodes[i] + 1.0);
                const double rho = sigma * std::sqrt(-2.0 * std::log1p(-u));
                acc += 0.5 * cached.weights[i] * angle_average(f, x, rho, options);
            }
            return {acc, 0.0};
        }
        case MotionKind::RandomWaypoint: {
            const auto radii =
                rwp_displacement_sample(model, horizon, options.mc_samples, options.mc_seed);
            // Headings are isotropic, so average over the angle for each
            // sampled radius rather than over single sampled endpoints.
            double acc = 0.0, acc_first = 0.0;
            double sq = 0.0;
            const std::size_t n = radii.size();
            for (std::size_t m = 0; m < n; ++m) {
                const double v = angle_average(f, x, radii[m], options);
                acc += v;
                sq += v * v;
                if (m < n / 2) acc_first += v;
            }
            const double mean = acc / static_cast<double>(n);
            const double var = sq / static_cast<double>(n) - mean * mean;
            const double se_iid = std::sqrt(var > 0.0 ? var / static_cast<double>(n) : 0.0);
            const double half1 = acc_first / static_cast<double>(n / 2);
            const double half2 = (acc - acc_first) / static_cast<double>(n - n / 2);
            const double se_split = 0.5 * std::fabs(half1 - half2);
            return {mean, se_iid > se_split ? se_iid : se_split};
        }
    }
    return {f(x), 0.0};
}

}  // namespace mobiq
