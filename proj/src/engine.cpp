#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mobiq/config.hpp"
#include "mobiq/interference.hpp"
#include "mobiq/mobility.hpp"
#include "mobiq/queueing.hpp"
#include "mobiq/rng.hpp"

// Tick loops shared by the run entry points. Conventions that tests rely on:
//  - tick 0 evaluates the freshly sampled configuration and fades; every
//    later tick advances motion first, then redraws fades when a coherence
//    interval boundary is crossed, then evaluates;
//  - per tick, point fades are drawn in index order, then the signal fade;
//  - slot n spans ticks [n*tps, (n+1)*tps) and arrivals land at slot start,
//    so work arriving in a slot can be served within it.

namespace mobiq {

namespace {

std::int64_t coherence_ticks(const FadingModel& fading, double dt) {
    if (fading.coherence <= 0.0) return 1;
    const double ratio = fading.coherence / dt;
    const auto k = static_cast<std::int64_t>(std::llround(ratio));
    return k < 1 ? 1 : k;
}

std::int64_t warmup_slots(const ExperimentConfig& cfg) {
    return static_cast<std::int64_t>(static_cast<double>(cfg.horizon_slots) *
                                     cfg.warmup_fraction);
}

// Environment around a single receiver pinned at the origin.
struct SingleEnvironment {
    std::vector<Vec2> points;
    MotionState motion;
    std::vector<double> fades;
    double signal_fade = 1.0;
    std::int64_t k_coherence = 1;
    Rng rng_motion;
    Rng rng_fade;

    SingleEnvironment(const ExperimentConfig& cfg)
        : rng_motion(derive_stream(cfg.seed, "motion")), rng_fade(derive_stream(cfg.seed, "fade")) {
        Rng rng_ppp = derive_stream(cfg.seed, "ppp");
        PointConfiguration pc = sample_ppp(cfg.intensity, cfg.arena, rng_ppp);
        points = pc.points();
        motion = init_motion(pc, cfg.mobility, rng_motion);
        fades.resize(points.size());
        k_coherence = coherence_ticks(cfg.fading, cfg.tick);
        redraw_fades(cfg.fading);
    }

    void redraw_fades(const FadingModel& fading) {
        for (auto& f : fades) f = sample_fade(fading, rng_fade);
        signal_fade = sample_fade(fading, rng_fade);
    }

    // Brings the environment to the given tick; must be called with
    // consecutive tick indices starting at 0.
    void step_to(std::int64_t tick_index, const ExperimentConfig& cfg) {
        if (tick_index == 0) return;
        advance_in_place(points, motion, cfg.mobility, cfg.tick, cfg.arena, rng_motion);
        if (tick_index % k_coherence == 0) redraw_fades(cfg.fading);
    }

    double interference(const ExperimentConfig& cfg) const {
        return shot_noise_raw(points.data(), fades.data(), nullptr, points.size(), cfg.pathloss,
                              cfg.arena.side);
    }
};

double sinr_from(double signal, double interference, double noise) {
    const double den = interference + noise;
    if (den == 0.0) {
        if (signal == 0.0) {
            throw std::domain_error(
                "SINR undefined: zero signal over zero interference plus noise");
        }
        return std::numeric_limits<double>::infinity();
    }
    return signal / den;
}

}  // namespace

SingleQueueResult run_single_queue(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const std::int64_t tps = cfg.ticks_per_slot();
    const double dt = cfg.tick;
    const double rx_gain = cfg.pathloss(cfg.distance);

    SingleEnvironment env(cfg);
    Rng rng_arr = derive_stream(cfg.seed, "arrival");

    SingleQueueResult res;
    res.slot = cfg.slot;
    res.warmup_slots = warmup_slots(cfg);
    res.workload.reserve(static_cast<std::size_t>(cfg.horizon_slots) + 1);
    res.workload.push_back(0.0);
    if (cfg.record_traces) {
        res.arrivals.reserve(cfg.horizon_slots);
        res.services.reserve(cfg.horizon_slots);
    }

    const bool bernoulli = cfg.arrivals.kind == ArrivalKind::Bernoulli;
    const double p_arr = cfg.arrivals.rate * cfg.slot;

    double w = 0.0;
    std::int64_t arrived = 0;
    std::size_t next_departure = 0;  // index into res.packets
    std::int64_t tick_index = 0;

    for (std::int64_t n = 0; n < cfg.horizon_slots; ++n) {
        double a = 0.0;
        if (bernoulli) {
            if (rng_arr.uniform() < p_arr) {
                a = 1.0;
                ++arrived;
                res.packets.push_back({arrived, n, -1});
            }
        } else {
            a = p_arr;  // fluid arrival of rate * slot per slot
        }

        double rate_sum = 0.0;
        for (std::int64_t t = 0; t < tps; ++t, ++tick_index) {
            env.step_to(tick_index, cfg);
            const double s =
                sinr_from(rx_gain * env.signal_fade, env.interference(cfg), cfg.noise);
            rate_sum += service_rate(cfg.policy, s);
        }
        const double v = rate_sum * dt;

        w = lindley_step(w, a, v);
        if (bernoulli) {
            // Unit packets depart in FIFO order once the departed work
            // (arrived minus backlog) covers their index; the epsilon absorbs
            // roundoff in the workload recursion.
            const double departed = static_cast<double>(arrived) - w;
            while (next_departure < res.packets.size() &&
                   departed >= static_cast<double>(next_departure + 1) - 1e-9) {
                res.packets[next_departure].departure_slot = n;
                ++next_departure;
            }
        }
        res.workload.push_back(w);
        if (cfg.record_traces) {
            res.arrivals.push_back(a);
            res.services.push_back(v);
        }
    }
    res.censored = static_cast<std::int64_t>(res.packets.size() - next_departure);
    return res;
}

SeriesResult interference_series(const ExperimentConfig& cfg, std::int64_t ticks) {
    validate_config(cfg);
    if (ticks < 1) throw std::invalid_argument("tick count must be positive");
    const double rx_gain = cfg.pathloss(cfg.distance);

    SingleEnvironment env(cfg);
    SeriesResult res;
    res.dt = cfg.tick;
    res.interference.reserve(ticks);
    res.sinr.reserve(ticks);
    for (std::int64_t t = 0; t < ticks; ++t) {
        env.step_to(t, cfg);
        const double i0 = env.interference(cfg);
        res.interference.push_back(i0);
        res.sinr.push_back(sinr_from(rx_gain * env.signal_fade, i0, cfg.noise));
    }
    return res;
}

InteractingResult run_interacting(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const std::int64_t tps = cfg.ticks_per_slot();
    const double dt = cfg.tick;
    const double side = cfg.arena.side;
    const double rx_gain = cfg.pathloss(cfg.distance);

    Rng rng_ppp = derive_stream(cfg.seed, "ppp");
    Rng rng_motion = derive_stream(cfg.seed, "motion");
    Rng rng_fade = derive_stream(cfg.seed, "fade");
    Rng rng_arr = derive_stream(cfg.seed, "arrival");
    Rng rng_geom = derive_stream(cfg.seed, "receiver");

    // Queue 0 is the tagged pair: its receiver starts at the origin. All
    // other transmitters come from the interferer process. Every pair moves
    // rigidly: the receiver keeps a fixed offset of length `distance` in a
    // uniformly random direction from its transmitter.
    PointConfiguration pc = sample_ppp(cfg.intensity, cfg.arena, rng_ppp);
    const std::size_t m = pc.size() + 1;
    std::vector<Vec2> tx(m);
    std::vector<Vec2> offset(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double ang = 6.283185307179586476925286766559 * rng_geom.uniform();
        offset[j] = {cfg.distance * std::cos(ang), cfg.distance * std::sin(ang)};
    }
    tx[0] = {wrap_coordinate(-offset[0].x, side), wrap_coordinate(-offset[0].y, side)};
    for (std::size_t j = 1; j < m; ++j) tx[j] = pc[j - 1];

    PointConfiguration tx_pc(cfg.arena, tx);
    MotionState motion = init_motion(tx_pc, cfg.mobility, rng_motion);
    tx = tx_pc.points();

    // fade[i*m + j] carries transmitter i to receiver j; diagonal = own link.
    std::vector<double> fade(m * m);
    const std::int64_t k_coherence = coherence_ticks(cfg.fading, cfg.tick);
    auto redraw_fades = [&] {
        for (std::size_t j = 0; j < m; ++j) {
            fade[j * m + j] = sample_fade(cfg.fading, rng_fade);
            for (std::size_t i = 0; i < m; ++i) {
                if (i != j) fade[i * m + j] = sample_fade(cfg.fading, rng_fade);
            }
        }
    };
    redraw_fades();

    if (cfg.arrivals.kind != ArrivalKind::Bernoulli) {
        throw ConfigError({{0, "interacting mode requires Bernoulli arrivals"}});
    }
    const double p_arr = cfg.arrivals.rate * cfg.slot;

    InteractingResult res;
    res.n_queues = static_cast<std::int64_t>(m);
    res.warmup_slots = warmup_slots(cfg);
    res.mean_queue_length.reserve(cfg.horizon_slots);
    res.tagged_workload.reserve(cfg.horizon_slots);

    std::vector<double> w(m, 0.0);
    std::vector<double> a(m, 0.0);
    std::vector<double> rate_sum(m, 0.0);
    std::vector<std::uint8_t> active(m, 0);
    std::vector<Vec2> rx(m);
    std::vector<std::int64_t> arrived(m, 0);
    std::vector<std::vector<std::size_t>> pending(m);  // flat packet indices
    std::vector<std::size_t> pending_head(m, 0);
    std::int64_t tick_index = 0;

    for (std::int64_t n = 0; n < cfg.horizon_slots; ++n) {
        for (std::size_t j = 0; j < m; ++j) {
            a[j] = rng_arr.uniform() < p_arr ? 1.0 : 0.0;
            if (a[j] > 0.0) {
                ++arrived[j];
                pending[j].push_back(res.packets.size());
                res.packets.push_back({static_cast<std::int32_t>(j), {arrived[j], n, -1}});
            }
            active[j] = (w[j] + a[j] > 0.0) ? 1 : 0;
            rate_sum[j] = 0.0;
        }

        for (std::int64_t t = 0; t < tps; ++t, ++tick_index) {
            if (tick_index > 0) {
                advance_in_place(tx, motion, cfg.mobility, dt, cfg.arena, rng_motion);
                if (tick_index % k_coherence == 0) redraw_fades();
            }
            for (std::size_t j = 0; j < m; ++j) {
                if (!active[j]) continue;
                rx[j] = {wrap_coordinate(tx[j].x + offset[j].x, side),
                         wrap_coordinate(tx[j].y + offset[j].y, side)};
            }
            const double half = 0.5 * side;
            for (std::size_t j = 0; j < m; ++j) {
                if (!active[j]) continue;
                double sum = 0.0, comp = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == j || !active[i]) continue;
                    double dx = tx[i].x - rx[j].x;
                    double dy = tx[i].y - rx[j].y;
                    if (dx > half) dx -= side;
                    if (dx < -half) dx += side;
                    if (dy > half) dy -= side;
                    if (dy < -half) dy += side;
                    const double r = std::sqrt(dx * dx + dy * dy);
                    const double term = path_gain_fast(cfg.pathloss, r) * fade[i * m + j];
                    const double y = term - comp;
                    const double tt = sum + y;
                    comp = (tt - sum) - y;
                    sum = tt;
                }
                const double s = sinr_from(rx_gain * fade[j * m + j], sum, cfg.noise);
                rate_sum[j] += service_rate(cfg.policy, s);
            }
        }

        double total = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            w[j] = lindley_step(w[j], a[j], rate_sum[j] * dt);
            total += w[j];
            const double departed = static_cast<double>(arrived[j]) - w[j];
            while (pending_head[j] < pending[j].size()) {
                auto& rec = res.packets[pending[j][pending_head[j]]].record;
                if (departed < static_cast<double>(rec.id) - 1e-9) break;
                rec.departure_slot = n;
                ++pending_head[j];
            }
        }
        res.mean_queue_length.push_back(total / static_cast<double>(m));
        res.tagged_workload.push_back(w[0]);
    }
    for (std::size_t j = 0; j < m; ++j) {
        res.censored += static_cast<std::int64_t>(pending[j].size() - pending_head[j]);
    }
    return res;
}

}  // namespace mobiq
