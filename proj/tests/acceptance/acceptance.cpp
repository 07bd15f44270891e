// Acceptance checks: one group per command-line argument, one verdict line
// per criterion ("[accNN] PASS/FAIL - detail"). The exit code is the number
// of failed criteria. Long-horizon groups print their parameters up front so
// partial logs still identify the run.

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mobiq/analytics.hpp"
#include "mobiq/config.hpp"
#include "mobiq/estimators.hpp"
#include "mobiq/interference.hpp"
#include "mobiq/mobility.hpp"
#include "mobiq/queueing.hpp"
#include "mobiq/rng.hpp"

using namespace mobiq;

namespace {

// ---------------------------------------------------------------------------
// Reporting scaffolding.

struct Criterion {
    std::string id;
    bool pass = true;
    std::string detail;

    explicit Criterion(std::string name) : id(std::move(name)) {}

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [VIOLATED]");
    }

    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

void print(const Criterion& c) {
    std::cout << "[" << c.id << "] " << (c.pass ? "PASS" : "FAIL") << " - " << c.detail
              << std::endl;
}

// ---------------------------------------------------------------------------
// Shared numeric helpers.

std::span<const double> post_warmup(const SingleQueueResult& res) {
    return std::span<const double>(res.workload).subspan(
        static_cast<std::size_t>(res.warmup_slots));
}

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sd_of(std::span<const double> xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

// Baseline experiment block used throughout: 100x100 torus, intensity 0.1,
// link distance 0.3, bounded exponent-4 path loss, unit-mean Rayleigh fades
// redrawn every tick, truncated Shannon policy at threshold 8.
ExperimentConfig baseline() {
    ExperimentConfig c;
    c.warmup_fraction = 0.25;
    return c;
}

// Minimum-image path gains from the origin for a point set on the torus.
std::vector<double> origin_gains(const std::vector<Vec2>& pts, double side, const PathLoss& l) {
    const double half = 0.5 * side;
    std::vector<double> gains(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double dx = pts[i].x, dy = pts[i].y;
        if (dx > half) dx -= side;
        if (dy > half) dy -= side;
        gains[i] = path_gain_fast(l, std::sqrt(dx * dx + dy * dy));
    }
    return gains;
}

// E[ln(1 + SINR) | points] for Rayleigh fades with a common rate and zero
// noise. The signal-fade tail turns the conditional mean into
//   integral over t of prod_j 1 / (1 + (e^t - 1) g_j / l(R)) dt,
// a deterministic product-form integral (the common fade rate cancels), so
// no inner Monte Carlo is needed. Fixed Gauss panels resolve it to ~1e-9;
// the integrand is analytic and decays superpolynomially in t.
double conditional_mean_rate_nats(const std::vector<double>& gains, double rx_gain) {
    const auto tail = [&](double t) {
        const double theta = std::expm1(t);
        double logp = 0.0;
        for (double g : gains) {
            logp += std::log1p(theta * g / rx_gain);
            if (logp > 700.0) return 0.0;
        }
        return std::exp(-logp);
    };
    static const double edges[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0};
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < std::size(edges); ++i) {
        sum += boost::math::quadrature::gauss<double, 32>::integrate(tail, edges[i],
                                                                     edges[i + 1]);
    }
    return sum;
}

// One paired level-crossing sample: indicator of SINR > T at time 0 and at
// time lag under random-direction motion with fresh fades at both instants.
struct PairedSample {
    bool first = false;
    bool second = false;
};

PairedSample sample_crossing_pair(const ExperimentConfig& cfg, double threshold, double lag,
                                  Rng& rng) {
    auto points = sample_ppp(cfg.intensity, cfg.arena, rng);
    const double rx = cfg.pathloss(cfg.distance);
    std::vector<double> fades(points.size());
    for (auto& f : fades) f = rng.exponential(1.0);
    const double f0 = rng.exponential(1.0);
    const double i0 = shot_noise_raw(points.points().data(), fades.data(), nullptr,
                                     points.size(), cfg.pathloss, cfg.arena.side);

    MotionState st = init_motion(points, cfg.mobility, rng);
    auto moved = points.points();
    advance_in_place(moved, st, cfg.mobility, lag, cfg.arena, rng);
    for (auto& f : fades) f = rng.exponential(1.0);
    const double f1 = rng.exponential(1.0);
    const double i1 = shot_noise_raw(moved.data(), fades.data(), nullptr, moved.size(),
                                     cfg.pathloss, cfg.arena.side);

    PairedSample out;
    out.first = rx * f0 > threshold * (i0 + cfg.noise);
    out.second = rx * f1 > threshold * (i1 + cfg.noise);
    return out;
}

// ---------------------------------------------------------------------------
// acc01: motion keeps a sampled Poisson configuration Poisson (box-count
// chi-square against the constant intensity at the 1% level).

std::vector<Criterion> run_acc01() {
    Criterion c("acc01");
    const double intensity = 0.1;
    const Arena arena{100.0};
    const int grid = 10;
    const int steps = 1000;
    const double dt = 0.05;
    const boost::math::chi_squared chi2(grid * grid);
    const double q99 = boost::math::quantile(chi2, 0.99);

    std::uint64_t seed = 9101;
    for (double v : {1.0, 100.0}) {
        const MobilityModel models[] = {MobilityModel::random_direction(v),
                                        MobilityModel::random_waypoint(v, 1.0),
                                        brownian_matching_speed(v, dt)};
        const char* names[] = {"rd", "rwp", "bm"};
        for (int m = 0; m < 3; ++m) {
            Rng rng(seed++);
            auto config = sample_ppp(intensity, arena, rng);
            MotionState st = init_motion(config, models[m], rng);
            auto pts = config.points();
            for (int s = 0; s < steps; ++s) {
                advance_in_place(pts, st, models[m], dt, arena, rng);
            }
            const auto boxes = box_counts(PointConfiguration(arena, pts), grid);
            const double expected = intensity * (arena.side / grid) * (arena.side / grid);
            double stat = 0.0;
            for (auto b : boxes) {
                const double d = static_cast<double>(b) - expected;
                stat += d * d / expected;
            }
            c.require(stat < q99, std::string(names[m]) + " v=" + fmt(v) +
                                      " chi2=" + fmt(stat, 5) + " < " + fmt(q99, 5));
        }
    }
    return {c};
}

// ---------------------------------------------------------------------------
// acc02: empirical mean service rate under the baseline truncated-Shannon
// block equals the 1.37 reference within 0.05.

std::vector<Criterion> run_acc02() {
    Criterion c("acc02");
    ExperimentConfig cfg = baseline();
    cfg.seed = 9201;
    const auto est = mean_service_rate_empirical(cfg, 200000);
    c.note("E[s]=" + fmt(est.value) + " +- " + fmt(est.std_error, 3));
    c.require(std::abs(est.value - 1.37) <= 0.05,
              "|E[s] - 1.37| = " + fmt(std::abs(est.value - 1.37), 3) + " <= 0.05");
    return {c};
}

// ---------------------------------------------------------------------------
// acc03 / acc05 / acc06: one common-random-number velocity sweep of the
// baseline queue at arrival rate 1.2. Faster interferers drain the queue:
// mean workloads decrease, the fast run's stop-loss transform dominates, and
// the delay tail thins.

struct SweepRun {
    double velocity = 0.0;
    BatchMeans workload;
    double p99_delay = 0.0;
    std::vector<double> post;  // post-warmup workload (kept for stop-loss)
};

SweepRun run_velocity_point(double v, double tick, std::int64_t slots, std::uint64_t seed,
                            double arrival_rate, bool keep_series) {
    ExperimentConfig cfg = baseline();
    cfg.mobility = MobilityModel::random_direction(v);
    cfg.tick = tick;
    cfg.slot = 1e-3;
    cfg.horizon_slots = slots;
    cfg.seed = seed;
    cfg.arrivals.rate = arrival_rate;
    const auto res = run_single_queue(cfg);

    SweepRun out;
    out.velocity = v;
    const auto post = post_warmup(res);
    out.workload = batch_means(post, 30);
    std::vector<double> delays;
    for (const auto& p : res.packets) {
        if (p.departure_slot >= 0 && p.arrival_slot >= res.warmup_slots) {
            delays.push_back(static_cast<double>(p.departure_slot - p.arrival_slot));
        }
    }
    if (!delays.empty()) {
        out.p99_delay = EmpiricalCdf(std::move(delays)).quantile(0.99);
    }
    if (keep_series) out.post.assign(post.begin(), post.end());
    return out;
}

std::vector<Criterion> run_acc030506() {
    // Shared master seed: the initial configuration, headings, fades and the
    // arrival stream are common random numbers across velocities, which is
    // what makes the ordering statistics sharp at these horizons.
    const std::uint64_t seed = 9301;
    const double rate = 1.2;
    std::cout << "# acc03/05/06 sweep: v in {1,10,100,1000}, shared seed " << seed
              << std::endl;

    std::vector<SweepRun> runs;
    runs.push_back(run_velocity_point(1.0, 1e-3, 6000000, seed, rate, true));
    std::cout << "# v=1 done: mean workload " << fmt(runs.back().workload.mean) << std::endl;
    runs.push_back(run_velocity_point(10.0, 1e-3, 3000000, seed, rate, false));
    std::cout << "# v=10 done: mean workload " << fmt(runs.back().workload.mean) << std::endl;
    runs.push_back(run_velocity_point(100.0, 1e-4, 1000000, seed, rate, false));
    std::cout << "# v=100 done: mean workload " << fmt(runs.back().workload.mean) << std::endl;
    runs.push_back(run_velocity_point(1000.0, 1e-5, 100000, seed, rate, true));
    std::cout << "# v=1000 done: mean workload " << fmt(runs.back().workload.mean) << std::endl;

    Criterion c3("acc03");
    for (std::size_t i = 1; i < runs.size(); ++i) {
        c3.require(runs[i].workload.mean < runs[i - 1].workload.mean,
                   "E[W] v=" + fmt(runs[i - 1].velocity) + " (" + fmt(runs[i - 1].workload.mean) +
                       ") > v=" + fmt(runs[i].velocity) + " (" + fmt(runs[i].workload.mean) + ")");
    }
    c3.require(runs.front().workload.ci_lo > runs.back().workload.ci_hi,
               "CI(v=1).lo " + fmt(runs.front().workload.ci_lo) + " > CI(v=1000).hi " +
                   fmt(runs.back().workload.ci_hi));
    const double ratio = runs.front().workload.mean / runs.back().workload.mean;
    c3.require(ratio >= 5.0, "E[W] ratio v=1 / v=1000 = " + fmt(ratio, 4) + " >= 5");

    Criterion c5("acc05");
    const auto dom = stop_loss_dominance(runs.back().post, runs.front().post);
    int below = 0, above = 0, overlap = 0;
    for (auto v : dom.verdicts) {
        below += v == StopLossVerdict::Below;
        above += v == StopLossVerdict::Above;
        overlap += v == StopLossVerdict::Overlap;
    }
    c5.note("grid verdicts: below=" + std::to_string(below) + " tie=" +
            std::to_string(static_cast<int>(dom.verdicts.size()) - below - above - overlap) +
            " overlap=" + std::to_string(overlap) + " above=" + std::to_string(above));
    c5.require(dom.dominated, "stop-loss of the v=1000 run dominates the v=1 run");

    Criterion c6("acc06");
    c6.note("p99 delay slots: v=1 " + fmt(runs[0].p99_delay) + ", v=100 " +
            fmt(runs[2].p99_delay) + ", v=1000 " + fmt(runs[3].p99_delay));
    c6.require(runs[0].p99_delay > runs[2].p99_delay, "p99(v=1) > p99(v=100)");
    c6.require(runs[2].p99_delay > runs[3].p99_delay, "p99(v=100) > p99(v=1000)");
    return {c3, c5, c6};
}

// ---------------------------------------------------------------------------
// acc04: mobility-model ordering of mean workload, BM >= RWP >= RD, with CI
// separation at v=10. Arrival rate 1.0 keeps the Brownian queue's mixing time
// inside the horizon; the ordering statement is load-independent.

std::vector<Criterion> run_acc04() {
    Criterion c("acc04");
    const std::uint64_t seed = 9401;
    const double rate = 1.0;
    const double rwp_resample = 0.01;

    struct ModelRun {
        const char* name;
        BatchMeans bm;
    };

    const auto run_one = [&](const MobilityModel& model, double tick,
                             std::int64_t slots) -> BatchMeans {
        ExperimentConfig cfg = baseline();
        cfg.mobility = model;
        cfg.tick = tick;
        cfg.slot = 1e-3;
        cfg.horizon_slots = slots;
        cfg.seed = seed;
        cfg.arrivals.rate = rate;
        const auto res = run_single_queue(cfg);
        return batch_means(post_warmup(res), 30);
    };

    std::cout << "# acc04: lambda=1.0, RWP resample interval " << rwp_resample << std::endl;
    std::vector<ModelRun> at10;
    at10.push_back({"rd", run_one(MobilityModel::random_direction(10.0), 1e-3, 3000000)});
    std::cout << "# v=10 rd done: " << fmt(at10.back().bm.mean) << std::endl;
    at10.push_back({"rwp", run_one(MobilityModel::random_waypoint(10.0, rwp_resample), 1e-3,
                                   6000000)});
    std::cout << "# v=10 rwp done: " << fmt(at10.back().bm.mean) << std::endl;
    at10.push_back({"bm", run_one(brownian_matching_speed(10.0, 1e-3), 1e-3, 7000000)});
    std::cout << "# v=10 bm done: " << fmt(at10.back().bm.mean) << std::endl;

    c.note("v=10 means: bm " + fmt(at10[2].bm.mean) + ", rwp " + fmt(at10[1].bm.mean) +
           ", rd " + fmt(at10[0].bm.mean));
    c.require(at10[2].bm.mean >= at10[1].bm.mean && at10[1].bm.mean >= at10[0].bm.mean,
              "v=10 ordering bm >= rwp >= rd");
    c.require(at10[2].bm.ci_lo > at10[1].bm.ci_hi,
              "v=10 CI separation: bm.lo " + fmt(at10[2].bm.ci_lo) + " > rwp.hi " +
                  fmt(at10[1].bm.ci_hi));
    c.require(at10[1].bm.ci_lo > at10[0].bm.ci_hi,
              "v=10 CI separation: rwp.lo " + fmt(at10[1].bm.ci_lo) + " > rd.hi " +
                  fmt(at10[0].bm.ci_hi));

    std::vector<ModelRun> at100;
    at100.push_back({"rd", run_one(MobilityModel::random_direction(100.0), 1e-4, 200000)});
    at100.push_back(
        {"rwp", run_one(MobilityModel::random_waypoint(100.0, rwp_resample), 1e-4, 200000)});
    at100.push_back({"bm", run_one(brownian_matching_speed(100.0, 1e-4), 1e-4, 200000)});
    std::cout << "# v=100 done" << std::endl;
    c.note("v=100 means: bm " + fmt(at100[2].bm.mean) + ", rwp " + fmt(at100[1].bm.mean) +
           ", rd " + fmt(at100[0].bm.mean));
    c.require(at100[2].bm.mean >= at100[1].bm.mean && at100[1].bm.mean >= at100[0].bm.mean,
              "v=100 ordering bm >= rwp >= rd");
    return {c};
}

// ---------------------------------------------------------------------------
// acc07a: the closed-form static-instability probability against the nested
// conditional-rate oracle over fresh planar configurations. The conditional
// mean rate per configuration is evaluated exactly (product-form tail
// integral), so the only randomness is the 10^4 configuration draws. The
// closed form evaluates the single-draw tail, which is a different
// distribution, so this criterion documents the mismatch rather than hiding
// it; the single-draw Monte Carlo alongside shows the formula itself is
// implemented correctly.

std::vector<Criterion> run_acc07a() {
    Criterion c("acc07a");
    const double lambda_nats = 1.2;
    SystemParams params;
    params.arrival_rate = lambda_nats;
    params.slot = 1.0;
    const double analytic = prob_unstable_static(params);

    ExperimentConfig cfg = baseline();
    const double rx = cfg.pathloss(cfg.distance);

    const int n_configs = 10000;
    Rng rng(9701);
    int unstable = 0;
    for (int i = 0; i < n_configs; ++i) {
        const auto points = sample_ppp(cfg.intensity, cfg.arena, rng);
        const auto gains = origin_gains(points.points(), cfg.arena.side, cfg.pathloss);
        if (conditional_mean_rate_nats(gains, rx) < lambda_nats) ++unstable;
    }
    const double p_hat = static_cast<double>(unstable) / n_configs;
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / n_configs);

    // Single-draw tail: P[ln(1 + SINR) < lambda] with one fade draw per
    // configuration; this is the quantity the closed form integrates.
    const int n_single = 200000;
    int below = 0;
    const double level = std::expm1(lambda_nats);
    for (int i = 0; i < n_single; ++i) {
        const auto points = sample_ppp(cfg.intensity, cfg.arena, rng);
        std::vector<double> fades(points.size());
        for (auto& f : fades) f = rng.exponential(1.0);
        const double i0 = shot_noise_raw(points.points().data(), fades.data(), nullptr,
                                         points.size(), cfg.pathloss, cfg.arena.side);
        const double f0 = rng.exponential(1.0);
        if (rx * f0 <= level * i0) ++below;
    }
    const double q_hat = static_cast<double>(below) / n_single;
    const double q_se = std::sqrt(q_hat * (1.0 - q_hat) / n_single);

    c.note("analytic=" + fmt(analytic) + ", nested conditional-rate oracle=" + fmt(p_hat) +
           " +- " + fmt(se, 3) + " (z=" + fmt((analytic - p_hat) / se, 4) + ")");
    c.note("single-draw tail MC=" + fmt(q_hat) + " +- " + fmt(q_se, 3) +
           " (z=" + fmt((analytic - q_hat) / q_se, 3) +
           "): the closed form evaluates this single-draw tail, not the conditional-rate tail");
    c.require(std::abs(analytic - p_hat) <= 3.0 * se,
              "|analytic - nested oracle| <= 3 sigma");
    return {c};
}

// ---------------------------------------------------------------------------
// acc07b: on a configuration whose conditional rate sits below the arrival
// rate, the workload grows linearly at rate lambda - E[s | points].

std::vector<Criterion> run_acc07b() {
    Criterion c("acc07b");
    const double lambda = 1.2;  // packets per unit time, service in log2 units
    ExperimentConfig cfg = baseline();
    cfg.mobility = MobilityModel::statics();
    cfg.policy = {PolicyKind::Shannon, 0.0};
    cfg.arrivals = {ArrivalKind::DeterministicRate, lambda};
    cfg.warmup_fraction = 0.0;
    const double rx = cfg.pathloss(cfg.distance);

    // Scan seeds for a clustered configuration: conditional rate below 0.9x
    // the arrival rate so the drift dominates diffusion over the horizon.
    std::uint64_t chosen = 0;
    double cond_rate = 0.0;
    for (std::uint64_t seed = 9750; seed < 9850; ++seed) {
        Rng rng_ppp = derive_stream(seed, "ppp");
        const auto points = sample_ppp(cfg.intensity, cfg.arena, rng_ppp);
        const auto gains = origin_gains(points.points(), cfg.arena.side, cfg.pathloss);
        const double rate = conditional_mean_rate_nats(gains, rx) / std::log(2.0);
        if (rate < 0.9 * lambda) {
            chosen = seed;
            cond_rate = rate;
            break;
        }
    }
    if (chosen == 0) {
        c.require(false, "no clustered configuration found in 100 seeds");
        return {c};
    }

    cfg.seed = chosen;
    cfg.horizon_slots = 200000;  // 200 time units at slot 1e-3
    const auto res = run_single_queue(cfg);

    // Least-squares slope of W against time; drift swamps the fluctuations.
    const std::size_t n = res.workload.size();
    double sxx = 0.0, sxy = 0.0;
    const double tmid = 0.5 * static_cast<double>(n - 1) * cfg.slot;
    double wmean = 0.0;
    for (std::size_t i = 0; i < n; ++i) wmean += res.workload[i];
    wmean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) * cfg.slot - tmid;
        sxx += dx * dx;
        sxy += dx * (res.workload[i] - wmean);
    }
    const double slope = sxy / sxx;
    const double predicted = lambda - cond_rate;

    c.note("seed " + std::to_string(chosen) + ": conditional rate " + fmt(cond_rate) +
           ", arrival rate " + fmt(lambda));
    c.note("workload slope " + fmt(slope) + " vs predicted drift " + fmt(predicted));
    c.require(std::abs(slope - predicted) <= 0.10 * predicted,
              "slope within 10% of the predicted drift");
    return {c};
}

// ---------------------------------------------------------------------------
// acc08: stability dichotomy at v=100. Below the mean service rate the
// workload settles into a stationary band; above it the workload grows at
// the rate gap.

std::vector<Criterion> run_acc08() {
    Criterion c("acc08");
    ExperimentConfig probe = baseline();
    probe.seed = 9801;
    const double es = mean_service_rate_empirical(probe, 200000).value;
    c.note("E[s] = " + fmt(es));

    ExperimentConfig cfg = baseline();
    cfg.mobility = MobilityModel::random_direction(100.0);
    cfg.tick = 1e-4;
    cfg.slot = 1e-3;
    cfg.seed = 9802;
    // Fluid arrivals isolate the rate comparison from Bernoulli arrival
    // noise, which at these horizons would dominate the slope estimate.
    cfg.arrivals = {ArrivalKind::DeterministicRate, 0.8 * es};
    cfg.horizon_slots = 400000;
    const auto stable = run_single_queue(cfg);
    const auto post = post_warmup(stable);
    const auto bm = batch_means(post, 30);
    const auto half_a = batch_means(post.first(post.size() / 2), 30);
    const auto half_b = batch_means(post.last(post.size() / 2), 30);
    c.note("stable run mean " + fmt(bm.mean) + " CI [" + fmt(bm.ci_lo) + ", " + fmt(bm.ci_hi) +
           "], halves " + fmt(half_a.mean) + " / " + fmt(half_b.mean));
    c.require(bm.ci_hi - bm.ci_lo < bm.mean,
              "stable: CI width below the mean (bounded workload band)");
    c.require(std::abs(half_b.mean - half_a.mean) <
                  0.25 * bm.mean + 3.0 * (half_a.std_error + half_b.std_error),
              "stable: no drift between run halves");

    cfg.arrivals.rate = 1.2 * es;
    cfg.horizon_slots = 100000;
    cfg.warmup_fraction = 0.0;
    cfg.seed = 9803;
    const auto growing = run_single_queue(cfg);
    const std::size_t n = growing.workload.size();
    double sxx = 0.0, sxy = 0.0, wmean = 0.0;
    const double tmid = 0.5 * static_cast<double>(n - 1) * cfg.slot;
    for (double w : growing.workload) wmean += w;
    wmean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) * cfg.slot - tmid;
        sxx += dx * dx;
        sxy += dx * (growing.workload[i] - wmean);
    }
    const double slope = sxy / sxx;
    const double predicted = 1.2 * es - es;
    c.note("overload slope " + fmt(slope) + " vs predicted " + fmt(predicted));
    c.require(std::abs(slope - predicted) <= 0.10 * predicted,
              "overload: slope within 10% of the rate gap");
    return {c};
}

// ---------------------------------------------------------------------------
// acc09: joint level-crossing probability against paired-snapshot frequencies
// for random-direction motion, plus the conditional-gain grid properties.

std::vector<Criterion> run_acc09() {
    Criterion c("acc09");
    ExperimentConfig cfg = baseline();
    const SystemParams params = system_params(cfg);
    const double threshold = 8.0;
    const double lag = 1.0;
    const double single = prob_level_crossing(params);

    Rng rng(9901);
    for (double v : {1.0, 10.0, 100.0}) {
        cfg.mobility = MobilityModel::random_direction(v);
        const double analytic = joint_level_crossing(params, cfg.mobility, lag);
        const int n = 30000;
        int joint = 0;
        for (int i = 0; i < n; ++i) {
            const auto s = sample_crossing_pair(cfg, threshold, lag, rng);
            joint += s.first && s.second;
        }
        const double p_hat = static_cast<double>(joint) / n;
        const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
        const double z = (analytic - p_hat) / se;
        c.require(std::abs(z) <= 3.0, "v=" + fmt(v) + ": joint " + fmt(analytic) + " vs MC " +
                                          fmt(p_hat) + " +- " + fmt(se, 3) + " (z=" +
                                          fmt(z, 3) + ")");
    }

    double prev_gain = std::numeric_limits<double>::infinity();
    bool gain_above_one = true, gain_monotone = true, identity_ok = true;
    for (double v : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0}) {
        const auto model = MobilityModel::random_direction(v);
        const double gain = conditional_gain(params, model, lag);
        const double joint = joint_level_crossing(params, model, lag);
        gain_above_one = gain_above_one && gain >= 1.0 - 1e-9;
        gain_monotone = gain_monotone && gain <= prev_gain + 1e-9;
        identity_ok =
            identity_ok && std::abs(joint - gain * single * single) <= 1e-6 * single * single;
        prev_gain = gain;
    }
    c.require(gain_above_one, "conditional gain >= 1 across the velocity grid");
    c.require(gain_monotone, "conditional gain nonincreasing toward 1 as v grows");
    c.require(identity_ok, "joint = gain * P^2 within quadrature tolerance on the grid");
    return {c};
}

// ---------------------------------------------------------------------------
// acc10: interference autocorrelation across one time unit against the
// analytic correlation coefficient, deterministic unit fades.

std::vector<Criterion> run_acc10() {
    Criterion c("acc10");
    const double lag_time = 1.0;
    const PathLoss l = PathLoss::bounded(4.0);

    double prev_analytic = std::numeric_limits<double>::infinity();
    for (double v : {1.0, 10.0}) {
        ExperimentConfig cfg = baseline();
        cfg.fading = {FadeKind::Deterministic, 1.0, 0.0};
        cfg.mobility = MobilityModel::random_direction(v);
        cfg.tick = 0.05;
        cfg.slot = 0.05;
        cfg.seed = 10001 + static_cast<std::uint64_t>(v);
        const int lag_ticks = static_cast<int>(lag_time / cfg.tick);

        const double analytic = corr_coefficient(cfg.mobility, lag_time, l, 1.0);
        const auto series = interference_series(cfg, 400000);

        // Per-segment lag estimates give a correlation-robust standard error.
        const int segments = 20;
        const std::size_t seg_len = series.interference.size() / segments;
        std::vector<double> seg_rho(segments);
        for (int s = 0; s < segments; ++s) {
            const std::span<const double> seg(series.interference.data() + s * seg_len,
                                              seg_len);
            seg_rho[static_cast<std::size_t>(s)] = autocorrelation(seg, lag_ticks).back();
        }
        const double m = mean_of(seg_rho);
        const double se = sd_of(seg_rho) / std::sqrt(static_cast<double>(segments));
        const double z = (analytic - m) / se;
        c.require(std::abs(z) <= 3.0, "v=" + fmt(v) + ": corr " + fmt(analytic) + " vs MC " +
                                          fmt(m) + " +- " + fmt(se, 3) + " (z=" + fmt(z, 3) +
                                          ")");
        c.require(analytic < prev_analytic, "corr decreasing in v");
        prev_analytic = analytic;
    }

    // Zero displacement: correlation is exactly 1 / E[h^2].
    const double stat_det = corr_coefficient(MobilityModel::statics(), lag_time, l, 1.0);
    const double stat_ray = corr_coefficient(MobilityModel::statics(), lag_time, l, 2.0);
    c.require(stat_det == 1.0, "static correlation = 1 for unit fades");
    c.require(std::abs(stat_ray - 0.5) < 1e-12, "static correlation = 1/E[h^2] for Rayleigh");
    return {c};
}

// ---------------------------------------------------------------------------
// acc11: heavy-traffic workload approximation against simulation at rho 0.97
// under indicator service and unit slots.

std::vector<Criterion> run_acc11() {
    Criterion c("acc11");
    SystemParams params;
    params.slot = 1.0;
    const double single = prob_level_crossing(params);
    params.arrival_rate = 0.97 * single;
    std::cout << "# acc11: arrival probability " << fmt(params.arrival_rate) << std::endl;

    for (double v : {100.0, 500.0, 1000.0}) {
        const auto model = MobilityModel::random_direction(v);
        const auto ht = heavy_traffic_workload(params, model);

        ExperimentConfig cfg = baseline();
        cfg.mobility = model;
        cfg.policy = {PolicyKind::Indicator, 8.0};
        cfg.arrivals = {ArrivalKind::Bernoulli, params.arrival_rate};
        cfg.tick = 0.05;
        cfg.slot = 1.0;
        cfg.horizon_slots = 400000;
        cfg.seed = 11001 + static_cast<std::uint64_t>(v);
        const auto res = run_single_queue(cfg);
        const auto bm = batch_means(post_warmup(res), 30);
        std::cout << "# v=" << fmt(v) << ": analytic " << fmt(ht.workload) << ", simulated "
                  << fmt(bm.mean) << " CI [" << fmt(bm.ci_lo) << ", " << fmt(bm.ci_hi) << "]"
                  << std::endl;

        const double rel = std::abs(ht.workload - bm.mean) / bm.mean;
        c.require(rel <= 0.20, "v=" + fmt(v) + ": analytic " + fmt(ht.workload) +
                                   " within 20% of simulated " + fmt(bm.mean) +
                                   " (rel err " + fmt(rel, 3) + ")");
        if (v >= 500.0) {
            const double widen = 0.05 * bm.mean;
            c.require(ht.workload >= bm.ci_lo - widen && ht.workload <= bm.ci_hi + widen,
                      "v=" + fmt(v) + ": analytic inside the widened CI [" +
                          fmt(bm.ci_lo - widen) + ", " + fmt(bm.ci_hi + widen) + "]");
        }
    }
    return {c};
}

// ---------------------------------------------------------------------------
// acc12: analytic joint level-crossing ordering across mobility models.
// Brownian displacement keeps the most mass near zero, the multi-leg
// random-waypoint kernel less, the rigid random-direction circle least.

std::vector<Criterion> run_acc12() {
    Criterion c("acc12");
    SystemParams params;
    const double lag = 1.0;
    const double tick = 1e-3;
    const double rwp_resample = 0.01;
    const double single = prob_level_crossing(params);

    for (double v : {1.0, 10.0, 100.0, 1000.0}) {
        const double j_rd =
            joint_level_crossing(params, MobilityModel::random_direction(v), lag);
        const double j_rwp = joint_level_crossing(
            params, MobilityModel::random_waypoint(v, rwp_resample), lag);
        const double j_bm =
            joint_level_crossing(params, brownian_matching_speed(v, tick), lag);
        const double floor = single * single * (1.0 - 1e-9);
        const double margin = 5e-4;
        c.require(j_bm >= floor && j_rwp >= floor && j_rd >= floor,
                  "v=" + fmt(v) + ": joints above P^2");
        c.require(j_bm >= j_rwp * (1.0 - margin) && j_rwp >= j_rd * (1.0 - margin),
                  "v=" + fmt(v) + ": bm " + fmt(j_bm) + " >= rwp " + fmt(j_rwp) + " >= rd " +
                      fmt(j_rd));
    }
    return {c};
}

// ---------------------------------------------------------------------------
// acc13: interacting queues, mean queue length nonincreasing in velocity with
// CI separation between the grid endpoints.

std::vector<Criterion> run_acc13() {
    Criterion c("acc13");
    std::cout << "# acc13: interacting field, v in {1,10,100,1000}" << std::endl;

    std::vector<double> means;
    std::vector<BatchMeans> cis;
    for (double v : {1.0, 10.0, 100.0, 1000.0}) {
        ExperimentConfig cfg;
        cfg.arena = Arena{70.0};
        cfg.intensity = 0.01;
        cfg.noise = 0.1;
        cfg.mobility = MobilityModel::random_direction(v);
        cfg.policy = {PolicyKind::Indicator, 8.0};
        cfg.arrivals = {ArrivalKind::Bernoulli, 0.08};
        cfg.tick = 0.1;
        cfg.slot = 1.0;
        cfg.mode = RunMode::Interacting;
        cfg.horizon_slots = 20000;
        cfg.warmup_fraction = 0.25;
        cfg.seed = 9131;  // common random numbers across velocities
        const auto res = run_interacting(cfg);
        const std::span<const double> post(
            res.mean_queue_length.data() + res.warmup_slots,
            res.mean_queue_length.size() - static_cast<std::size_t>(res.warmup_slots));
        cis.push_back(batch_means(post, 30));
        means.push_back(cis.back().mean);
        std::cout << "# v=" << fmt(v) << ": queues " << res.n_queues << ", mean queue length "
                  << fmt(means.back()) << std::endl;
    }
    for (std::size_t i = 1; i < means.size(); ++i) {
        c.require(means[i] <= means[i - 1] * (1.0 + 1e-9),
                  "mean queue length nonincreasing: " + fmt(means[i - 1]) + " -> " +
                      fmt(means[i]));
    }
    c.require(cis.front().ci_lo > cis.back().ci_hi,
              "endpoint CI separation: v=1 lo " + fmt(cis.front().ci_lo) + " > v=1000 hi " +
                  fmt(cis.back().ci_hi));
    return {c};
}

// ---------------------------------------------------------------------------
// acc14: oracle equivalences. Exact trajectory replay, then every analytic
// quantity against a Monte Carlo oracle on at least 3 parameter points.

struct TailOracle {
    double p_hat = 0.0;
    double se = 0.0;
};

// P[SINR > level] with one fade draw per fresh configuration.
TailOracle crossing_mc(const SystemParams& params, double level, int n, Rng& rng) {
    const Arena arena{100.0};
    const double rx = params.pathloss(params.distance);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const auto points = sample_ppp(params.intensity, arena, rng);
        std::vector<double> fades(points.size());
        for (auto& f : fades) f = rng.exponential(1.0 / params.interferer_fading.mu);
        const double i0 = shot_noise_raw(points.points().data(), fades.data(), nullptr,
                                         points.size(), params.pathloss, arena.side);
        const double f0 = rng.exponential(1.0 / params.mu);
        if (rx * f0 > level * (i0 + params.noise)) ++hits;
    }
    TailOracle out;
    out.p_hat = static_cast<double>(hits) / n;
    out.se = std::sqrt(out.p_hat * (1.0 - out.p_hat) / n);
    return out;
}

std::vector<Criterion> run_acc14() {
    Criterion c("acc14");

    // (a) Trajectory replay: the recorded arrival/service traces reproduce
    // the workload path exactly through the one-step recursion.
    {
        ExperimentConfig cfg = baseline();
        cfg.horizon_slots = 10000;
        cfg.record_traces = true;
        cfg.seed = 9141;
        const auto res = run_single_queue(cfg);
        bool exact = res.workload.size() == 10001 && res.workload[0] == 0.0;
        double w = 0.0;
        for (std::size_t n = 0; n < res.arrivals.size() && exact; ++n) {
            w = lindley_step(w, res.arrivals[n], res.services[n]);
            exact = res.workload[n + 1] == w;
        }
        c.require(exact, "replayed trajectory equals the recorded one at every slot");
    }

    Rng rng(9142);

    // (b1) Level-crossing probability on 3 parameter points.
    {
        SystemParams pts[3];
        pts[1].intensity = 0.05;
        pts[1].distance = 0.5;
        pts[1].threshold = 4.0;
        pts[2].noise = 0.1;
        for (const auto& p : pts) {
            const double analytic = prob_level_crossing(p);
            const auto mc = crossing_mc(p, p.threshold, 200000, rng);
            const double z = (analytic - mc.p_hat) / mc.se;
            c.require(std::abs(z) <= 3.0,
                      "P(crossing) " + fmt(analytic) + " vs MC " + fmt(mc.p_hat) + " (z=" +
                          fmt(z, 3) + ")");
        }
    }

    // (b2) Static instability tail on 3 parameter points (the closed form's
    // own estimand: single-draw rate tail).
    {
        struct Point {
            double lambda, noise;
        } points[3] = {{1.2, 0.0}, {1.2, 0.1}, {0.9, 0.0}};
        for (const auto& pt : points) {
            SystemParams p;
            p.arrival_rate = pt.lambda;
            p.slot = 1.0;
            p.noise = pt.noise;
            const double analytic = prob_unstable_static(p);
            const auto mc = crossing_mc(p, std::expm1(pt.lambda), 200000, rng);
            const double q_hat = 1.0 - mc.p_hat;
            const double z = (analytic - q_hat) / mc.se;
            c.require(std::abs(z) <= 3.0, "P(unstable) " + fmt(analytic) + " vs MC " +
                                              fmt(q_hat) + " (z=" + fmt(z, 3) + ")");
        }
    }

    // (b3) Mean Shannon rate under a pure power-law gain on 3 points.
    {
        struct Point {
            double intensity, distance, beta;
        } points[3] = {{0.1, 0.3, 4.0}, {0.05, 0.5, 4.0}, {0.2, 0.3, 3.0}};
        const Arena arena{100.0};
        for (const auto& pt : points) {
            const double analytic =
                mean_service_rate_shannon(pt.intensity, pt.distance, pt.beta);
            const PathLoss l = PathLoss::power_law(1.0, pt.beta, 1e-6);
            const double rx = std::pow(pt.distance, -pt.beta);
            const int n = 30000;
            std::vector<double> vals(n);
            for (auto& val : vals) {
                const auto pc = sample_ppp(pt.intensity, arena, rng);
                std::vector<double> fades(pc.size());
                for (auto& f : fades) f = rng.exponential(1.0);
                const double i0 = shot_noise_raw(pc.points().data(), fades.data(), nullptr,
                                                 pc.size(), l, arena.side);
                val = std::log1p(rx * rng.exponential(1.0) / i0);
            }
            const auto check = compare_to_oracle(analytic, vals);
            c.require(check.within(3.0), "E[s] power law " + fmt(analytic) + " vs MC " +
                                             fmt(check.mc_mean) + " (z=" + fmt(check.z, 3) +
                                             ")");
        }
    }

    // (b4) Joint crossing and conditional gain on 3 velocities, sharing one
    // paired sample per velocity; the gain uses the multinomial delta method.
    {
        ExperimentConfig cfg = baseline();
        const SystemParams params = system_params(cfg);
        for (double v : {1.0, 10.0, 100.0}) {
            cfg.mobility = MobilityModel::random_direction(v);
            const double joint_analytic = joint_level_crossing(params, cfg.mobility, 1.0);
            const double gain_analytic = conditional_gain(params, cfg.mobility, 1.0);
            const int n = 10000;
            int n11 = 0, n10 = 0, n01 = 0;
            for (int i = 0; i < n; ++i) {
                const auto s = sample_crossing_pair(cfg, params.threshold, 1.0, rng);
                n11 += s.first && s.second;
                n10 += s.first && !s.second;
                n01 += !s.first && s.second;
            }
            const double p11 = double(n11) / n, p10 = double(n10) / n, p01 = double(n01) / n;
            const double se_j = std::sqrt(p11 * (1.0 - p11) / n);
            const double zj = (joint_analytic - p11) / se_j;
            c.require(std::abs(zj) <= 3.0, "joint v=" + fmt(v) + " " + fmt(joint_analytic) +
                                               " vs MC " + fmt(p11) + " (z=" + fmt(zj, 3) +
                                               ")");

            const double pa = p11 + p10, pb = p11 + p01;
            const double g_mc = p11 / (pa * pb);
            // Delta method for ln g over the multinomial cell proportions.
            const double d11 = 1.0 / p11 - 1.0 / pa - 1.0 / pb;
            const double d10 = -1.0 / pa, d01 = -1.0 / pb;
            const double grad[3] = {d11, d10, d01};
            const double props[3] = {p11, p10, p01};
            double var = 0.0;
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    const double cov =
                        (a == b ? props[a] * (1.0 - props[a]) : -props[a] * props[b]) / n;
                    var += grad[a] * grad[b] * cov;
                }
            }
            const double se_g = g_mc * std::sqrt(var);
            const double zg = (gain_analytic - g_mc) / se_g;
            c.require(std::abs(zg) <= 3.0, "gain v=" + fmt(v) + " " + fmt(gain_analytic) +
                                               " vs MC " + fmt(g_mc) + " (z=" + fmt(zg, 3) +
                                               ")");
        }
    }

    // (b5) Interference correlation on 3 points via series autocorrelation
    // with segment-based standard errors (deterministic fades).
    {
        const PathLoss l = PathLoss::bounded(4.0);
        for (double v : {1.0, 2.0, 10.0}) {
            ExperimentConfig cfg = baseline();
            cfg.fading = {FadeKind::Deterministic, 1.0, 0.0};
            cfg.mobility = MobilityModel::random_direction(v);
            cfg.tick = 0.05;
            cfg.slot = 0.05;
            cfg.seed = 14001 + static_cast<std::uint64_t>(v);
            const double analytic = corr_coefficient(cfg.mobility, 1.0, l, 1.0);
            const auto series = interference_series(cfg, 200000);
            const int segments = 20;
            const std::size_t seg_len = series.interference.size() / segments;
            std::vector<double> seg_rho(segments);
            for (int s = 0; s < segments; ++s) {
                const std::span<const double> seg(series.interference.data() + s * seg_len,
                                                  seg_len);
                seg_rho[static_cast<std::size_t>(s)] = autocorrelation(seg, 20).back();
            }
            const double m = mean_of(seg_rho);
            const double se = sd_of(seg_rho) / std::sqrt(20.0);
            const double z = (analytic - m) / se;
            c.require(std::abs(z) <= 3.0, "corr v=" + fmt(v) + " " + fmt(analytic) +
                                              " vs MC " + fmt(m) + " (z=" + fmt(z, 3) + ")");
        }
    }

    // (b6) Service covariance on 3 points from indicator tick series folded
    // into unit slots; batch means give the standard error.
    {
        SystemParams params;
        params.slot = 1.0;
        struct Point {
            double v;
            int lag;
        } points[3] = {{100.0, 1}, {100.0, 2}, {200.0, 1}};
        for (const auto& pt : points) {
            const auto model = MobilityModel::random_direction(pt.v);
            const double analytic = cov_service(params, model, pt.lag);

            ExperimentConfig cfg = baseline();
            cfg.mobility = model;
            cfg.policy = {PolicyKind::Indicator, 8.0};
            cfg.tick = 0.05;
            cfg.slot = 1.0;
            cfg.seed = 14101 + static_cast<std::uint64_t>(pt.v) + pt.lag;
            const std::int64_t slots = 200000;
            const auto series = interference_series(cfg, slots * 20);
            std::vector<double> v_slot(slots);
            const double rx = cfg.pathloss(cfg.distance);
            for (std::int64_t s = 0; s < slots; ++s) {
                double sum = 0.0;
                for (int t = 0; t < 20; ++t) {
                    sum += series.sinr[static_cast<std::size_t>(s * 20 + t)] > 8.0 ? 1.0 : 0.0;
                }
                v_slot[static_cast<std::size_t>(s)] = sum * cfg.tick;
            }
            const double vm = mean_of(v_slot);
            std::vector<double> prod(v_slot.size() - static_cast<std::size_t>(pt.lag));
            for (std::size_t i = 0; i < prod.size(); ++i) {
                prod[i] = (v_slot[i] - vm) * (v_slot[i + static_cast<std::size_t>(pt.lag)] - vm);
            }
            const auto bm = batch_means(prod, 20);
            const double z = (analytic - bm.mean) / bm.std_error;
            c.require(std::abs(z) <= 3.0, "cov v=" + fmt(pt.v) + " lag=" +
                                              std::to_string(pt.lag) + " " + fmt(analytic) +
                                              " vs MC " + fmt(bm.mean) + " (z=" + fmt(z, 3) +
                                              ")");
        }
    }

    c.note(
        "heavy-traffic workload is an asymptotic approximation, not an unbiased estimand; its "
        "accuracy band is checked by acc11 and its covariance inputs above");
    return {c};
}

// ---------------------------------------------------------------------------

using GroupFn = std::function<std::vector<Criterion>()>;

const std::map<std::string, GroupFn>& groups() {
    static const std::map<std::string, GroupFn> g = {
        {"acc01", run_acc01},   {"acc02", run_acc02}, {"acc030506", run_acc030506},
        {"acc04", run_acc04},   {"acc07a", run_acc07a}, {"acc07b", run_acc07b},
        {"acc08", run_acc08},   {"acc09", run_acc09}, {"acc10", run_acc10},
        {"acc11", run_acc11},   {"acc12", run_acc12}, {"acc13", run_acc13},
        {"acc14", run_acc14},
    };
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> wanted;
    for (int i = 1; i < argc; ++i) wanted.emplace_back(argv[i]);
    if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
        wanted.clear();
        for (const auto& [name, fn] : groups()) wanted.push_back(name);
    }

    int failures = 0;
    for (const auto& name : wanted) {
        const auto it = groups().find(name);
        if (it == groups().end()) {
            std::cerr << "unknown criterion group: " << name << std::endl;
            return 64;
        }
        try {
            for (const auto& criterion : it->second()) {
                print(criterion);
                failures += criterion.pass ? 0 : 1;
            }
        } catch (const std::exception& e) {
            Criterion crash(name);
            crash.require(false, std::string("exception: ") + e.what());
            print(crash);
            ++failures;
        }
    }
    return failures;
}
