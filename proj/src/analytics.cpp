#include "mobiq/analytics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mobiq/config.hpp"
#include "mobiq/interference.hpp"
#include "mobiq/rng.hpp"

namespace mobiq {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Adaptive radial integral over (0, upper); upper = 0 means +infinity via
// the library's range transform. Throws NumericalError when the reported
// error estimate is far off the requested tolerance.
template <typename F>
double radial_integral(F&& f, const QuadratureOptions& opts, const char* what) {
    const double upper = opts.radial_cutoff > 0.0 ? opts.radial_cutoff
                                                  : std::numeric_limits<double>::infinity();
    double error = 0.0;
    double l1 = 0.0;
    const double q = GK::integrate(f, 0.0, upper, opts.max_depth, opts.rel_tol, &error, &l1);
    const double scale = std::max({std::abs(q), l1, 1e-300});
    if (error > std::max(1e-6, 1e3 * opts.rel_tol) * scale) {
        throw NumericalError(std::string(what) + ": quadrature error " + std::to_string(error) +
                             " exceeds tolerance at scale " + std::to_string(scale));
    }
    return q;
}

template <typename F>
double finite_integral(F&& f, double a, double b, const QuadratureOptions& opts,
                       const char* what) {
    double error = 0.0;
    double l1 = 0.0;
    const double q = GK::integrate(f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
    const double scale = std::max({std::abs(q), l1, 1e-300});
    if (error > std::max(1e-6, 1e3 * opts.rel_tol) * scale) {
        throw NumericalError(std::string(what) + ": quadrature error " + std::to_string(error) +
                             " exceeds tolerance at scale " + std::to_string(scale));
    }
    return q;
}

// Integrals whose integrand contains a kernel average inherit that kernel's
// truncation jaggedness, so the outer estimator cannot certify much below the
// kernel tolerance; asking for more stalls the adaptive pass at max_depth and
// inflates the summed error estimate past the acceptance check.
QuadratureOptions kernel_outer(const QuadratureOptions& opts) {
    QuadratureOptions out = opts;
    out.rel_tol = std::max(opts.rel_tol, 100.0 * opts.kernel.rel_tol);
    return out;
}

// Tracks the worst relative Monte Carlo std error seen across kernel
// evaluations (nonzero only for the sampled RandomWaypoint kernel).
struct KernelErrorTracker {
    double worst = 0.0;

    double operator()(const KernelAverage& k) {
        if (k.std_error > 0.0) {
            const double rel = k.std_error / std::max(std::abs(k.value), 1e-12);
            worst = std::max(worst, rel);
        }
        return k.value;
    }

    void check(double tol, const char* what) const {
        if (worst > tol) {
            throw NumericalError(std::string(what) + ": kernel MC std error " +
                                 std::to_string(worst) + " exceeds tolerance " +
                                 std::to_string(tol));
        }
    }
};

double level_integral(const SystemParams& p, double level, const QuadratureOptions& opts) {
    const double s = p.mu * level / p.pathloss(p.distance);
    const auto& fading = p.interferer_fading;
    return radial_integral(
        [&](double u) { return u * (1.0 - fade_laplace(fading, s * p.pathloss(u))); }, opts,
        "level crossing integral");
}

double crossing_probability(const SystemParams& p, double level, const QuadratureOptions& opts) {
    if (level <= 0.0) return 1.0;
    const double s = p.mu * level / p.pathloss(p.distance);
    const double noise_factor = std::exp(-p.noise * s);
    if (p.intensity == 0.0) return noise_factor;
    return noise_factor * std::exp(-kTwoPi * p.intensity * level_integral(p, level, opts));
}

}  // namespace

SystemParams system_params(const ExperimentConfig& config) {
    SystemParams p;
    p.intensity = config.intensity;
    p.distance = config.distance;
    p.noise = config.noise;
    p.mu = config.fading.kind == FadeKind::Rayleigh ? config.fading.mu : 1.0;
    p.pathloss = config.pathloss;
    p.interferer_fading = config.fading;
    p.threshold = config.policy.threshold;
    p.arrival_rate = config.arrivals.rate;
    p.slot = config.slot;
    return p;
}

double prob_unstable_static(const SystemParams& params, const QuadratureOptions& opts) {
    const double per_slot = params.arrival_rate * params.slot;
    const double level = std::expm1(per_slot / params.slot);
    return 1.0 - crossing_probability(params, level, opts);
}

double mean_service_rate_shannon(double intensity, double distance, double beta,
                                 const QuadratureOptions& opts) {
    if (!(beta > 2.0)) {
        throw std::invalid_argument("path-loss exponent must exceed 2 (shot noise diverges)");
    }
    if (!(distance > 0.0)) throw std::invalid_argument("link distance must be positive");
    if (!(intensity >= 0.0)) throw std::invalid_argument("intensity must be nonnegative");
    if (intensity == 0.0) {
        throw NumericalError(
            "mean Shannon rate diverges at zero intensity: no interference and no noise");
    }
    // Substituting v = w^(beta/2) in the printed integral
    //   int exp(-2 pi^2 L R^2 v^(2/beta) / (beta sin(2 pi/beta))) / (v+1) dv
    // gives an integrand whose exponential factor is linear in w.
    const double pi = 0.5 * kTwoPi;
    const double c =
        2.0 * pi * pi * intensity * distance * distance / (beta * std::sin(kTwoPi / beta));
    const double half_beta = 0.5 * beta;
    return radial_integral(
        [&](double w) {
            const double wb = std::pow(w, half_beta);
            return std::exp(-c * w) * half_beta * std::pow(w, half_beta - 1.0) / (wb + 1.0);
        },
        opts, "mean Shannon rate integral");
}

McEstimate mean_service_rate_empirical(const ExperimentConfig& config, std::int64_t samples) {
    if (samples < 2) throw std::invalid_argument("need at least 2 snapshots");
    validate_config(config);
    Rng rng = derive_stream(config.seed, "snapshot-mc");
    const double rx_gain = config.pathloss(config.distance);

    double sum = 0.0, comp = 0.0, sumsq = 0.0;
    std::vector<double> fades;
    for (std::int64_t i = 0; i < samples; ++i) {
        PointConfiguration pc = sample_ppp(config.intensity, config.arena, rng);
        fades.resize(pc.size());
        for (auto& f : fades) f = sample_fade(config.fading, rng);
        const double signal = sample_fade(config.fading, rng);
        const double interference = shot_noise_raw(pc.points().data(), fades.data(), nullptr,
                                                   pc.size(), config.pathloss, config.arena.side);
        const double den = interference + config.noise;
        const double sinr_value = den == 0.0 ? std::numeric_limits<double>::infinity()
                                             : rx_gain * signal / den;
        const double rate = service_rate(config.policy, sinr_value);
        const double y = rate - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        sumsq += rate * rate;
    }
    McEstimate est;
    est.samples = samples;
    const double n = static_cast<double>(samples);
    est.value = sum / n;
    const double var = std::max(0.0, (sumsq - n * est.value * est.value) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
    est.ci_lo = est.value - 1.959963984540054 * est.std_error;
    est.ci_hi = est.value + 1.959963984540054 * est.std_error;
    return est;
}

double prob_level_crossing(const SystemParams& params, const QuadratureOptions& opts) {
    return crossing_probability(params, params.threshold, opts);
}

double joint_level_crossing(const SystemParams& params, const MobilityModel& mobility,
                            double lag, const QuadratureOptions& opts) {
    if (!(lag >= 0.0)) throw std::invalid_argument("lag must be nonnegative");
    const double s = params.level_scale();
    const auto& fading = params.interferer_fading;
    const double noise_factor = std::exp(-2.0 * params.noise * s);
    if (params.intensity == 0.0) return noise_factor;

    KernelErrorTracker tracker;
    auto displaced = [&](const Vec2& y) {
        return fade_laplace(fading, s * params.pathloss(std::sqrt(y.x * y.x + y.y * y.y)));
    };
    // u (1 - here k) integrates to u (1 - here)(1 + k): swapping x -> x + d on
    // the cross term leaves the kernel average invariant. The rewritten
    // integrand decays like the path gain for every lag, while the original
    // keeps an O(1) band near u = displacement that adaptive panels miss once
    // the displacement is large.
    const double integral = radial_integral(
        [&](double u) {
            const double here = fade_laplace(fading, s * params.pathloss(u));
            const double k =
                tracker(kernel_average(mobility, lag, Vec2{u, 0.0}, displaced, opts.kernel));
            return u * (1.0 - here) * (1.0 + k);
        },
        kernel_outer(opts), "joint level crossing integral");
    tracker.check(opts.kernel_se_tol, "joint level crossing");
    return noise_factor * std::exp(-kTwoPi * params.intensity * integral);
}

double conditional_gain(const SystemParams& params, const MobilityModel& mobility, double lag,
                        const QuadratureOptions& opts) {
    if (!(lag >= 0.0)) throw std::invalid_argument("lag must be nonnegative");
    if (params.intensity == 0.0) return 1.0;
    const double s = params.level_scale();
    const auto& fading = params.interferer_fading;

    KernelErrorTracker tracker;
    auto displaced = [&](const Vec2& y) {
        return fade_laplace(fading, s * params.pathloss(std::sqrt(y.x * y.x + y.y * y.y)));
    };
    const double integral = radial_integral(
        [&](double u) {
            const double here = fade_laplace(fading, s * params.pathloss(u));
            const double k =
                tracker(kernel_average(mobility, lag, Vec2{u, 0.0}, displaced, opts.kernel));
            return u * (1.0 - here) * (1.0 - k);
        },
        kernel_outer(opts), "conditional gain integral");
    tracker.check(opts.kernel_se_tol, "conditional gain");
    return std::exp(kTwoPi * params.intensity * integral);
}

double corr_coefficient(const MobilityModel& mobility, double lag, const PathLoss& pathloss,
                        double fade_second_moment, const QuadratureOptions& opts) {
    if (!(fade_second_moment > 0.0)) {
        throw std::invalid_argument("fade second moment must be positive");
    }
    if (mobility.kind == MotionKind::Static || lag == 0.0) {
        // Dirac displacement: numerator and denominator integrals coincide.
        return 1.0 / fade_second_moment;
    }
    KernelErrorTracker tracker;
    auto displaced = [&](const Vec2& y) { return pathloss(std::sqrt(y.x * y.x + y.y * y.y)); };
    const double num = radial_integral(
        [&](double u) {
            const double k =
                tracker(kernel_average(mobility, lag, Vec2{u, 0.0}, displaced, opts.kernel));
            return u * pathloss(u) * k;
        },
        kernel_outer(opts), "shot noise correlation numerator");
    const double den = radial_integral(
        [&](double u) {
            const double l = pathloss(u);
            return u * l * l;
        },
        opts, "shot noise correlation denominator");
    tracker.check(opts.kernel_se_tol, "shot noise correlation");
    return num / den / fade_second_moment;
}

double cov_service(const SystemParams& params, const MobilityModel& mobility, int lag_slots,
                   const QuadratureOptions& opts) {
    if (lag_slots < 1) throw std::invalid_argument("lag must be at least 1 slot");
    if (std::abs(params.slot - 1.0) > 1e-12) {
        throw std::invalid_argument("service covariance assumes unit slots");
    }
    const double p = prob_level_crossing(params, opts);
    auto joint_at = [&](double time_lag) {
        return joint_level_crossing(params, mobility, time_lag, opts);
    };

    // The square integral of J(|s + j - 1 - t|) over (t, s) in [0,1]^2
    // collapses to one dimension in the offset. The integrand inherits the
    // joint quadrature's noise, so the offset integral runs at the same
    // kernel-limited tolerance.
    const QuadratureOptions outer = kernel_outer(opts);
    double integral;
    if (lag_slots == 1) {
        integral =
            2.0 * finite_integral([&](double u) { return (1.0 - u) * joint_at(u); }, 0.0, 1.0,
                                  outer, "service covariance integral");
    } else {
        // Split at w = 0: the |w| kink defeats a single Gauss panel.
        const double base = static_cast<double>(lag_slots - 1);
        integral = finite_integral(
                       [&](double w) { return (1.0 + w) * joint_at(base + w); }, -1.0, 0.0,
                       outer, "service covariance integral (left)") +
                   finite_integral(
                       [&](double w) { return (1.0 - w) * joint_at(base + w); }, 0.0, 1.0,
                       outer, "service covariance integral (right)");
    }
    return integral - p * p;
}

HeavyTraffic heavy_traffic_workload(const SystemParams& params, const MobilityModel& mobility,
                                    int k_max, double tol, const QuadratureOptions& opts) {
    const double p_arr = params.arrival_rate * params.slot;
    if (!(p_arr > 0.0 && p_arr < 1.0)) {
        throw std::invalid_argument("Bernoulli probability out of range");
    }
    const double p_level = prob_level_crossing(params, opts);
    const double rho = p_arr / p_level;
    if (!(rho < 1.0)) {
        throw std::invalid_argument("heavy-traffic approximation needs rho < 1");
    }

    std::vector<double> cov;  // cov[j-1] = Cov(V(1), V(j))
    auto cov_at = [&](int j) {
        while (static_cast<int>(cov.size()) < j) {
            const int next = static_cast<int>(cov.size()) + 1;
            // Two consecutive lags at the quadrature noise floor mean the
            // tail cannot move the Cesaro sum; skip further quadratures. The
            // floor sits above the ~1e-8 relative noise each cov inherits
            // from its joint-probability integrals.
            if (next > 2) {
                const double floor = std::max(1e-12, 1e-5 * std::abs(cov[0]));
                if (std::abs(cov[cov.size() - 1]) < floor &&
                    std::abs(cov[cov.size() - 2]) < floor) {
                    cov.push_back(0.0);
                    continue;
                }
            }
            cov.push_back(cov_service(params, mobility, next, opts));
        }
        return cov[static_cast<std::size_t>(j - 1)];
    };

    const double p2 = p_level * p_level;
    auto cesaro = [&](int k) {
        double sum = 0.0;
        for (int j = 1; j < k; ++j) {
            sum += (1.0 - static_cast<double>(j) / static_cast<double>(k)) * cov_at(j);
        }
        return sum / p2;
    };

    int k = 8;
    double c_s2 = cesaro(k);
    while (true) {
        if (k >= k_max) {
            throw NumericalError("covariance series did not converge by K=" + std::to_string(k) +
                                 "; partial c_S^2 = " + std::to_string(c_s2));
        }
        k *= 2;
        const double next = cesaro(k);
        const double change = std::abs(next - c_s2);
        c_s2 = next;
        if (change <= tol * std::max(std::abs(next), 1e-12)) break;
    }

    HeavyTraffic out;
    out.rho = rho;
    out.c_a2 = (1.0 - p_arr) / p_arr;
    out.c_s2 = c_s2;
    out.k_used = k;
    out.workload = p_arr * rho * (out.c_a2 + out.c_s2) / (2.0 * (1.0 - rho));
    return out;
}

OracleCheck compare_to_oracle(double analytic, std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("oracle needs at least 2 samples");
    double sum = 0.0, comp = 0.0;
    for (double x : samples) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);

    OracleCheck out;
    out.analytic = analytic;
    out.mc_mean = mean;
    out.mc_se = se;
    if (se == 0.0) {
        out.z = analytic == mean ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        out.z = (analytic - mean) / se;
    }
    return out;
}

}  // namespace mobiq
