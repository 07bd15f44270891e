#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "mobiq/channel.hpp"
#include "mobiq/mobility.hpp"

namespace mobiq {

struct ExperimentConfig;

// Quadrature or series evaluation failed to reach its tolerance; the message
// carries the achieved error.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Parameter block shared by the closed-form quantities. Fades: the signal
// fade is Rayleigh with rate mu (mean 1/mu); interferer fades follow
// interferer_fading, unit mean by default.
struct SystemParams {
    double intensity = 0.1;   // spatial density of interferers
    double distance = 0.3;    // transmitter-receiver separation R
    double noise = 0.0;       // thermal noise power
    double mu = 1.0;          // signal Rayleigh rate
    PathLoss pathloss = PathLoss::bounded(4.0);
    FadingModel interferer_fading{FadeKind::Rayleigh, 1.0, 0.0};
    double threshold = 8.0;   // SINR level T
    double arrival_rate = 1.2;  // packets per unit time
    double slot = 1e-3;

    // s = mu * T / l(R), the Laplace argument scale of the level crossing.
    double level_scale() const { return mu * threshold / pathloss(distance); }
};

SystemParams system_params(const ExperimentConfig& config);

struct QuadratureOptions {
    // Tighter targets than ~1e-8 stall double-precision Gauss-Kronrod: the
    // adaptive pass subdivides to max_depth and the summed per-interval error
    // estimates grow with the interval count instead of shrinking.
    double rel_tol = 1e-8;
    int max_depth = 15;
    // 0 maps the infinite radial range through a variable transform instead
    // of truncating at a finite cutoff.
    double radial_cutoff = 0.0;
    double kernel_se_tol = 0.02;  // max relative MC std error tolerated
    KernelOptions kernel{};
};

// Probability that a static configuration cannot support the arrival rate,
// with level T = e^(lambda/delta) - 1 on the per-slot arrival mass.
double prob_unstable_static(const SystemParams& params, const QuadratureOptions& opts = {});

// Mean Shannon rate (nats) under a pure power-law gain r^-beta, no noise,
// Rayleigh fades. Throws std::invalid_argument for beta <= 2 and
// NumericalError for intensity == 0 (the integral diverges).
double mean_service_rate_shannon(double intensity, double distance, double beta,
                                 const QuadratureOptions& opts = {});

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::int64_t samples = 0;
};

// Monte Carlo mean service rate over fresh snapshots of the config's
// spatial process, fades, link, and policy; 95% normal CI.
McEstimate mean_service_rate_empirical(const ExperimentConfig& config,
                                       std::int64_t samples = 100000);

// P[SINR > T] at one instant under Rayleigh signal fading.
double prob_level_crossing(const SystemParams& params, const QuadratureOptions& opts = {});

// P[SINR(t) > T, SINR(t+lag) > T] with the displacement kernel of the given
// mobility model over the lag. Signal fades at the two instants are
// independent, hence the squared noise factor.
double joint_level_crossing(const SystemParams& params, const MobilityModel& mobility,
                            double lag, const QuadratureOptions& opts = {});

// P[level crossing at t+lag | crossing at t] / P[crossing]; always >= 1 and
// equal to joint / P^2 up to quadrature tolerance.
double conditional_gain(const SystemParams& params, const MobilityModel& mobility, double lag,
                        const QuadratureOptions& opts = {});

// Correlation coefficient of the interference shot noise across the lag:
// integral l * (kernel-averaged l) / (E[h^2] * integral l^2).
double corr_coefficient(const MobilityModel& mobility, double lag, const PathLoss& pathloss,
                        double fade_second_moment, const QuadratureOptions& opts = {});

// Cov(V(1), V(lag_slots)) for Indicator service on unit slots, reducing the
// printed square integral over (t, s) to one dimension in the time offset.
double cov_service(const SystemParams& params, const MobilityModel& mobility, int lag_slots,
                   const QuadratureOptions& opts = {});

struct HeavyTraffic {
    double workload = 0.0;
    double rho = 0.0;
    double c_a2 = 0.0;
    double c_s2 = 0.0;
    int k_used = 0;
};

// Kingman-style mean-workload approximation; the covariance series is summed
// with Cesaro weights (1 - j/K), doubling K until the relative change drops
// below tol. Requires arrival_rate * slot < 1 (Bernoulli slot probability).
// Cesaro partial sums approach their limit like 1/K even after the covariances
// die out, so tol buys K ~ 1/(2 tol) doublings; 1e-3 keeps K around 1024 while
// moving the workload by well under 0.1%.
HeavyTraffic heavy_traffic_workload(const SystemParams& params, const MobilityModel& mobility,
                                    int k_max = 4096, double tol = 1e-3,
                                    const QuadratureOptions& opts = {});

struct OracleCheck {
    double analytic = 0.0;
    double mc_mean = 0.0;
    double mc_se = 0.0;
    double z = 0.0;  // (analytic - mc_mean) / mc_se

    bool within(double n_sigma) const { return std::abs(z) <= n_sigma; }
};

// Generic analytic-vs-Monte-Carlo harness: folds an i.i.d. sample into mean,
// standard error, and the z-score of the analytic value against them.
OracleCheck compare_to_oracle(double analytic, std::span<const double> samples);

}  // namespace mobiq
