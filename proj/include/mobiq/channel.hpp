#pragma once

#include <vector>

#include "mobiq/rng.hpp"

namespace mobiq {

// Radial path-gain profile. All variants are nonincreasing in r and have a
// finite mean-interference integral (checked at construction), which is what
// keeps shot noise on the infinite plane finite for the analytic formulas.
class PathLoss {
  public:
    enum class Kind { PowerLaw, Bounded, Table };

    // amplitude * r^-beta, clamped below cap_radius to the cap value so the
    // gain at r = 0 is finite. beta > 2 required.
    static PathLoss power_law(double amplitude, double beta, double cap_radius);

    // (1 + r)^-beta, finite everywhere. beta > 2 required.
    static PathLoss bounded(double beta);

    // Piecewise-linear nonincreasing table (r, gain), zero beyond the last r.
    static PathLoss table(std::vector<double> radii, std::vector<double> gains);

    double operator()(double r) const;

    Kind kind() const { return kind_; }
    double beta() const { return beta_; }
    double amplitude() const { return amplitude_; }
    double cap_radius() const { return cap_radius_; }
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<double>& gains() const { return gains_; }

    bool operator==(const PathLoss&) const = default;

  private:
    PathLoss() = default;

    Kind kind_ = Kind::Bounded;
    double beta_ = 4.0;
    double amplitude_ = 1.0;
    double cap_radius_ = 0.0;
    int int_beta_ = 4;  // fast path when beta is a small integer, else 0
    std::vector<double> radii_;
    std::vector<double> gains_;

    friend double path_gain_fast(const PathLoss&, double);
};

// Hot-loop gain evaluation; identical results to operator(), kept inline.
inline double path_gain_fast(const PathLoss& l, double r) {
    if (l.kind_ == PathLoss::Kind::Bounded) {
        const double u = 1.0 + r;
        switch (l.int_beta_) {
            case 4: {
                const double u2 = u * u;
                return 1.0 / (u2 * u2);
            }
            case 3:
                return 1.0 / (u * u * u);
            case 6: {
                const double u2 = u * u;
                return 1.0 / (u2 * u2 * u2);
            }
            default:
                return std::pow(u, -l.beta_);
        }
    }
    return l(r);
}

enum class FadeKind { Rayleigh, Deterministic };

// Block fading: power fades are redrawn i.i.d. once per coherence interval
// and held constant in between. Rayleigh power fade = Exp with mean 1/mu;
// Deterministic = constant 1 (mu ignored).
struct FadingModel {
    FadeKind kind = FadeKind::Rayleigh;
    double mu = 1.0;
    // Coherence interval in time units; 0 means "one simulation tick".
    double coherence = 0.0;

    bool operator==(const FadingModel&) const = default;
};

double sample_fade(const FadingModel& model, Rng& rng);

// Laplace transform E[exp(-s h)] of the power fade.
double fade_laplace(const FadingModel& model, double s);

double fade_mean(const FadingModel& model);
double fade_second_moment(const FadingModel& model);

}  // namespace mobiq
