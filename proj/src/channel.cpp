#include "mobiq/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mobiq {

namespace {

int small_integer_exponent(double beta) {
    const double r = std::round(beta);
    if (std::fabs(beta - r) < 1e-12 && r >= 3.0 && r <= 6.0) return static_cast<int>(r);
    return 0;
}

}  // namespace

PathLoss PathLoss::power_law(double amplitude, double beta, double cap_radius) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw std::invalid_argument("path loss amplitude must be positive");
    if (!(beta > 2.0))
        throw std::invalid_argument("path loss exponent must exceed 2 for integrable interference");
    if (!(cap_radius > 0.0) || !std::isfinite(cap_radius))
        throw std::invalid_argument("power-law cap radius must be positive");
    PathLoss l;
    l.kind_ = Kind::PowerLaw;
    l.amplitude_ = amplitude;
    l.beta_ = beta;
    l.cap_radius_ = cap_radius;
    l.int_beta_ = small_integer_exponent(beta);
    return l;
}

PathLoss PathLoss::bounded(double beta) {
    if (!(beta > 2.0))
        throw std::invalid_argument("path loss exponent must exceed 2 for integrable interference");
    PathLoss l;
    l.kind_ = Kind::Bounded;
    l.beta_ = beta;
    l.int_beta_ = small_integer_exponent(beta);
    return l;
}

PathLoss PathLoss::table(std::vector<double> radii, std::vector<double> gains) {
    if (radii.size() != gains.size() || radii.size() < 2)
        throw std::invalid_argument("path loss table needs matching radii/gains with >= 2 rows");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!std::isfinite(radii[i]) || !std::isfinite(gains[i]) || gains[i] < 0.0)
            throw std::invalid_argument("path loss table entries must be finite and nonnegative");
        if (i > 0 && (radii[i] <= radii[i - 1] || gains[i] > gains[i - 1]))
            throw std::invalid_argument("path loss table must be increasing in r and nonincreasing in gain");
    }
    if (radii.front() < 0.0) throw std::invalid_argument("path loss table radii must be nonnegative");
    PathLoss l;
    l.kind_ = Kind::Table;
    l.beta_ = 0.0;
    l.int_beta_ = 0;
    l.radii_ = std::move(radii);
    l.gains_ = std::move(gains);
    return l;
}

double PathLoss::operator()(double r) const {
    switch (kind_) {
        case Kind::PowerLaw: {
            const double rr = r < cap_radius_ ? cap_radius_ : r;
            return amplitude_ * std::pow(rr, -beta_);
        }
        case Kind::Bounded:
            return path_gain_fast(*this, r);
        case Kind::Table: {
            if (r <= radii_.front()) return gains_.front();
            if (r >= radii_.back()) return 0.0;
            std::size_t lo = 0, hi = radii_.size() - 1;
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                (radii_[mid] <= r ? lo : hi) = mid;
            }
            const double t = (r - radii_[lo]) / (radii_[hi] - radii_[lo]);
            return gains_[lo] + t * (gains_[hi] - gains_[lo]);
        }
    }
    return 0.0;
}

double sample_fade(const FadingModel& model, Rng& rng) {
    if (model.kind == FadeKind::Deterministic) return 1.0;
    return rng.exponential(1.0 / model.mu);
}

double fade_laplace(const FadingModel& model, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("Laplace argument must be nonnegative");
    if (model.kind == FadeKind::Deterministic) return std::exp(-s);
    return 1.0 / (1.0 + s / model.mu);
}

double fade_mean(const FadingModel& model) {
    return model.kind == FadeKind::Deterministic ? 1.0 : 1.0 / model.mu;
}

double fade_second_moment(const FadingModel& model) {
    return model.kind == FadeKind::Deterministic ? 1.0 : 2.0 / (model.mu * model.mu);
}

}  // namespace mobiq
