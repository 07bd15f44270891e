#include "mobiq/interference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mobiq {

Snapshot::Snapshot(PointConfiguration cfg, std::vector<double> f, std::vector<std::uint8_t> act,
                   double sig)
    : config(std::move(cfg)), fades(std::move(f)), activity(std::move(act)), signal_fade(sig) {
    if (fades.size() != config.size())
        throw std::invalid_argument("fades length must match point count");
    if (!activity.empty() && activity.size() != config.size())
        throw std::invalid_argument("activity length must match point count");
    if (!(signal_fade >= 0.0)) throw std::invalid_argument("signal fade must be nonnegative");
}

double shot_noise(const Snapshot& snap, const LinkParams& lp) {
    const auto& pts = snap.config.points();
    return shot_noise_raw(pts.data(), snap.fades.data(),
                          snap.activity.empty() ? nullptr : snap.activity.data(), pts.size(),
                          lp.pathloss, snap.config.arena().side);
}

double sinr(const Snapshot& snap, const LinkParams& lp) {
    if (!(lp.distance > 0.0)) throw std::invalid_argument("link distance must be positive");
    if (!(lp.noise >= 0.0)) throw std::invalid_argument("noise power must be nonnegative");
    const double numerator = lp.pathloss(lp.distance) * snap.signal_fade;
    const double denominator = shot_noise(snap, lp) + lp.noise;
    if (denominator == 0.0) {
        if (numerator == 0.0)
            throw std::domain_error("SINR undefined: zero signal over zero interference plus noise");
        return std::numeric_limits<double>::infinity();
    }
    return numerator / denominator;
}

}  // namespace mobiq
