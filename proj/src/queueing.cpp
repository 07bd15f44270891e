#include "mobiq/queueing.hpp"

#include <cmath>
#include <stdexcept>

namespace mobiq {

double service_rate(const ServicePolicy& policy, double sinr) {
    if (std::isnan(sinr) || sinr < 0.0) {
        throw std::invalid_argument("SINR must be nonnegative");
    }
    switch (policy.kind) {
        case PolicyKind::Shannon:
            return std::log2(1.0 + sinr);
        case PolicyKind::TruncatedShannon:
            return sinr > policy.threshold ? std::log2(1.0 + sinr) : 0.0;
        case PolicyKind::Indicator:
            return sinr > policy.threshold ? 1.0 : 0.0;
    }
    return 0.0;
}

double slot_service(std::span<const double> tick_rates, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("tick length must be positive");
    double sum = 0.0;
    for (double r : tick_rates) sum += r;
    return sum * dt;
}

std::vector<double> packet_delays(const std::vector<PacketRecord>& packets) {
    std::vector<double> delays;
    delays.reserve(packets.size());
    for (const auto& p : packets) {
        if (p.departure_slot >= 0) {
            delays.push_back(static_cast<double>(p.departure_slot - p.arrival_slot));
        }
    }
    return delays;
}

}  // namespace mobiq
