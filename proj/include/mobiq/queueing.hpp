#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mobiq {

struct ExperimentConfig;

enum class PolicyKind { Shannon, TruncatedShannon, Indicator };

// Maps SINR to an instantaneous service rate in packets per unit time.
// The rate is 0 at SINR 0 under every variant.
struct ServicePolicy {
    PolicyKind kind = PolicyKind::Shannon;
    double threshold = 0.0;  // SINR threshold for the gated variants

    bool operator==(const ServicePolicy&) const = default;
};

double service_rate(const ServicePolicy& policy, double sinr);

// Left-endpoint Riemann sum of tick rates over one slot: V(n) = sum(rate) * dt.
double slot_service(std::span<const double> tick_rates, double dt);

// W_{n+1} = max(W_n + A(n) - V(n), 0).
inline double lindley_step(double w, double a, double v) {
    const double next = w + a - v;
    return next > 0.0 ? next : 0.0;
}

enum class ArrivalKind { Bernoulli, DeterministicRate };

// Arrival stream; rate is packets per unit time, so the per-slot Bernoulli
// success probability is rate * slot. Packets have unit size.
struct ArrivalProcess {
    ArrivalKind kind = ArrivalKind::Bernoulli;
    double rate = 0.0;

    bool operator==(const ArrivalProcess&) const = default;
};

struct PacketRecord {
    std::int64_t id = 0;             // 1-based in arrival order
    std::int64_t arrival_slot = 0;
    std::int64_t departure_slot = -1;  // -1 while censored at horizon end
};

// Delays in slots for departed packets, in FIFO order; censored packets are
// excluded (the caller reads the censored count separately).
std::vector<double> packet_delays(const std::vector<PacketRecord>& packets);

struct SingleQueueResult {
    std::vector<double> workload;   // W_n for n = 0..horizon (horizon+1 values)
    std::vector<double> arrivals;   // A(n), only when traces are recorded
    std::vector<double> services;   // V(n), only when traces are recorded
    std::vector<PacketRecord> packets;
    std::int64_t censored = 0;
    double slot = 0.0;
    std::int64_t warmup_slots = 0;
};

SingleQueueResult run_single_queue(const ExperimentConfig& config);

struct QueuePacket {
    std::int32_t queue_id = 0;
    PacketRecord record;
};

struct InteractingResult {
    std::vector<double> mean_queue_length;  // cross-queue mean workload per slot
    std::vector<double> tagged_workload;    // queue 0 (receiver starts at origin)
    std::vector<QueuePacket> packets;       // arrival order: slot, then queue id
    std::int64_t censored = 0;
    std::int64_t n_queues = 0;
    std::int64_t warmup_slots = 0;
};

InteractingResult run_interacting(const ExperimentConfig& config);

struct SeriesResult {
    std::vector<double> interference;  // I_0 at each tick
    std::vector<double> sinr;          // matching SINR values
    double dt = 0.0;
};

// Interference and SINR at the origin's receiver at tick resolution, under
// the config's mobility/fading; reproducible for a fixed seed.
SeriesResult interference_series(const ExperimentConfig& config, std::int64_t ticks);

}  // namespace mobiq
