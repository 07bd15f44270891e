#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobiq/channel.hpp"
#include "mobiq/geometry.hpp"
#include "mobiq/mobility.hpp"
#include "mobiq/queueing.hpp"

namespace mobiq {

enum class RunMode { Single, Interacting, Static };

// Full experiment description. Defaults reproduce the baseline single-queue
// setup: 100x100 torus, intensity 0.1, link distance 0.3, bounded path loss
// with exponent 4, unit-mean Rayleigh fades redrawn every tick, random
// direction motion at v=1, truncated Shannon service with threshold 8,
// Bernoulli arrivals at rate 1.2, tick = slot = 1e-3.
struct ExperimentConfig {
    Arena arena{100.0};
    double intensity = 0.1;

    double distance = 0.3;
    double noise = 0.0;

    PathLoss pathloss = PathLoss::bounded(4.0);
    FadingModel fading{};

    MobilityModel mobility = MobilityModel::random_direction(1.0);

    ServicePolicy policy{PolicyKind::TruncatedShannon, 8.0};
    ArrivalProcess arrivals{ArrivalKind::Bernoulli, 1.2};

    double tick = 1e-3;  // environment step
    double slot = 1e-3;  // queue step, positive integer multiple of tick

    RunMode mode = RunMode::Single;
    std::int64_t horizon_slots = 100000;
    std::uint64_t seed = 1;
    int replicates = 1;
    double warmup_fraction = 0.2;
    bool record_traces = false;

    std::vector<std::string> quantities;  // analyze targets, in request order

    std::int64_t ticks_per_slot() const;

    bool operator==(const ExperimentConfig&) const = default;
};

struct ConfigViolation {
    int line = 0;  // 0 when not tied to input text
    std::string message;
};

// Reports every violation found, not just the first.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<ConfigViolation> violations);
    const std::vector<ConfigViolation>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<ConfigViolation>& violations);
    std::vector<ConfigViolation> violations_;
};

// Text form: '#' comments, [section] headers, flat key = value lines.
// Unknown sections/keys, duplicates, malformed values, and invariant
// violations are all collected into one ConfigError with line numbers.
ExperimentConfig parse_config(const std::string& text);

// Canonical form: fixed section and key order, shortest round-trip numbers.
// parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);

// Cross-field invariants; violations carry line 0.
void validate_config(const ExperimentConfig& config);

}  // namespace mobiq
