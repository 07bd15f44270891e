#include "mobiq/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

namespace mobiq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view s, double& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end && std::isfinite(out);
}

bool parse_i64(std::string_view s, std::int64_t& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end;
}

bool parse_bool(std::string_view s, bool& out) {
    if (s == "true" || s == "1") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0") {
        out = false;
        return true;
    }
    return false;
}

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string fmt(std::int64_t v) {
    char buf[24];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string fmt(std::uint64_t v) {
    char buf[24];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

// Raw field values gathered during parsing; normalized into the typed config
// once the whole file is read, so key order inside a section never matters.
struct RawConfig {
    ExperimentConfig cfg;

    std::string pl_kind = "bounded";
    double pl_beta = 4.0;
    double pl_amplitude = 1.0;
    double pl_cap = 1e-3;
    std::string pl_points;
    int pl_points_line = 0;
    int pl_section_line = 0;

    FadeKind fade_kind = FadeKind::Rayleigh;
    double fade_mu = 1.0;
    double fade_coherence = 0.0;

    MotionKind mob_kind = MotionKind::RandomDirection;
    double mob_speed = 1.0;
    double mob_resample = 1.0;
    double mob_sigma = 0.0;

    PolicyKind pol_kind = PolicyKind::TruncatedShannon;
    double pol_threshold = 8.0;

    ArrivalKind arr_kind = ArrivalKind::Bernoulli;
    double arr_rate = 1.2;

    int rate_line = 0;
    int slot_line = 0;
};

struct Violations {
    std::vector<ConfigViolation> list;

    void add(int line, std::string message) { list.push_back({line, std::move(message)}); }
    bool empty() const { return list.empty(); }
};

bool parse_table_points(std::string_view text, std::vector<double>& radii,
                        std::vector<double>& gains) {
    radii.clear();
    gains.clear();
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string_view item = trim(text.substr(pos, comma == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : comma - pos));
        if (item.empty()) return false;
        std::size_t colon = item.find(':');
        if (colon == std::string_view::npos) return false;
        double r = 0.0;
        double g = 0.0;
        if (!parse_double(trim(item.substr(0, colon)), r)) return false;
        if (!parse_double(trim(item.substr(colon + 1)), g)) return false;
        radii.push_back(r);
        gains.push_back(g);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return !radii.empty();
}

// Cross-field invariants shared by parse_config and validate_config.
void collect_semantic(const ExperimentConfig& c, Violations& out, int rate_line, int slot_line) {
    if (!(c.arena.side > 0.0) || !std::isfinite(c.arena.side)) {
        out.add(0, "arena side must be positive");
    }
    if (!(c.intensity >= 0.0) || !std::isfinite(c.intensity)) {
        out.add(0, "process intensity must be nonnegative");
    }
    if (!(c.distance > 0.0) || !std::isfinite(c.distance)) {
        out.add(0, "link distance must be positive");
    }
    if (!(c.noise >= 0.0) || !std::isfinite(c.noise)) {
        out.add(0, "link noise must be nonnegative");
    }
    if (c.fading.kind == FadeKind::Rayleigh && !(c.fading.mu > 0.0)) {
        out.add(0, "fading mu must be positive");
    }
    if (!(c.fading.coherence >= 0.0)) out.add(0, "fading coherence must be nonnegative");
    if (!(c.mobility.speed >= 0.0)) out.add(0, "mobility speed must be nonnegative");
    if (c.mobility.kind == MotionKind::RandomWaypoint && !(c.mobility.resample_interval > 0.0)) {
        out.add(0, "mobility resample_interval must be positive");
    }
    if (c.mobility.kind == MotionKind::Brownian && !(c.mobility.sigma >= 0.0)) {
        out.add(0, "mobility sigma must be nonnegative");
    }
    if (!(c.policy.threshold >= 0.0)) out.add(0, "service threshold must be nonnegative");
    if (!(c.arrivals.rate >= 0.0) || !std::isfinite(c.arrivals.rate)) {
        out.add(rate_line, "arrival rate must be nonnegative");
    }
    if (!(c.tick > 0.0) || !std::isfinite(c.tick)) out.add(0, "schedule tick must be positive");
    if (!(c.slot > 0.0) || !std::isfinite(c.slot)) out.add(slot_line, "schedule slot must be positive");
    if (c.tick > 0.0 && c.slot > 0.0) {
        const double ratio = c.slot / c.tick;
        const double rounded = std::nearbyint(ratio);
        if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
            out.add(slot_line, "slot must be a positive integer multiple of tick");
        }
        if (c.arrivals.kind == ArrivalKind::Bernoulli && c.arrivals.rate * c.slot > 1.0) {
            out.add(rate_line, "Bernoulli probability out of range");
        }
    }
    if (c.horizon_slots < 1) out.add(0, "run horizon_slots must be at least 1");
    if (c.replicates < 1) out.add(0, "run replicates must be at least 1");
    if (!(c.warmup_fraction >= 0.0 && c.warmup_fraction < 1.0)) {
        out.add(0, "run warmup_fraction must lie in [0, 1)");
    }
    if (c.mode == RunMode::Static && c.mobility.kind != MotionKind::Static) {
        out.add(0, "static mode requires static mobility");
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

std::string ConfigError::join(const std::vector<ConfigViolation>& violations) {
    std::string out = "invalid config:";
    for (const auto& v : violations) {
        out += "\n  ";
        if (v.line > 0) {
            out += "line " + std::to_string(v.line) + ": ";
        }
        out += v.message;
    }
    return out;
}

std::int64_t ExperimentConfig::ticks_per_slot() const {
    const double ratio = slot / tick;
    const double rounded = std::nearbyint(ratio);
    if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * ratio) {
        throw ConfigError({{0, "slot must be a positive integer multiple of tick"}});
    }
    return static_cast<std::int64_t>(rounded);
}

ExperimentConfig parse_config(const std::string& text) {
    RawConfig raw;
    Violations bad;
    std::set<std::string> seen;

    std::string section;
    int line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = line;
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;

        if (sv.front() == '[') {
            if (sv.back() != ']' || sv.size() < 3) {
                bad.add(line_no, "malformed section header");
                section.clear();
                continue;
            }
            section = std::string(trim(sv.substr(1, sv.size() - 2)));
            static const std::set<std::string> known = {
                "arena",   "process", "link",     "pathloss", "fading",   "mobility",
                "service", "arrivals", "schedule", "run",      "analytics"};
            if (!known.count(section)) {
                bad.add(line_no, "unknown section '" + section + "'");
                section = "!skip";
            }
            if (section == "pathloss") raw.pl_section_line = line_no;
            continue;
        }

        auto eq = sv.find('=');
        if (eq == std::string_view::npos) {
            bad.add(line_no, "expected key = value");
            continue;
        }
        const std::string key(trim(sv.substr(0, eq)));
        const std::string value(trim(sv.substr(eq + 1)));
        if (section == "!skip") continue;
        if (section.empty()) {
            bad.add(line_no, "key '" + key + "' outside any section");
            continue;
        }
        if (key.empty()) {
            bad.add(line_no, "empty key");
            continue;
        }
        if (value.empty()) {
            bad.add(line_no, "missing value for '" + key + "'");
            continue;
        }
        if (!seen.insert(section + "." + key).second) {
            bad.add(line_no, "duplicate key '" + key + "' in [" + section + "]");
            continue;
        }

        auto want_double = [&](double& slot_ref) {
            if (!parse_double(value, slot_ref)) {
                bad.add(line_no, "invalid number '" + value + "' for '" + key + "'");
            }
        };

        bool handled = true;
        if (section == "arena") {
            if (key == "side") want_double(raw.cfg.arena.side);
            else handled = false;
        } else if (section == "process") {
            if (key == "intensity") want_double(raw.cfg.intensity);
            else handled = false;
        } else if (section == "link") {
            if (key == "distance") want_double(raw.cfg.distance);
            else if (key == "noise") want_double(raw.cfg.noise);
            else handled = false;
        } else if (section == "pathloss") {
            if (key == "kind") {
                if (value == "bounded" || value == "powerlaw" || value == "table") {
                    raw.pl_kind = value;
                } else {
                    bad.add(line_no, "unknown pathloss kind '" + value + "'");
                }
            } else if (key == "beta") want_double(raw.pl_beta);
            else if (key == "amplitude") want_double(raw.pl_amplitude);
            else if (key == "cap_radius") want_double(raw.pl_cap);
            else if (key == "points") {
                raw.pl_points = value;
                raw.pl_points_line = line_no;
            } else handled = false;
        } else if (section == "fading") {
            if (key == "kind") {
                if (value == "rayleigh") raw.fade_kind = FadeKind::Rayleigh;
                else if (value == "deterministic") raw.fade_kind = FadeKind::Deterministic;
                else bad.add(line_no, "unknown fading kind '" + value + "'");
            } else if (key == "mu") want_double(raw.fade_mu);
            else if (key == "coherence") want_double(raw.fade_coherence);
            else handled = false;
        } else if (section == "mobility") {
            if (key == "kind") {
                if (value == "static") raw.mob_kind = MotionKind::Static;
                else if (value == "random_direction") raw.mob_kind = MotionKind::RandomDirection;
                else if (value == "random_waypoint") raw.mob_kind = MotionKind::RandomWaypoint;
                else if (value == "brownian") raw.mob_kind = MotionKind::Brownian;
                else bad.add(line_no, "unknown mobility kind '" + value + "'");
            } else if (key == "speed") want_double(raw.mob_speed);
            else if (key == "resample_interval") want_double(raw.mob_resample);
            else if (key == "sigma") want_double(raw.mob_sigma);
            else handled = false;
        } else if (section == "service") {
            if (key == "policy") {
                if (value == "shannon") raw.pol_kind = PolicyKind::Shannon;
                else if (value == "truncated_shannon") raw.pol_kind = PolicyKind::TruncatedShannon;
                else if (value == "indicator") raw.pol_kind = PolicyKind::Indicator;
                else bad.add(line_no, "unknown service policy '" + value + "'");
            } else if (key == "threshold") want_double(raw.pol_threshold);
            else handled = false;
        } else if (section == "arrivals") {
            if (key == "kind") {
                if (value == "bernoulli") raw.arr_kind = ArrivalKind::Bernoulli;
                else if (value == "deterministic") raw.arr_kind = ArrivalKind::DeterministicRate;
                else bad.add(line_no, "unknown arrival kind '" + value + "'");
            } else if (key == "rate") {
                want_double(raw.arr_rate);
                raw.rate_line = line_no;
            } else handled = false;
        } else if (section == "schedule") {
            if (key == "tick") want_double(raw.cfg.tick);
            else if (key == "slot") {
                want_double(raw.cfg.slot);
                raw.slot_line = line_no;
            } else handled = false;
        } else if (section == "run") {
            if (key == "mode") {
                if (value == "single") raw.cfg.mode = RunMode::Single;
                else if (value == "interacting") raw.cfg.mode = RunMode::Interacting;
                else if (value == "static") raw.cfg.mode = RunMode::Static;
                else bad.add(line_no, "unknown run mode '" + value + "'");
            } else if (key == "horizon_slots") {
                if (!parse_i64(value, raw.cfg.horizon_slots)) {
                    bad.add(line_no, "invalid integer '" + value + "' for '" + key + "'");
                }
            } else if (key == "seed") {
                if (!parse_u64(value, raw.cfg.seed)) {
                    bad.add(line_no, "invalid seed '" + value + "'");
                }
            } else if (key == "replicates") {
                std::int64_t r = 0;
                if (!parse_i64(value, r)) {
                    bad.add(line_no, "invalid integer '" + value + "' for '" + key + "'");
                } else {
                    raw.cfg.replicates = static_cast<int>(r);
                }
            } else if (key == "warmup_fraction") want_double(raw.cfg.warmup_fraction);
            else if (key == "record_traces") {
                if (!parse_bool(value, raw.cfg.record_traces)) {
                    bad.add(line_no, "invalid boolean '" + value + "' for '" + key + "'");
                }
            } else handled = false;
        } else if (section == "analytics") {
            if (key == "quantities") {
                raw.cfg.quantities.clear();
                std::size_t pos = 0;
                while (pos <= value.size()) {
                    auto comma = value.find(',', pos);
                    std::string item(trim(std::string_view(value).substr(
                        pos, comma == std::string::npos ? std::string::npos : comma - pos)));
                    if (!item.empty()) raw.cfg.quantities.push_back(std::move(item));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            } else handled = false;
        }
        if (!handled) bad.add(line_no, "unknown key '" + key + "' in [" + section + "]");
    }

    // Normalize grouped fields through the factory constructors so stray
    // fields of inactive kinds cannot leak into the config.
    try {
        if (raw.pl_kind == "bounded") {
            raw.cfg.pathloss = PathLoss::bounded(raw.pl_beta);
        } else if (raw.pl_kind == "powerlaw") {
            raw.cfg.pathloss = PathLoss::power_law(raw.pl_amplitude, raw.pl_beta, raw.pl_cap);
        } else {
            std::vector<double> radii;
            std::vector<double> gains;
            if (!parse_table_points(raw.pl_points, radii, gains)) {
                bad.add(raw.pl_points_line ? raw.pl_points_line : raw.pl_section_line,
                        "pathloss table needs points = r:gain,r:gain,...");
            } else {
                raw.cfg.pathloss = PathLoss::table(std::move(radii), std::move(gains));
            }
        }
    } catch (const std::exception& e) {
        bad.add(raw.pl_section_line, std::string("pathloss: ") + e.what());
    }

    raw.cfg.fading.kind = raw.fade_kind;
    raw.cfg.fading.mu = raw.fade_kind == FadeKind::Rayleigh ? raw.fade_mu : 1.0;
    raw.cfg.fading.coherence = raw.fade_coherence;

    switch (raw.mob_kind) {
        case MotionKind::Static:
            raw.cfg.mobility = MobilityModel::statics();
            break;
        case MotionKind::RandomDirection:
            raw.cfg.mobility = MobilityModel::random_direction(raw.mob_speed);
            break;
        case MotionKind::RandomWaypoint:
            raw.cfg.mobility = MobilityModel::random_waypoint(raw.mob_speed, raw.mob_resample);
            break;
        case MotionKind::Brownian:
            raw.cfg.mobility = MobilityModel::brownian(raw.mob_sigma);
            break;
    }

    raw.cfg.policy.kind = raw.pol_kind;
    raw.cfg.policy.threshold = raw.pol_kind == PolicyKind::Shannon ? 0.0 : raw.pol_threshold;
    raw.cfg.arrivals = {raw.arr_kind, raw.arr_rate};

    collect_semantic(raw.cfg, bad, raw.rate_line, raw.slot_line);
    if (!bad.empty()) throw ConfigError(std::move(bad.list));
    return raw.cfg;
}

std::string emit_config(const ExperimentConfig& c) {
    std::string out;
    auto kv = [&out](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += "\n";
    };

    out += "[arena]\n";
    kv("side", fmt(c.arena.side));
    out += "\n[process]\n";
    kv("intensity", fmt(c.intensity));
    out += "\n[link]\n";
    kv("distance", fmt(c.distance));
    kv("noise", fmt(c.noise));

    out += "\n[pathloss]\n";
    switch (c.pathloss.kind()) {
        case PathLoss::Kind::Bounded:
            kv("kind", "bounded");
            kv("beta", fmt(c.pathloss.beta()));
            break;
        case PathLoss::Kind::PowerLaw:
            kv("kind", "powerlaw");
            kv("amplitude", fmt(c.pathloss.amplitude()));
            kv("beta", fmt(c.pathloss.beta()));
            kv("cap_radius", fmt(c.pathloss.cap_radius()));
            break;
        case PathLoss::Kind::Table: {
            kv("kind", "table");
            std::string points;
            for (std::size_t i = 0; i < c.pathloss.radii().size(); ++i) {
                if (i) points += ",";
                points += fmt(c.pathloss.radii()[i]) + ":" + fmt(c.pathloss.gains()[i]);
            }
            kv("points", points);
            break;
        }
    }

    out += "\n[fading]\n";
    kv("kind", c.fading.kind == FadeKind::Rayleigh ? "rayleigh" : "deterministic");
    if (c.fading.kind == FadeKind::Rayleigh) kv("mu", fmt(c.fading.mu));
    kv("coherence", fmt(c.fading.coherence));

    out += "\n[mobility]\n";
    switch (c.mobility.kind) {
        case MotionKind::Static:
            kv("kind", "static");
            break;
        case MotionKind::RandomDirection:
            kv("kind", "random_direction");
            kv("speed", fmt(c.mobility.speed));
            break;
        case MotionKind::RandomWaypoint:
            kv("kind", "random_waypoint");
            kv("speed", fmt(c.mobility.speed));
            kv("resample_interval", fmt(c.mobility.resample_interval));
            break;
        case MotionKind::Brownian:
            kv("kind", "brownian");
            kv("sigma", fmt(c.mobility.sigma));
            break;
    }

    out += "\n[service]\n";
    switch (c.policy.kind) {
        case PolicyKind::Shannon:
            kv("policy", "shannon");
            break;
        case PolicyKind::TruncatedShannon:
            kv("policy", "truncated_shannon");
            kv("threshold", fmt(c.policy.threshold));
            break;
        case PolicyKind::Indicator:
            kv("policy", "indicator");
            kv("threshold", fmt(c.policy.threshold));
            break;
    }

    out += "\n[arrivals]\n";
    kv("kind", c.arrivals.kind == ArrivalKind::Bernoulli ? "bernoulli" : "deterministic");
    kv("rate", fmt(c.arrivals.rate));

    out += "\n[schedule]\n";
    kv("tick", fmt(c.tick));
    kv("slot", fmt(c.slot));

    out += "\n[run]\n";
    switch (c.mode) {
        case RunMode::Single:
            kv("mode", "single");
            break;
        case RunMode::Interacting:
            kv("mode", "interacting");
            break;
        case RunMode::Static:
            kv("mode", "static");
            break;
    }
    kv("horizon_slots", fmt(c.horizon_slots));
    kv("seed", fmt(c.seed));
    kv("replicates", fmt(static_cast<std::int64_t>(c.replicates)));
    kv("warmup_fraction", fmt(c.warmup_fraction));
    kv("record_traces", c.record_traces ? "true" : "false");

    if (!c.quantities.empty()) {
        out += "\n[analytics]\n";
        std::string joined;
        for (std::size_t i = 0; i < c.quantities.size(); ++i) {
            if (i) joined += ",";
            joined += c.quantities[i];
        }
        kv("quantities", joined);
    }
    return out;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& config) {
    Violations bad;
    collect_semantic(config, bad, 0, 0);
    if (!bad.empty()) throw ConfigError(std::move(bad.list));
}

}  // namespace mobiq
