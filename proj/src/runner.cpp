#include "mobiq/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "mobiq/analytics.hpp"
#include "mobiq/csvio.hpp"
#include "mobiq/estimators.hpp"
#include "mobiq/queueing.hpp"
#include "mobiq/rng.hpp"

namespace mobiq {
namespace {

constexpr std::string_view kVersion = "0.1.0";

struct MetricValue {
    std::string name;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Batch-means CI when the series is long enough, degenerate CI otherwise.
MetricValue series_metric(std::string name, std::span<const double> series) {
    MetricValue m{std::move(name)};
    if (series.size() >= 4) {
        const int k = static_cast<int>(std::min<std::size_t>(30, series.size() / 2));
        const BatchMeans bm = batch_means(series, k);
        m.value = bm.mean;
        m.lo = bm.ci_lo;
        m.hi = bm.ci_hi;
    } else {
        double sum = 0.0;
        for (double x : series) sum += x;
        m.value = series.empty() ? 0.0 : sum / static_cast<double>(series.size());
        m.lo = m.hi = m.value;
    }
    return m;
}

MetricValue count_metric(std::string name, double value) {
    return MetricValue{std::move(name), value, value, value};
}

std::span<const double> post_warmup(const std::vector<double>& series, std::int64_t warmup,
                                    bool skip_initial) {
    const std::size_t offset = static_cast<std::size_t>(warmup) + (skip_initial ? 1 : 0);
    if (offset >= series.size()) return {};
    return std::span<const double>(series).subspan(offset);
}

std::vector<double> departed_delays(const std::vector<PacketRecord>& packets,
                                    std::int64_t warmup) {
    std::vector<double> delays;
    for (const auto& p : packets) {
        if (p.departure_slot >= 0 && p.arrival_slot >= warmup) {
            delays.push_back(static_cast<double>(p.departure_slot - p.arrival_slot));
        }
    }
    return delays;
}

struct JobOutput {
    std::vector<MetricValue> metrics;
};

CsvTable trajectory_table(const SingleQueueResult& res) {
    CsvTable t;
    t.columns = {"slot", "workload", "arrival", "service"};
    const std::size_t slots = res.arrivals.size();
    for (std::size_t n = 0; n < slots; ++n) {
        t.add_row({csv_number(static_cast<long long>(n)), csv_number(res.workload[n + 1]),
                   csv_number(res.arrivals[n]), csv_number(res.services[n])});
    }
    return t;
}

CsvTable delays_table(const std::vector<PacketRecord>& packets) {
    CsvTable t;
    t.columns = {"packet_id", "arrival_slot", "departure_slot", "delay_slots"};
    for (const auto& p : packets) {
        if (p.departure_slot < 0) continue;
        t.add_row({csv_number(static_cast<long long>(p.id)),
                   csv_number(static_cast<long long>(p.arrival_slot)),
                   csv_number(static_cast<long long>(p.departure_slot)),
                   csv_number(static_cast<long long>(p.departure_slot - p.arrival_slot))});
    }
    return t;
}

CsvTable queue_delays_table(const std::vector<QueuePacket>& packets) {
    CsvTable t;
    t.columns = {"queue_id", "packet_id", "arrival_slot", "departure_slot", "delay_slots"};
    for (const auto& qp : packets) {
        const auto& p = qp.record;
        if (p.departure_slot < 0) continue;
        t.add_row({csv_number(static_cast<long long>(qp.queue_id)),
                   csv_number(static_cast<long long>(p.id)),
                   csv_number(static_cast<long long>(p.arrival_slot)),
                   csv_number(static_cast<long long>(p.departure_slot)),
                   csv_number(static_cast<long long>(p.departure_slot - p.arrival_slot))});
    }
    return t;
}

CsvTable queues_table(const InteractingResult& res) {
    CsvTable t;
    t.columns = {"slot", "mean_queue_length", "tagged_workload"};
    for (std::size_t n = 0; n < res.mean_queue_length.size(); ++n) {
        t.add_row({csv_number(static_cast<long long>(n)), csv_number(res.mean_queue_length[n]),
                   csv_number(res.tagged_workload[n])});
    }
    return t;
}

JobOutput execute_job(const ExperimentConfig& config, const std::string& run_dir) {
    JobOutput out;
    if (config.mode == RunMode::Interacting) {
        const InteractingResult res = run_interacting(config);
        out.metrics.push_back(series_metric(
            "mean_queue_length", post_warmup(res.mean_queue_length, res.warmup_slots, false)));
        out.metrics.push_back(series_metric(
            "tagged_mean_workload", post_warmup(res.tagged_workload, res.warmup_slots, false)));
        std::vector<PacketRecord> records;
        records.reserve(res.packets.size());
        for (const auto& qp : res.packets) records.push_back(qp.record);
        const auto delays = departed_delays(records, res.warmup_slots);
        out.metrics.push_back(series_metric("mean_delay_slots", delays));
        out.metrics.push_back(count_metric("delivered_packets",
                                           static_cast<double>(delays.size())));
        out.metrics.push_back(count_metric("censored_packets",
                                           static_cast<double>(res.censored)));
        write_csv_file(run_dir + "/delays.csv", queue_delays_table(res.packets));
        if (config.record_traces) {
            write_csv_file(run_dir + "/queues.csv", queues_table(res));
        }
        return out;
    }

    const SingleQueueResult res = run_single_queue(config);
    out.metrics.push_back(
        series_metric("mean_workload", post_warmup(res.workload, res.warmup_slots, true)));
    if (config.arrivals.kind == ArrivalKind::Bernoulli) {
        const auto delays = departed_delays(res.packets, res.warmup_slots);
        out.metrics.push_back(series_metric("mean_delay_slots", delays));
        if (!delays.empty()) {
            EmpiricalCdf cdf(delays);
            out.metrics.push_back(count_metric("p99_delay_slots", cdf.quantile(0.99)));
        }
        out.metrics.push_back(count_metric("delivered_packets",
                                           static_cast<double>(delays.size())));
        out.metrics.push_back(count_metric("censored_packets",
                                           static_cast<double>(res.censored)));
        write_csv_file(run_dir + "/delays.csv", delays_table(res.packets));
    }
    if (config.record_traces) {
        write_csv_file(run_dir + "/trajectory.csv", trajectory_table(res));
    }
    return out;
}

std::uint64_t replicate_seed(std::uint64_t base, int replicate) {
    if (replicate == 0) return base;
    return derive_stream(base, "replicate", static_cast<std::uint64_t>(replicate)).next();
}

struct Job {
    std::size_t point = 0;
    int replicate = 0;
    ExperimentConfig config;
    std::string dir;
    std::string label;
};

// Runs jobs on a small thread pool; outputs land in job order regardless of
// scheduling, which keeps every derived file byte-identical across --workers.
std::vector<JobOutput> run_jobs(const std::vector<Job>& jobs, int workers) {
    std::vector<JobOutput> outputs(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    unsigned n = workers > 0 ? static_cast<unsigned>(workers)
                             : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(jobs.size()));
    if (n <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            outputs[i] = execute_job(jobs[i].config, jobs[i].dir);
        }
        return outputs;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                outputs[i] = execute_job(jobs[i].config, jobs[i].dir);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return outputs;
}

// Aggregates replicate metric values: a t-interval across replicates when
// there are several, the replicate's own batch CI otherwise.
MetricValue aggregate(const std::vector<const MetricValue*>& reps) {
    if (reps.size() == 1) return *reps.front();
    MetricValue out{reps.front()->name};
    const double n = static_cast<double>(reps.size());
    double sum = 0.0;
    for (const auto* m : reps) sum += m->value;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto* m : reps) ss += (m->value - mean) * (m->value - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    const boost::math::students_t dist(n - 1.0);
    const double half = se * boost::math::quantile(dist, 0.975);
    out.value = mean;
    out.lo = mean - half;
    out.hi = mean + half;
    return out;
}

std::string format_speed_token(double v) {
    std::string s = csv_number(v);
    return s;
}

void write_run_log(const std::string& out_dir, std::string_view command,
                   const ExperimentConfig& base, int workers, const std::vector<Job>& jobs) {
    std::string log;
    log += "mobiq ";
    log += kVersion;
    log += "\ncommand ";
    log += command;
    log += "\nseed " + csv_number(static_cast<long long>(base.seed));
    log += "\nworkers " + csv_number(static_cast<long long>(workers));
    log += "\njobs " + csv_number(static_cast<long long>(jobs.size()));
    log += "\n";
    for (const auto& job : jobs) {
        log += "job point=" + job.label +
               " replicate=" + csv_number(static_cast<long long>(job.replicate)) +
               " seed=" + csv_number(static_cast<long long>(job.config.seed)) + "\n";
    }
    write_text_file(out_dir + "/run.log", log);
}

std::string write_summary(const std::string& out_dir, const std::vector<Job>& jobs,
                          const std::vector<JobOutput>& outputs,
                          const std::vector<std::size_t>& point_first_job,
                          int replicates) {
    CsvTable t;
    t.columns = {"metric", "value",        "ci_lo",      "ci_hi",
                 "model",  "velocity",     "arrival_rate", "replicates"};
    for (std::size_t p = 0; p < point_first_job.size(); ++p) {
        const std::size_t first = point_first_job[p];
        const Job& lead = jobs[first];
        // Metric sets can differ across replicates only in degenerate cases
        // (e.g. no delivered packets); aggregate by name from the lead order.
        for (const auto& metric : outputs[first].metrics) {
            std::vector<const MetricValue*> reps;
            for (int r = 0; r < replicates; ++r) {
                for (const auto& m : outputs[first + static_cast<std::size_t>(r)].metrics) {
                    if (m.name == metric.name) {
                        reps.push_back(&m);
                        break;
                    }
                }
            }
            const MetricValue agg = aggregate(reps);
            t.add_row({agg.name, csv_number(agg.value), csv_number(agg.lo), csv_number(agg.hi),
                       model_token(lead.config), csv_number(velocity_column(lead.config)),
                       csv_number(lead.config.arrivals.rate),
                       csv_number(static_cast<long long>(replicates))});
        }
    }
    const std::string path = out_dir + "/summary.csv";
    write_csv_file(path, t);
    return path;
}

std::string run_points(const ExperimentConfig& base, const std::vector<ExperimentConfig>& points,
                       const std::vector<std::string>& labels, std::string_view command,
                       const RunOptions& options) {
    std::vector<Job> jobs;
    std::vector<std::size_t> point_first_job;
    for (std::size_t p = 0; p < points.size(); ++p) {
        point_first_job.push_back(jobs.size());
        for (int r = 0; r < points[p].replicates; ++r) {
            Job job;
            job.point = p;
            job.replicate = r;
            job.config = points[p];
            job.config.seed = replicate_seed(points[p].seed, r);
            job.label = labels[p];
            job.dir = options.out_dir + "/runs/" + labels[p] + "/rep" + std::to_string(r);
            jobs.push_back(std::move(job));
        }
    }
    write_text_file(options.out_dir + "/config.ini", emit_config(base));
    const auto outputs = run_jobs(jobs, options.workers);
    write_run_log(options.out_dir, command, base, options.workers, jobs);
    return write_summary(options.out_dir, jobs, outputs, point_first_job, base.replicates);
}

}  // namespace

SweepAxis parse_sweep_axis(const std::string& axis, const std::vector<std::string>& values) {
    SweepAxis out;
    std::vector<ConfigViolation> bad;
    if (values.empty()) bad.push_back({0, "sweep needs at least one value"});
    auto numeric = [&](const char* what) {
        std::vector<double> parsed;
        for (const auto& v : values) {
            try {
                parsed.push_back(parse_csv_number(v));
            } catch (const IoError&) {
                bad.push_back({0, std::string(what) + " value is not a number: " + v});
            }
        }
        return parsed;
    };
    if (axis == "velocity") {
        out.kind = SweepAxisKind::Velocity;
        out.numeric = numeric("velocity");
        if (bad.empty()) {
            const double base = out.numeric.front();
            if (!(base > 0.0)) bad.push_back({0, "velocities must be positive"});
            for (std::size_t i = 0; bad.empty() && i < out.numeric.size(); ++i) {
                const double v = out.numeric[i];
                if (i > 0 && !(v > out.numeric[i - 1])) {
                    bad.push_back({0, "velocities must be strictly ascending"});
                    break;
                }
                const double ratio = v / base;
                if (std::abs(ratio - std::nearbyint(ratio)) > 1e-9 * ratio) {
                    bad.push_back({0, "velocity " + values[i] +
                                          " is not an integer multiple of the base " +
                                          values.front()});
                    break;
                }
            }
        }
    } else if (axis == "mobility-model") {
        out.kind = SweepAxisKind::Model;
        for (const auto& v : values) {
            if (v != "static" && v != "random_direction" && v != "random_waypoint" &&
                v != "brownian") {
                bad.push_back({0, "unknown mobility model: " + v});
            }
            out.models.push_back(v);
        }
    } else if (axis == "lambda") {
        out.kind = SweepAxisKind::Lambda;
        out.numeric = numeric("lambda");
        for (double v : out.numeric) {
            if (!(v >= 0.0)) bad.push_back({0, "lambda must be nonnegative"});
        }
    } else if (axis == "rho") {
        out.kind = SweepAxisKind::Rho;
        out.numeric = numeric("rho");
        for (double v : out.numeric) {
            if (!(v > 0.0 && v < 1.0)) bad.push_back({0, "rho must lie in (0, 1)"});
        }
    } else {
        bad.push_back({0, "unknown sweep axis: " + axis +
                              " (expected velocity, mobility-model, lambda or rho)"});
    }
    if (!bad.empty()) throw ConfigError(std::move(bad));
    return out;
}

ExperimentConfig apply_sweep_point(const ExperimentConfig& base, const SweepAxis& axis,
                                   std::size_t index) {
    ExperimentConfig cfg = base;
    switch (axis.kind) {
        case SweepAxisKind::Velocity: {
            const double v = axis.numeric.at(index);
            switch (cfg.mobility.kind) {
                case MotionKind::Static:
                    throw ConfigError({{0, "velocity sweep needs a moving mobility model"}});
                case MotionKind::RandomDirection:
                    cfg.mobility = MobilityModel::random_direction(v);
                    break;
                case MotionKind::RandomWaypoint:
                    cfg.mobility =
                        MobilityModel::random_waypoint(v, cfg.mobility.resample_interval);
                    break;
                case MotionKind::Brownian:
                    cfg.mobility = brownian_matching_speed(v, cfg.tick);
                    break;
            }
            break;
        }
        case SweepAxisKind::Model: {
            const std::string& token = axis.models.at(index);
            const double speed = std::max(cfg.mobility.speed,
                                          velocity_column(cfg));  // carry matched speed
            if (token == "static") {
                cfg.mobility = MobilityModel::statics();
            } else if (token == "random_direction") {
                cfg.mobility = MobilityModel::random_direction(speed);
            } else if (token == "random_waypoint") {
                cfg.mobility = MobilityModel::random_waypoint(
                    speed, base.mobility.resample_interval > 0.0
                               ? base.mobility.resample_interval
                               : 1.0);
            } else {
                cfg.mobility = brownian_matching_speed(speed, cfg.tick);
            }
            break;
        }
        case SweepAxisKind::Lambda:
            cfg.arrivals.rate = axis.numeric.at(index);
            break;
        case SweepAxisKind::Rho: {
            if (cfg.policy.kind != PolicyKind::Indicator) {
                throw ConfigError({{0, "rho sweep requires the indicator policy"}});
            }
            const double p = prob_level_crossing(system_params(cfg));
            cfg.arrivals.rate = axis.numeric.at(index) * p / cfg.slot;
            break;
        }
    }
    validate_config(cfg);
    return cfg;
}

std::string sweep_point_label(const SweepAxis& axis, std::size_t index) {
    switch (axis.kind) {
        case SweepAxisKind::Velocity:
            return "v" + format_speed_token(axis.numeric.at(index));
        case SweepAxisKind::Model:
            return axis.models.at(index);
        case SweepAxisKind::Lambda:
            return "lambda" + format_speed_token(axis.numeric.at(index));
        case SweepAxisKind::Rho:
            return "rho" + format_speed_token(axis.numeric.at(index));
    }
    return "point" + std::to_string(index);
}

std::string model_token(const ExperimentConfig& config) {
    switch (config.mobility.kind) {
        case MotionKind::Static: return "static";
        case MotionKind::RandomDirection: return "random_direction";
        case MotionKind::RandomWaypoint: return "random_waypoint";
        case MotionKind::Brownian: return "brownian";
    }
    return "unknown";
}

double velocity_column(const ExperimentConfig& config) {
    switch (config.mobility.kind) {
        case MotionKind::Static:
            return 0.0;
        case MotionKind::RandomDirection:
        case MotionKind::RandomWaypoint:
            return config.mobility.speed;
        case MotionKind::Brownian: {
            // Invert the per-tick matched-speed calibration.
            const double step = config.mobility.sigma * std::sqrt(config.tick);
            return step * std::sqrt(std::acos(-1.0) / 2.0) / config.tick;
        }
    }
    return 0.0;
}

std::string run_simulate(const ExperimentConfig& config, const RunOptions& options) {
    return run_points(config, {config}, {"base"}, "simulate", options);
}

std::string run_sweep(const ExperimentConfig& config, const SweepAxis& axis,
                      const RunOptions& options) {
    std::vector<ExperimentConfig> points;
    std::vector<std::string> labels;
    const std::size_t n = axis.kind == SweepAxisKind::Model ? axis.models.size()
                                                            : axis.numeric.size();
    for (std::size_t i = 0; i < n; ++i) {
        points.push_back(apply_sweep_point(config, axis, i));
        labels.push_back(sweep_point_label(axis, i));
    }
    const std::string summary = run_points(config, points, labels, "sweep", options);
    if (!config.quantities.empty()) {
        run_analyze_sweep(config, axis, options);
    }
    return summary;
}

namespace {

struct QuantityRow {
    std::string quantity;
    double value = 0.0;
    double abs_error = 0.0;
};

bool uses_time_lag(const std::string& q) {
    return q == "joint_level_crossing" || q == "conditional_gain" || q == "corr_coefficient";
}

std::vector<std::string> applicable_quantities(const ExperimentConfig& cfg) {
    std::vector<std::string> q;
    q.push_back("prob_level_crossing");
    q.push_back("prob_unstable_static");
    if (cfg.pathloss.kind() == PathLoss::Kind::PowerLaw && cfg.noise == 0.0 &&
        cfg.intensity > 0.0 && cfg.pathloss.beta() > 2.0) {
        q.push_back("mean_service_rate_shannon");
    }
    q.push_back("joint_level_crossing");
    q.push_back("conditional_gain");
    q.push_back("corr_coefficient");
    const bool unit_slots = std::abs(cfg.slot - 1.0) <= 1e-12;
    if (unit_slots) q.push_back("cov_service");
    const double p_arr = cfg.arrivals.rate * cfg.slot;
    if (unit_slots && cfg.policy.kind == PolicyKind::Indicator && p_arr > 0.0 && p_arr < 1.0) {
        q.push_back("heavy_traffic_workload");
    }
    return q;
}

QuantityRow evaluate_quantity(const std::string& q, const ExperimentConfig& cfg) {
    const SystemParams params = system_params(cfg);
    const QuadratureOptions opts;
    const double lag = cfg.slot;
    const bool mc_kernel = cfg.mobility.kind == MotionKind::RandomWaypoint;
    auto det = [&](double v) {
        return QuantityRow{q, v, (mc_kernel && uses_time_lag(q) ? opts.kernel_se_tol * std::abs(v)
                                                                : 1e-8 * std::max(1.0, std::abs(v)))};
    };
    if (q == "prob_level_crossing") return det(prob_level_crossing(params));
    if (q == "prob_unstable_static") return det(prob_unstable_static(params));
    if (q == "mean_service_rate_shannon") {
        return det(mean_service_rate_shannon(cfg.intensity, cfg.distance, cfg.pathloss.beta()));
    }
    if (q == "mean_service_rate_empirical") {
        const McEstimate est = mean_service_rate_empirical(cfg);
        return QuantityRow{q, est.value, est.std_error};
    }
    if (q == "joint_level_crossing") {
        return det(joint_level_crossing(params, cfg.mobility, lag));
    }
    if (q == "conditional_gain") return det(conditional_gain(params, cfg.mobility, lag));
    if (q == "corr_coefficient") {
        return det(corr_coefficient(cfg.mobility, lag, cfg.pathloss,
                                    fade_second_moment(cfg.fading)));
    }
    if (q == "cov_service") return det(cov_service(params, cfg.mobility, 1));
    if (q == "heavy_traffic_workload") {
        return det(heavy_traffic_workload(params, cfg.mobility).workload);
    }
    throw ConfigError({{0, "unknown analysis quantity: " + q}});
}

AnalyzeOutput analyze_points(const ExperimentConfig& base,
                             const std::vector<ExperimentConfig>& points,
                             const RunOptions& options) {
    CsvTable t;
    t.columns = {"quantity", "model", "velocity", "lag", "value", "abs_error_estimate"};
    std::string echo;
    for (const auto& cfg : points) {
        const std::vector<std::string> list =
            cfg.quantities.empty() ? applicable_quantities(cfg) : cfg.quantities;
        for (const auto& q : list) {
            const QuantityRow row = evaluate_quantity(q, cfg);
            const std::string lag_cell =
                (uses_time_lag(q) || q == "cov_service" || q == "heavy_traffic_workload")
                    ? csv_number(cfg.slot)
                    : "0";
            t.add_row({row.quantity, model_token(cfg), csv_number(velocity_column(cfg)),
                       lag_cell, csv_number(row.value), csv_number(row.abs_error)});
            echo += row.quantity + " " + model_token(cfg) + " v=" +
                    csv_number(velocity_column(cfg)) + " -> " + csv_number(row.value) + "\n";
        }
    }
    write_text_file(options.out_dir + "/config.ini", emit_config(base));
    const std::string path = options.out_dir + "/analyze.csv";
    write_csv_file(path, t);
    return AnalyzeOutput{path, std::move(echo)};
}

}  // namespace

AnalyzeOutput run_analyze(const ExperimentConfig& config, const RunOptions& options) {
    return analyze_points(config, {config}, options);
}

AnalyzeOutput run_analyze_sweep(const ExperimentConfig& config, const SweepAxis& axis,
                                const RunOptions& options) {
    std::vector<ExperimentConfig> points;
    const std::size_t n = axis.kind == SweepAxisKind::Model ? axis.models.size()
                                                            : axis.numeric.size();
    for (std::size_t i = 0; i < n; ++i) {
        points.push_back(apply_sweep_point(config, axis, i));
    }
    return analyze_points(config, points, options);
}

}  // namespace mobiq
