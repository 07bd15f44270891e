#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mobiq/analytics.hpp"
#include "mobiq/config.hpp"
#include "mobiq/estimators.hpp"
#include "mobiq/presets.hpp"
#include "mobiq/queueing.hpp"

namespace py = pybind11;
using namespace mobiq;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "wireless queue simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::enum_<MotionKind>(m, "MotionKind")
        .value("Static", MotionKind::Static)
        .value("RandomDirection", MotionKind::RandomDirection)
        .value("RandomWaypoint", MotionKind::RandomWaypoint)
        .value("Brownian", MotionKind::Brownian);

    py::enum_<PolicyKind>(m, "PolicyKind")
        .value("Shannon", PolicyKind::Shannon)
        .value("TruncatedShannon", PolicyKind::TruncatedShannon)
        .value("Indicator", PolicyKind::Indicator);

    py::enum_<ArrivalKind>(m, "ArrivalKind")
        .value("Bernoulli", ArrivalKind::Bernoulli)
        .value("DeterministicRate", ArrivalKind::DeterministicRate);

    py::enum_<FadeKind>(m, "FadeKind")
        .value("Rayleigh", FadeKind::Rayleigh)
        .value("Deterministic", FadeKind::Deterministic);

    py::enum_<RunMode>(m, "RunMode")
        .value("Single", RunMode::Single)
        .value("Interacting", RunMode::Interacting)
        .value("Static", RunMode::Static);

    py::class_<Arena>(m, "Arena")
        .def(py::init<>())
        .def_readwrite("side", &Arena::side);

    py::class_<PathLoss>(m, "PathLoss")
        .def_static("bounded", &PathLoss::bounded, py::arg("beta"))
        .def_static("power_law", &PathLoss::power_law, py::arg("amplitude"), py::arg("beta"),
                    py::arg("cap_radius") = 0.0)
        .def("__call__", &PathLoss::operator())
        .def_property_readonly("beta", &PathLoss::beta);

    py::class_<FadingModel>(m, "FadingModel")
        .def(py::init<>())
        .def_readwrite("kind", &FadingModel::kind)
        .def_readwrite("mu", &FadingModel::mu)
        .def_readwrite("coherence", &FadingModel::coherence);

    py::class_<MobilityModel>(m, "MobilityModel")
        .def_static("statics", &MobilityModel::statics)
        .def_static("random_direction", &MobilityModel::random_direction, py::arg("speed"))
        .def_static("random_waypoint", &MobilityModel::random_waypoint, py::arg("speed"),
                    py::arg("resample_interval") = 1.0)
        .def_static("brownian", &MobilityModel::brownian, py::arg("sigma"))
        .def_readwrite("kind", &MobilityModel::kind)
        .def_readwrite("speed", &MobilityModel::speed)
        .def_readwrite("resample_interval", &MobilityModel::resample_interval)
        .def_readwrite("sigma", &MobilityModel::sigma);

    m.def("brownian_matching_speed", &brownian_matching_speed, py::arg("speed"), py::arg("dt"));

    py::class_<ServicePolicy>(m, "ServicePolicy")
        .def(py::init<>())
        .def_readwrite("kind", &ServicePolicy::kind)
        .def_readwrite("threshold", &ServicePolicy::threshold);

    py::class_<ArrivalProcess>(m, "ArrivalProcess")
        .def(py::init<>())
        .def_readwrite("kind", &ArrivalProcess::kind)
        .def_readwrite("rate", &ArrivalProcess::rate);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("arena", &ExperimentConfig::arena)
        .def_readwrite("intensity", &ExperimentConfig::intensity)
        .def_readwrite("distance", &ExperimentConfig::distance)
        .def_readwrite("noise", &ExperimentConfig::noise)
        .def_readwrite("pathloss", &ExperimentConfig::pathloss)
        .def_readwrite("fading", &ExperimentConfig::fading)
        .def_readwrite("mobility", &ExperimentConfig::mobility)
        .def_readwrite("policy", &ExperimentConfig::policy)
        .def_readwrite("arrivals", &ExperimentConfig::arrivals)
        .def_readwrite("tick", &ExperimentConfig::tick)
        .def_readwrite("slot", &ExperimentConfig::slot)
        .def_readwrite("mode", &ExperimentConfig::mode)
        .def_readwrite("horizon_slots", &ExperimentConfig::horizon_slots)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("replicates", &ExperimentConfig::replicates)
        .def_readwrite("warmup_fraction", &ExperimentConfig::warmup_fraction)
        .def_readwrite("record_traces", &ExperimentConfig::record_traces)
        .def_readwrite("quantities", &ExperimentConfig::quantities)
        .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("emit_config", &emit_config, py::arg("config"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("validate_config", &validate_config, py::arg("config"));

    py::class_<PacketRecord>(m, "PacketRecord")
        .def_readonly("id", &PacketRecord::id)
        .def_readonly("arrival_slot", &PacketRecord::arrival_slot)
        .def_readonly("departure_slot", &PacketRecord::departure_slot);

    m.def("packet_delays", &packet_delays, py::arg("packets"));

    py::class_<SingleQueueResult>(m, "SingleQueueResult")
        .def_property_readonly("workload",
                               [](const SingleQueueResult& r) { return as_array(r.workload); })
        .def_property_readonly("arrivals",
                               [](const SingleQueueResult& r) { return as_array(r.arrivals); })
        .def_property_readonly("services",
                               [](const SingleQueueResult& r) { return as_array(r.services); })
        .def_readonly("packets", &SingleQueueResult::packets)
        .def_readonly("censored", &SingleQueueResult::censored)
        .def_readonly("slot", &SingleQueueResult::slot)
        .def_readonly("warmup_slots", &SingleQueueResult::warmup_slots);

    m.def("run_single_queue", &run_single_queue, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<QueuePacket>(m, "QueuePacket")
        .def_readonly("queue_id", &QueuePacket::queue_id)
        .def_readonly("record", &QueuePacket::record);

    py::class_<InteractingResult>(m, "InteractingResult")
        .def_property_readonly(
            "mean_queue_length",
            [](const InteractingResult& r) { return as_array(r.mean_queue_length); })
        .def_property_readonly(
            "tagged_workload",
            [](const InteractingResult& r) { return as_array(r.tagged_workload); })
        .def_readonly("packets", &InteractingResult::packets)
        .def_readonly("censored", &InteractingResult::censored)
        .def_readonly("n_queues", &InteractingResult::n_queues)
        .def_readonly("warmup_slots", &InteractingResult::warmup_slots);

    m.def("run_interacting", &run_interacting, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<SeriesResult>(m, "SeriesResult")
        .def_property_readonly("interference",
                               [](const SeriesResult& r) { return as_array(r.interference); })
        .def_property_readonly("sinr", [](const SeriesResult& r) { return as_array(r.sinr); })
        .def_readonly("dt", &SeriesResult::dt);

    m.def("interference_series", &interference_series, py::arg("config"), py::arg("ticks"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<BatchMeans>(m, "BatchMeans")
        .def_readonly("mean", &BatchMeans::mean)
        .def_readonly("std_error", &BatchMeans::std_error)
        .def_readonly("ci_lo", &BatchMeans::ci_lo)
        .def_readonly("ci_hi", &BatchMeans::ci_hi)
        .def_readonly("n_batches", &BatchMeans::n_batches);

    m.def("batch_means",
          [](const std::vector<double>& series, int n_batches) {
              return batch_means(series, n_batches);
          },
          py::arg("series"), py::arg("n_batches") = 30);

    py::class_<EmpiricalCdf>(m, "EmpiricalCdf")
        .def(py::init<std::vector<double>>(), py::arg("samples"))
        .def("__call__", &EmpiricalCdf::operator())
        .def("quantile", &EmpiricalCdf::quantile);

    m.def("autocorrelation",
          [](const std::vector<double>& series, int max_lag) {
              return as_array(autocorrelation(series, max_lag));
          },
          py::arg("series"), py::arg("max_lag"));

    m.def("stop_loss",
          [](const std::vector<double>& series, double a) { return stop_loss(series, a); },
          py::arg("series"), py::arg("threshold"));

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("intensity", &SystemParams::intensity)
        .def_readwrite("distance", &SystemParams::distance)
        .def_readwrite("noise", &SystemParams::noise)
        .def_readwrite("mu", &SystemParams::mu)
        .def_readwrite("pathloss", &SystemParams::pathloss)
        .def_readwrite("interferer_fading", &SystemParams::interferer_fading)
        .def_readwrite("threshold", &SystemParams::threshold)
        .def_readwrite("arrival_rate", &SystemParams::arrival_rate)
        .def_readwrite("slot", &SystemParams::slot);

    m.def("system_params", &system_params, py::arg("config"));
    m.def("prob_unstable_static",
          [](const SystemParams& p) { return prob_unstable_static(p); }, py::arg("params"));
    m.def("mean_service_rate_shannon",
          [](double intensity, double distance, double beta) {
              return mean_service_rate_shannon(intensity, distance, beta);
          },
          py::arg("intensity"), py::arg("distance"), py::arg("beta"));

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("value", &McEstimate::value)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("ci_lo", &McEstimate::ci_lo)
        .def_readonly("ci_hi", &McEstimate::ci_hi)
        .def_readonly("samples", &McEstimate::samples);

    m.def("mean_service_rate_empirical",
          [](const ExperimentConfig& cfg, std::int64_t samples) {
              return mean_service_rate_empirical(cfg, samples);
          },
          py::arg("config"), py::arg("samples") = 100000,
          py::call_guard<py::gil_scoped_release>());

    m.def("prob_level_crossing",
          [](const SystemParams& p) { return prob_level_crossing(p); }, py::arg("params"));
    m.def("joint_level_crossing",
          [](const SystemParams& p, const MobilityModel& mob, double lag) {
              return joint_level_crossing(p, mob, lag);
          },
          py::arg("params"), py::arg("mobility"), py::arg("lag"));
    m.def("conditional_gain",
          [](const SystemParams& p, const MobilityModel& mob, double lag) {
              return conditional_gain(p, mob, lag);
          },
          py::arg("params"), py::arg("mobility"), py::arg("lag"));
    m.def("corr_coefficient",
          [](const MobilityModel& mob, double lag, const PathLoss& pl, double fade_m2) {
              return corr_coefficient(mob, lag, pl, fade_m2);
          },
          py::arg("mobility"), py::arg("lag"), py::arg("pathloss"),
          py::arg("fade_second_moment"));
    m.def("cov_service",
          [](const SystemParams& p, const MobilityModel& mob, int lag_slots) {
              return cov_service(p, mob, lag_slots);
          },
          py::arg("params"), py::arg("mobility"), py::arg("lag_slots"));

    py::class_<HeavyTraffic>(m, "HeavyTraffic")
        .def_readonly("workload", &HeavyTraffic::workload)
        .def_readonly("rho", &HeavyTraffic::rho)
        .def_readonly("c_a2", &HeavyTraffic::c_a2)
        .def_readonly("c_s2", &HeavyTraffic::c_s2)
        .def_readonly("k_used", &HeavyTraffic::k_used);

    m.def("heavy_traffic_workload",
          [](const SystemParams& p, const MobilityModel& mob, int k_max, double tol) {
              return heavy_traffic_workload(p, mob, k_max, tol);
          },
          py::arg("params"), py::arg("mobility"), py::arg("k_max") = 4096,
          py::arg("tol") = 1e-3);

    m.def("preset_names", [] {
        std::vector<std::string> names;
        for (const auto& p : preset_list()) names.emplace_back(p.name);
        return names;
    });
    m.def("preset_text", [](const std::string& name) {
        const Preset* p = find_preset(name);
        if (!p) throw py::key_error("unknown preset: " + name);
        return std::string(p->text);
    });
}
