#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "secalloc/experiments.hpp"
#include "secalloc/io.hpp"

namespace py = pybind11;
using namespace secalloc;

namespace pybind11::detail {

// TimeValue crosses the boundary as a plain int of microseconds.
template <>
struct type_caster<TimeValue> {
    PYBIND11_TYPE_CASTER(TimeValue, const_name("int"));

    bool load(handle src, bool) {
        if (!PyLong_Check(src.ptr()))
            return false;
        value.us = src.cast<std::int64_t>();
        return true;
    }
    static handle cast(TimeValue v, return_value_policy, handle) {
        return PyLong_FromLongLong(v.us);
    }
};

// Rational crosses the boundary as fractions.Fraction.
template <>
struct type_caster<Rational> {
    PYBIND11_TYPE_CASTER(Rational, const_name("Fraction"));

    bool load(handle src, bool) {
        try {
            if (PyLong_Check(src.ptr())) {
                value = Rational(std::string(py::str(src)));
                value.canonicalize();
                return true;
            }
            if (PyFloat_Check(src.ptr())) {
                value = Rational(src.cast<double>());
                value.canonicalize();
                return true;
            }
            if (py::isinstance<py::str>(src)) {
                value = rational_from_string(src.cast<std::string>());
                return true;
            }
            if (py::hasattr(src, "numerator") && py::hasattr(src, "denominator")) {
                std::string num(py::str(src.attr("numerator")));
                std::string den(py::str(src.attr("denominator")));
                value = Rational(mpz_class(num), mpz_class(den));
                value.canonicalize();
                return true;
            }
        } catch (const std::exception&) {
            return false;
        }
        return false;
    }
    static handle cast(const Rational& q, return_value_policy, handle) {
        py::object fraction = py::module_::import("fractions").attr("Fraction");
        return fraction(py::str(q.get_str())).release();
    }
};

} // namespace pybind11::detail

namespace {

const char* status_name(AllocationStatus status) {
    switch (status) {
    case AllocationStatus::ok: return "ok";
    case AllocationStatus::unschedulable: return "unschedulable";
    case AllocationStatus::limit_exceeded: return "limit_exceeded";
    }
    return "unknown";
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Security-task allocation for partitioned fixed-priority multicore systems";

    py::class_<RealTimeTask>(m, "RealTimeTask")
        .def(py::init([](std::string id, TimeValue wcet, TimeValue period) {
                 return RealTimeTask{std::move(id), wcet, period, period, -1};
             }),
             py::arg("id"), py::arg("wcet_us"), py::arg("period_us"))
        .def_readwrite("id", &RealTimeTask::id)
        .def_readwrite("wcet_us", &RealTimeTask::wcet)
        .def_readwrite("period_us", &RealTimeTask::period)
        .def_readwrite("deadline_us", &RealTimeTask::deadline)
        .def_readwrite("priority", &RealTimeTask::priority)
        .def("utilization", &RealTimeTask::utilization)
        .def("__repr__", [](const RealTimeTask& t) {
            return "RealTimeTask(" + t.id + ", C=" + std::to_string(t.wcet.us) +
                   "us, T=" + std::to_string(t.period.us) + "us)";
        });

    py::class_<SecurityTask>(m, "SecurityTask")
        .def(py::init([](std::string id, TimeValue wcet, TimeValue desired, TimeValue max_p,
                         Rational weight) {
                 return SecurityTask{std::move(id), wcet, desired, max_p, std::move(weight), -1};
             }),
             py::arg("id"), py::arg("wcet_us"), py::arg("desired_period_us"),
             py::arg("max_period_us"), py::arg("weight") = Rational(1))
        .def_readwrite("id", &SecurityTask::id)
        .def_readwrite("wcet_us", &SecurityTask::wcet)
        .def_readwrite("desired_period_us", &SecurityTask::desired_period)
        .def_readwrite("max_period_us", &SecurityTask::max_period)
        .def_readwrite("weight", &SecurityTask::weight)
        .def_readwrite("priority", &SecurityTask::priority)
        .def("desired_frequency", &SecurityTask::desired_frequency)
        .def("__repr__", [](const SecurityTask& t) {
            return "SecurityTask(" + t.id + ", C=" + std::to_string(t.wcet.us) + "us)";
        });

    py::class_<Platform>(m, "Platform")
        .def(py::init<>())
        .def(py::init([](int cores, std::map<std::string, int> partition) {
                 return Platform{cores, std::move(partition)};
             }),
             py::arg("core_count"), py::arg("rt_partition") = std::map<std::string, int>{})
        .def_readwrite("core_count", &Platform::core_count)
        .def_readwrite("rt_partition", &Platform::rt_partition);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def(py::init([](Platform platform, std::vector<RealTimeTask> rt,
                         std::vector<SecurityTask> sec) {
                 return SystemConfig{std::move(platform), std::move(rt), std::move(sec)};
             }),
             py::arg("platform"), py::arg("rt_tasks"), py::arg("sec_tasks"))
        .def_readwrite("platform", &SystemConfig::platform)
        .def_readwrite("rt_tasks", &SystemConfig::rt_tasks)
        .def_readwrite("sec_tasks", &SystemConfig::sec_tasks);

    py::class_<Allocation>(m, "Allocation")
        .def(py::init<>())
        .def_readwrite("assignment", &Allocation::assignment)
        .def_readwrite("periods", &Allocation::periods)
        .def_readwrite("tightness", &Allocation::tightness);

    py::class_<Violation>(m, "Violation")
        .def_readonly("code", &Violation::code)
        .def_readonly("message", &Violation::message)
        .def("__repr__", [](const Violation& v) { return "Violation(" + v.code + ")"; });

    py::class_<PeriodSolution>(m, "PeriodSolution")
        .def_readonly("period_us", &PeriodSolution::period)
        .def_readonly("tightness", &PeriodSolution::tightness)
        .def_readonly("slack", &PeriodSolution::slack);

    py::class_<AllocationOutcome>(m, "AllocationOutcome")
        .def_property_readonly("status",
                               [](const AllocationOutcome& o) { return status_name(o.status); })
        .def_property_readonly("schedulable", &AllocationOutcome::schedulable)
        .def_property_readonly(
            "allocation",
            [](const AllocationOutcome& o) -> py::object {
                return o.allocation ? py::cast(*o.allocation) : py::none();
            })
        .def_readonly("failed_task", &AllocationOutcome::failed_task)
        .def_readonly("objective", &AllocationOutcome::objective)
        .def_readonly("per_core_security_util", &AllocationOutcome::per_core_security_util)
        .def_readonly("platform", &AllocationOutcome::platform);

    py::class_<GenParams>(m, "GenParams")
        .def(py::init<>())
        .def_readwrite("cores", &GenParams::cores)
        .def_readwrite("rt_count_range", &GenParams::rt_count_range)
        .def_readwrite("sec_count_range", &GenParams::sec_count_range)
        .def_readwrite("rt_period_range_us", &GenParams::rt_period_range_us)
        .def_readwrite("sec_des_period_range_us", &GenParams::sec_des_period_range_us)
        .def_readwrite("sec_max_period_factor", &GenParams::sec_max_period_factor)
        .def_readwrite("total_rt_util", &GenParams::total_rt_util)
        .def_readwrite("sec_util_fraction", &GenParams::sec_util_fraction)
        .def_readwrite("rt_period_log_uniform", &GenParams::rt_period_log_uniform)
        .def_readwrite("redraw_limit", &GenParams::redraw_limit)
        .def_readwrite("seed", &GenParams::seed);

    py::class_<SweepEntry>(m, "SweepEntry")
        .def_readonly("point_index", &SweepEntry::point_index)
        .def_readonly("replication", &SweepEntry::replication)
        .def_readonly("params", &SweepEntry::params);

    py::class_<AttackEvent>(m, "AttackEvent")
        .def(py::init([](TimeValue time, std::string target) {
                 return AttackEvent{time, std::move(target)};
             }),
             py::arg("time_us"), py::arg("target"))
        .def_readwrite("time_us", &AttackEvent::time)
        .def_readwrite("target", &AttackEvent::target);

    py::class_<DetectionSample>(m, "DetectionSample")
        .def_readonly("attack_time_us", &DetectionSample::attack_time)
        .def_readonly("detect_time_us", &DetectionSample::detect_time)
        .def_readonly("detecting_task", &DetectionSample::detecting_task)
        .def_readonly("latency_us", &DetectionSample::latency);

    py::class_<SimTrace>(m, "SimTrace")
        .def_property_readonly("events",
                               [](const SimTrace& t) {
                                   py::list out;
                                   for (const auto& e : t.events)
                                       out.append(py::make_tuple(e.time.us, to_string(e.kind),
                                                                 e.task, e.core));
                                   return out;
                               })
        .def_readonly("detections", &SimTrace::detections)
        .def_readonly("censored_attacks", &SimTrace::censored_attacks)
        .def_readonly("deadline_misses", &SimTrace::deadline_misses)
        .def_readonly("max_response", &SimTrace::max_response)
        .def_readonly("duration_us", &SimTrace::duration);

    m.def("assign_rm_priorities", &assign_rm_priorities, py::arg("rt_tasks"));
    m.def("assign_security_priorities", &assign_security_priorities, py::arg("sec_tasks"));
    m.def("validate_config", &validate_config, py::arg("config"));
    m.def("dbf", &dbf, py::arg("task"), py::arg("t_us"));
    m.def(
        "necessary_condition",
        [](const std::vector<RealTimeTask>& tasks, int cores, std::optional<TimeValue> horizon) {
            TimeValue h = horizon ? *horizon : default_horizon(tasks).value;
            return necessary_condition(tasks, cores, h);
        },
        py::arg("rt_tasks"), py::arg("cores"), py::arg("horizon_us") = py::none());
    m.def("interference", &interference, py::arg("sec_task"), py::arg("core"), py::arg("config"),
          py::arg("partial_alloc"), py::arg("period_us"));
    m.def("security_schedulable", &security_schedulable, py::arg("sec_task"), py::arg("core"),
          py::arg("config"), py::arg("partial_alloc"), py::arg("period_us"));
    m.def(
        "rt_response_time",
        [](const RealTimeTask& task, const std::vector<RealTimeTask>& hp) -> py::object {
            auto r = rt_response_time(task, hp);
            return r ? py::cast(*r) : py::none();
        },
        py::arg("task"), py::arg("higher_priority_cohabitants"),
        "Response time in microseconds, or None when the iteration diverges");
    m.def("tightness", &tightness, py::arg("desired_period_us"), py::arg("period_us"));
    m.def(
        "optimize_period",
        [](const SecurityTask& task, int core, const SystemConfig& config,
           const Allocation& partial) -> py::object {
            auto sol = optimize_period(task, core, config, partial);
            return sol ? py::cast(*sol) : py::none();
        },
        py::arg("sec_task"), py::arg("core"), py::arg("config"),
        py::arg("partial_alloc") = Allocation{}, "PeriodSolution, or None when infeasible");
    m.def("objective_value", &objective_value, py::arg("allocation"), py::arg("sec_tasks"));
    m.def(
        "best_fit_partition",
        [](const std::vector<RealTimeTask>& tasks, int cores) -> py::object {
            auto result = best_fit_partition(tasks, cores);
            if (result.ok())
                return py::cast(*result.platform);
            return py::cast(result.failed_task);
        },
        py::arg("rt_tasks"), py::arg("core_count"),
        "Platform on success, else the id of the first unplaceable task");
    m.def("hydra_allocate", &hydra_allocate, py::arg("config"));
    m.def("single_core_allocate", &single_core_allocate, py::arg("config"));
    m.def(
        "exhaustive_optimal",
        [](const SystemConfig& config, std::uint64_t max_assignments) {
            return exhaustive_optimal(config, {max_assignments});
        },
        py::arg("config"), py::arg("max_assignments") = 1'000'000ULL);
    m.def(
        "delta_eta",
        [](const AllocationOutcome& opt, const AllocationOutcome& heur) -> py::object {
            auto d = delta_eta(opt, heur);
            return d ? py::cast(*d) : py::none();
        },
        py::arg("optimal"), py::arg("heuristic"));
    m.def("cumulative_tightness", &cumulative_tightness, py::arg("outcome"));
    m.def(
        "randfixedsum",
        [](int n, double total, double lo, double hi, std::uint64_t seed) {
            Rng rng(seed);
            return randfixedsum(n, total, lo, hi, rng);
        },
        py::arg("n"), py::arg("total"), py::arg("lo"), py::arg("hi"), py::arg("seed"));
    m.def("default_gen_params", &default_gen_params, py::arg("cores"));
    m.def("generate_taskset", &generate_taskset, py::arg("params"));
    m.def("sweep_params", &sweep_params, py::arg("base"), py::arg("replications"),
          py::arg("master_seed"), "The 39-point utilization grid times replications");
    m.def(
        "simulate",
        [](const SystemConfig& config, const Allocation& allocation, TimeValue duration,
           const std::vector<AttackEvent>& plan, bool record_events, bool validate,
           bool detect_in_progress) {
            SimOptions options{record_events, validate, detect_in_progress};
            return simulate(config, allocation, duration, plan, options);
        },
        py::arg("config"), py::arg("allocation"), py::arg("duration_us"),
        py::arg("attack_plan") = std::vector<AttackEvent>{}, py::arg("record_events") = true,
        py::arg("validate") = true, py::arg("detect_in_progress") = false);
    m.def("inject_attacks", &inject_attacks, py::arg("config"), py::arg("count"),
          py::arg("duration_us"), py::arg("seed"));
    m.def(
        "detection_latency",
        [](const SimTrace& trace, const std::vector<AttackEvent>& plan, bool in_progress) {
            auto result = detection_latency(trace, plan, in_progress);
            return py::make_tuple(result.samples, result.censored);
        },
        py::arg("trace"), py::arg("attack_plan"), py::arg("detect_in_progress") = false,
        "(samples, censored_count)");
    m.def("empirical_cdf", &empirical_cdf, py::arg("latencies_us"), py::arg("x_us"));
    m.def("mean_detection_improvement", &mean_detection_improvement, py::arg("hydra_latencies"),
          py::arg("singlecore_latencies"));
    m.def(
        "config_to_json",
        [](const SystemConfig& config) { return config_to_json(config).dump(2); },
        py::arg("config"));
    m.def(
        "config_from_json",
        [](const std::string& text) { return config_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));
}
